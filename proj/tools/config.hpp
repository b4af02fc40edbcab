#pragma once

// Run configuration: a single JSON file describing the disk, the scan
// rectangle, the semiclassical experiment grid, region specs, and outputs.

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tevr/diskmodel.hpp"
#include "tevr/regions.hpp"
#include "tevr/rootscan.hpp"

namespace tevr_cli {

using nlohmann::json;

struct zpoint {
    tevr::cplx z{-1.0, 0.0};
    tevr::zone zn = tevr::zone::Z2;
    double epsilon = 0.0;
};

struct run_config {
    tevr::disk_config disk;
    tevr::scan_rect rect{1.0, 100.0, -5.0, 5.0};
    double tol = 1e-10;
    int k_max = -1; // -1: auto
    double exclusion_radius = -1.0;

    std::vector<double> h_list{1.0 / 16, 1.0 / 32, 1.0 / 64};
    std::vector<zpoint> z_list{{}};
    unsigned jet_order = 4;
    unsigned grid_nx = 64;
    unsigned grid_nxi = 513;
    double grid_xi_max = 4.0;
    int m_max = -1;     // modes for dtn tables; -1: auto from xi window
    double xi_window = 1.9;
    int medium_side = 1;

    std::vector<tevr::region_spec> regions;
    std::vector<double> r_values{10.0, 20.0, 40.0};

    std::string csv_path = "eigs.csv";
    std::string json_path = "eigs.json";
    std::string svg_path = "eigs.svg";
    std::string eig_input; // for `regions`: defaults to csv_path
};

inline tevr::zone zone_of_string(const std::string& s) {
    if (s == "Z1") return tevr::zone::Z1;
    if (s == "Z2") return tevr::zone::Z2;
    if (s == "Z3") return tevr::zone::Z3;
    tevr::fail(tevr::errc::invalid_argument, "config: unknown zone tag '" + s + "'");
}

inline tevr::region_kind region_kind_of_string(const std::string& s) {
    if (s == "lambda_plus") return tevr::region_kind::lambda_plus;
    if (s == "lambda_minus") return tevr::region_kind::lambda_minus;
    if (s == "t12_front") return tevr::region_kind::t12_front;
    if (s == "t18_neg_axis") return tevr::region_kind::t18_neg_axis;
    if (s == "pv_strip") return tevr::region_kind::pv_strip;
    tevr::fail(tevr::errc::invalid_argument, "config: unknown region kind '" + s + "'");
}

inline run_config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) tevr::fail(tevr::errc::invalid_argument, "config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        tevr::fail(tevr::errc::invalid_argument, std::string("config: JSON parse error: ") + e.what());
    }
    run_config rc;
    if (j.contains("disk")) {
        const auto& d = j["disk"];
        rc.disk.radius = d.value("radius", 1.0);
        if (d.contains("media")) {
            const auto& m = d["media"];
            rc.disk.c1 = m.value("c1", 1.0);
            rc.disk.n1 = m.value("n1", 1.0);
            rc.disk.c2 = m.value("c2", 1.0);
            rc.disk.n2 = m.value("n2", 4.0);
        }
    }
    if (j.contains("scan")) {
        const auto& s = j["scan"];
        if (s.contains("rect")) {
            auto r = s["rect"];
            if (!r.is_array() || r.size() != 4)
                tevr::fail(tevr::errc::invalid_argument, "config: scan.rect must be [re_min, re_max, im_min, im_max]");
            rc.rect = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()};
        }
        rc.tol = s.value("tol", 1e-10);
        if (s.contains("k_max") && !s["k_max"].is_string()) rc.k_max = s["k_max"].get<int>();
        rc.exclusion_radius = s.value("exclusion_radius", -1.0);
    }
    if (j.contains("semiclassical")) {
        const auto& sc = j["semiclassical"];
        if (sc.contains("h")) rc.h_list = sc["h"].get<std::vector<double>>();
        if (sc.contains("z")) {
            rc.z_list.clear();
            for (const auto& zj : sc["z"]) {
                zpoint zp;
                zp.z = {zj.value("re", -1.0), zj.value("im", 0.0)};
                zp.zn = zone_of_string(zj.value("zone", "Z2"));
                zp.epsilon = zj.value("epsilon", 0.0);
                rc.z_list.push_back(zp);
            }
        }
        rc.jet_order = sc.value("jet_order", 4u);
        if (sc.contains("grid")) {
            const auto& g = sc["grid"];
            rc.grid_nx = g.value("nx", 64u);
            rc.grid_nxi = g.value("nxi", 513u);
            rc.grid_xi_max = g.value("xi_max", 4.0);
        }
        rc.m_max = sc.value("m_max", -1);
        rc.xi_window = sc.value("xi_window", 1.9);
        rc.medium_side = sc.value("side", 1);
    }
    if (j.contains("regions")) {
        for (const auto& rj : j["regions"]) {
            tevr::region_spec rs;
            rs.kind = region_kind_of_string(rj.value("kind", "lambda_plus"));
            rs.C = rj.value("C", 1.0);
            rs.epsilon = rj.value("epsilon", 0.05);
            rs.N = rj.value("N", 1.0);
            rs.C_tilde = rj.value("C_tilde", 1.0);
            rs.kappa = rj.value("kappa", 1.0);
            rc.regions.push_back(rs);
        }
    }
    if (j.contains("count") && j["count"].contains("r_values"))
        rc.r_values = j["count"]["r_values"].get<std::vector<double>>();
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        rc.csv_path = o.value("csv", rc.csv_path);
        rc.json_path = o.value("json", rc.json_path);
        rc.svg_path = o.value("svg", rc.svg_path);
        rc.eig_input = o.value("eig_input", std::string());
    }

    // validation: module preconditions surface as exit-code-2 errors here
    tevr::validate(rc.disk);
    if (!(rc.rect.re_min < rc.rect.re_max && rc.rect.im_min < rc.rect.im_max))
        tevr::fail(tevr::errc::invalid_argument, "config: degenerate scan rectangle");
    if (!(rc.tol > 0.0 && rc.tol <= 1e-6))
        tevr::fail(tevr::errc::invalid_argument, "config: tol must be in (0, 1e-6]");
    for (double h : rc.h_list)
        if (!(h > 0.0 && h < 1.0)) tevr::fail(tevr::errc::invalid_argument, "config: h values must be in (0,1)");
    for (const auto& zp : rc.z_list) (void)tevr::make_spectral_point(rc.h_list.front(), zp.z, zp.zn, zp.epsilon);
    if (rc.jet_order < 1 || rc.jet_order > 8)
        tevr::fail(tevr::errc::invalid_argument, "config: jet_order must be in [1, 8]");
    if (rc.medium_side != 1 && rc.medium_side != 2)
        tevr::fail(tevr::errc::invalid_argument, "config: side must be 1 or 2");
    return rc;
}

} // namespace tevr_cli
