// Command-line driver: transmission-eigenvalue scans on the disk and the
// semiclassical verification experiments, emitting CSV/JSON/SVG.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "svg.hpp"
#include "tevr/diskmodel.hpp"
#include "tevr/parametrix.hpp"
#include "tevr/regions.hpp"
#include "tevr/rootscan.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tevr;
using namespace tevr_cli;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(errc::invalid_argument, "cannot write " + p.string());
    out << content;
}

std::string eigs_to_csv(const std::vector<eig_record>& eigs) {
    std::string csv = "re_lambda,im_lambda,mode,multiplicity,residual,newton_iters\n";
    for (const auto& e : eigs) {
        csv += fmt17(e.lambda.real()) + "," + fmt17(e.lambda.imag()) + "," + std::to_string(e.mode) +
               "," + std::to_string(e.multiplicity) + "," + fmt17(e.rel_residual) + "," +
               std::to_string(e.newton_iters) + "\n";
    }
    return csv;
}

json eigs_to_json(const std::vector<eig_record>& eigs) {
    json arr = json::array();
    for (const auto& e : eigs) {
        arr.push_back({{"re_lambda", e.lambda.real()},
                       {"im_lambda", e.lambda.imag()},
                       {"mode", e.mode},
                       {"multiplicity", e.multiplicity},
                       {"residual", e.rel_residual},
                       {"newton_iters", e.newton_iters},
                       {"certified_real", e.certified_real}});
    }
    return arr;
}

std::vector<eig_record> eigs_from_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) fail(errc::invalid_argument, "cannot read eigenvalue file " + p.string());
    std::vector<eig_record> eigs;
    std::string line;
    if (!std::getline(in, line)) return eigs; // empty file: no eigenvalues
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        eig_record e;
        double re = 0, im = 0, resid = 0;
        int mode = 0, mult = 1, iters = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%d,%d,%lf,%d", &re, &im, &mode, &mult, &resid, &iters) != 6)
            fail(errc::invalid_argument, "malformed eigenvalue row: " + line);
        e.lambda = {re, im};
        e.mode = mode;
        e.multiplicity = mult;
        e.rel_residual = resid;
        e.newton_iters = iters;
        e.certified_real = (im == 0.0);
        eigs.push_back(e);
    }
    return eigs;
}

// Winding sentinels in strips above and below the scan rectangle: zero
// winding in them certifies no eigenvalue was clipped by the Im-truncation.
bool strip_sentinels_clear(const disk_config& cfg, const scan_rect& rect, int k_max) {
    double band = std::max(2.0, 0.5 * rect.height());
    scan_rect up{rect.re_min, rect.re_max, rect.im_max, rect.im_max + band};
    scan_rect down{rect.re_min, rect.re_max, rect.im_min - band, rect.im_min};
    for (int k = 0; k <= k_max; ++k) {
        auto f = det_fn(cfg, (unsigned)k);
        if (winding_count(f, up) != 0 || winding_count(f, down) != 0) return false;
    }
    return true;
}

int auto_k_max(const disk_config& cfg, const scan_rect& rect) {
    double lam_max = 0.0;
    for (double re : {rect.re_min, rect.re_max})
        for (double im : {rect.im_min, rect.im_max}) lam_max = std::max(lam_max, std::hypot(re, im));
    double omega = std::sqrt(lam_max) * std::max(std::sqrt(cfg.n1 / cfg.c1), std::sqrt(cfg.n2 / cfg.c2));
    return (int)std::ceil(omega * cfg.radius) + 20;
}

// --- subcommands -------------------------------------------------------------------

int cmd_solve(const run_config& rc, const fs::path& out, unsigned threads) {
    spectrum_options opt;
    opt.tol = rc.tol;
    opt.k_max = rc.k_max;
    opt.threads = threads;
    opt.exclusion_radius = rc.exclusion_radius;
    auto eigs = spectrum(rc.disk, rc.rect, opt);
    write_file(out / rc.csv_path, eigs_to_csv(eigs));
    write_file(out / rc.json_path, eigs_to_json(eigs).dump(1) + "\n");
    write_file(out / rc.svg_path, svg_scatter(eigs, rc.regions, rc.rect));
    std::printf("solve: %zu eigenvalue records written to %s\n", eigs.size(),
                (out / rc.csv_path).c_str());
    return 0;
}

int cmd_regions(const run_config& rc, const fs::path& out) {
    fs::path in = rc.eig_input.empty() ? (out / rc.csv_path) : fs::path(rc.eig_input);
    auto eigs = eigs_from_csv(in);
    if (eigs.empty()) {
        std::printf("regions: no eigenvalues\n");
        write_file(out / "regions_report.csv", "re_lambda,im_lambda\n");
        return 0;
    }

    std::string csv = "re_lambda,im_lambda,mode,multiplicity";
    for (size_t i = 0; i < rc.regions.size(); ++i) csv += ",region_" + std::to_string(i);
    csv += "\n";
    for (const auto& e : eigs) {
        csv += fmt17(e.lambda.real()) + "," + fmt17(e.lambda.imag()) + "," + std::to_string(e.mode) +
               "," + std::to_string(e.multiplicity);
        for (const auto& rs : rc.regions) csv += in_region(e.lambda, rs) ? ",1" : ",0";
        csv += "\n";
    }
    write_file(out / "regions_report.csv", csv);

    json summary;
    for (auto side : {branch_side::re_nonneg, branch_side::re_nonpos}) {
        const char* name = side == branch_side::re_nonneg ? "re_nonneg" : "re_nonpos";
        try {
            auto fit = exponent_fit(eigs, side);
            summary[name] = {{"beta", fit.below_floor ? -1e300 : fit.beta},
                             {"C", fit.C},
                             {"count", fit.branch_count},
                             {"on_axis", fit.on_axis},
                             {"below_floor", fit.below_floor}};
            std::printf("regions: branch %s beta=%.4f C=%.4g (%zu eigenvalues, %zu on-axis)\n", name,
                        fit.beta, fit.C, fit.branch_count, fit.on_axis);
            for (const auto& rs : rc.regions) {
                double p = 0.0;
                bool applies = false;
                if (rs.kind == region_kind::lambda_plus && side == branch_side::re_nonneg) {
                    p = 0.75 + rs.epsilon + 0.05;
                    applies = true;
                } else if (rs.kind == region_kind::t12_front && side == branch_side::re_nonneg) {
                    p = 0.8 + 0.05;
                    applies = true;
                } else if (rs.kind == region_kind::t18_neg_axis && side == branch_side::re_nonpos) {
                    p = -rs.N + 0.05;
                    applies = true;
                }
                if (!applies) continue;
                bool pass = fit.below_floor || fit.beta <= p;
                std::printf("regions: exponent_fit <= %.3f: %s\n", p, pass ? "PASS" : "FAIL");
            }
        } catch (const error& e) {
            if (e.code() != errc::insufficient_data) throw;
            summary[side == branch_side::re_nonneg ? "re_nonneg" : "re_nonpos"] = {
                {"insufficient_data", true}};
        }
    }
    write_file(out / "regions_summary.json", summary.dump(1) + "\n");

    scan_rect box = rc.rect;
    write_file(out / rc.svg_path, svg_scatter(eigs, rc.regions, box));
    return 0;
}

int cmd_dtn_check(const run_config& rc, const fs::path& out) {
    double c = rc.medium_side == 1 ? rc.disk.c1 : rc.disk.c2;
    double n = rc.medium_side == 1 ? rc.disk.n1 : rc.disk.n2;
    std::string csv = "h,re_z,im_z,error_rho,error_rho_hb,argmax_mode\n";
    std::vector<double> lh, le;
    for (const auto& zp : rc.z_list) {
        lh.clear();
        le.clear();
        for (double h : rc.h_list) {
            auto sp = make_spectral_point(h, zp.z, zp.zn, zp.epsilon);
            unsigned M = rc.m_max > 0 ? (unsigned)rc.m_max
                                      : (unsigned)std::ceil(rc.xi_window * rc.disk.radius / h);
            auto corr = disk_dtn_correction(sp, rc.disk.radius, c, n, rc.xi_window + 0.6,
                                            rc.grid_nxi, rc.jet_order);
            auto r0 = dtn_compare(sp, rc.disk.radius, c, n, M);
            auto r1 = dtn_compare(sp, rc.disk.radius, c, n, M, [&](double xi) { return corr(xi); });
            csv += fmt17(h) + "," + fmt17(zp.z.real()) + "," + fmt17(zp.z.imag()) + "," +
                   fmt17(r0.max_weighted_error) + "," + fmt17(r1.max_weighted_error) + "," +
                   std::to_string(r0.argmax_mode) + "\n";
            lh.push_back(std::log(h));
            le.push_back(std::log(r0.max_weighted_error));
        }
        if (lh.size() >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t i = 0; i < lh.size(); ++i) {
                sx += lh[i];
                sy += le[i];
                sxx += lh[i] * lh[i];
                sxy += lh[i] * le[i];
            }
            double slope = (sxy - sx * sy / (double)lh.size()) / (sxx - sx * sx / (double)lh.size());
            csv += "slope," + fmt17(zp.z.real()) + "," + fmt17(zp.z.imag()) + "," + fmt17(slope) + ",,\n";
            std::printf("dtn-check: z=(%g,%g) slope of log error vs log h: %.3f\n", zp.z.real(),
                        zp.z.imag(), slope);
        }
    }
    write_file(out / "dtn_check.csv", csv);
    return 0;
}

int cmd_parametrix_check(const run_config& rc, const fs::path& out) {
    double c = rc.medium_side == 1 ? rc.disk.c1 : rc.disk.c2;
    double n = rc.medium_side == 1 ? rc.disk.n1 : rc.disk.n2;
    auto geom = boundary_geometry::disk(rc.disk.radius);
    auto md = disk_normal_model(rc.disk.radius, c, n);
    std::string csv = "re_z,im_z,h,x1,eikonal_ratio,transport_ratio\n";
    std::string summary;
    for (const auto& zp : rc.z_list) {
        for (double h : rc.h_list) {
            auto sp = make_spectral_point(h, zp.z, zp.zn, zp.epsilon);
            auto jet = disk_normal_jet(rc.disk.radius, c, n, rc.jet_order, rc.grid_nx);
            auto ph = solve_eikonal(jet, sp, geom, uniform_xi_nodes(rc.grid_xi_max, rc.grid_nxi));
            auto am = solve_transport(jet, ph, [](double) { return 1.0; }, sp);
            std::vector<double> x1s;
            for (int j = 4; j <= 10; ++j) x1s.push_back(std::pow(2.0, -j));
            auto rep = residual_ratios(md, ph, am, sp, x1s);
            for (size_t i = 0; i < rep.x1.size(); ++i)
                csv += fmt17(zp.z.real()) + "," + fmt17(zp.z.imag()) + "," + fmt17(h) + "," +
                       fmt17(rep.x1[i]) + "," + fmt17(rep.eikonal_ratio[i]) + "," +
                       fmt17(rep.transport_ratio[i]) + "\n";
            double ds = phase_bound_delta_star(ph);
            summary += "z=(" + fmt17(zp.z.real()) + "," + fmt17(zp.z.imag()) + ") h=" + fmt17(h) +
                       " delta_star=" + fmt17(ds) + "\n";
            std::printf("parametrix-check: z=(%g,%g) h=%g delta*=%.4f\n", zp.z.real(), zp.z.imag(), h, ds);
        }
    }
    write_file(out / "parametrix_check.csv", csv);
    write_file(out / "parametrix_summary.txt", summary);
    return 0;
}

int cmd_count(const run_config& rc, const fs::path& out, unsigned threads) {
    spectrum_options opt;
    opt.tol = rc.tol;
    opt.k_max = rc.k_max;
    opt.threads = threads;
    opt.exclusion_radius = rc.exclusion_radius;
    auto eigs = spectrum(rc.disk, rc.rect, opt);

    int km = rc.k_max >= 0 ? rc.k_max : auto_k_max(rc.disk, rc.rect);
    bool strips = strip_sentinels_clear(rc.disk, rc.rect, km);
    auto flags = condition_flags_of(media_of(rc.disk), boundary_geometry::disk(rc.disk.radius));
    bool complete_total = strips, complete_neg = strips;
    for (double r : rc.r_values) {
        double r2 = r * r;
        if (r2 > rc.rect.re_max) complete_total = false;
        if (r2 > -rc.rect.re_min) {
            complete_neg = false;
            if (flags.c1_8) complete_total = false; // negative branch populated
        }
    }
    auto table = weyl_compare(eigs, rc.disk, rc.r_values, complete_total, complete_neg);

    std::string csv = "r,counted,predicted,ratio,counted_neg,predicted_neg,ratio_neg\n";
    for (const auto& row : table) {
        csv += fmt17(row.r);
        if (row.total_valid)
            csv += "," + std::to_string(row.counted) + "," + fmt17(row.predicted) + "," + fmt17(row.ratio);
        else
            csv += ",,,";
        if (row.neg_valid)
            csv += "," + std::to_string(row.counted_neg) + "," + fmt17(row.predicted_neg) + "," +
                   fmt17(row.ratio_neg);
        else
            csv += ",,,";
        csv += "\n";
        std::printf("count: r=%g", row.r);
        if (row.total_valid) std::printf("  N=%ld predicted=%.2f ratio=%.4f", row.counted, row.predicted, row.ratio);
        if (row.neg_valid && row.predicted_neg > 0.0)
            std::printf("  N-=%ld predicted=%.2f ratio=%.4f", row.counted_neg, row.predicted_neg,
                        row.ratio_neg);
        std::printf("\n");
    }
    write_file(out / "count.csv", csv);
    write_file(out / rc.csv_path, eigs_to_csv(eigs));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmission eigenvalue toolkit: disk spectra and semiclassical boundary checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    unsigned threads = 0;
    unsigned long long seed = 0; // reserved: fixes the power-iteration start vector
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (default: all cores)");
    app.add_option("--seed", seed, "seed for the power-iteration start vector");

    auto* sc_solve = app.add_subcommand("solve", "locate transmission eigenvalues in the scan rectangle");
    auto* sc_regions = app.add_subcommand("regions", "region membership report and envelope fits");
    auto* sc_dtn = app.add_subcommand("dtn-check", "DtN vs boundary-symbol convergence table");
    auto* sc_par = app.add_subcommand("parametrix-check", "eikonal/transport residual ratios");
    auto* sc_count = app.add_subcommand("count", "Weyl counting comparison");
    for (auto* sc : {sc_solve, sc_regions, sc_dtn, sc_par, sc_count}) sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        run_config rc = load_config(config_path);
        fs::path out(out_dir);
        fs::create_directories(out);
        if (sc_solve->parsed()) return cmd_solve(rc, out, threads);
        if (sc_regions->parsed()) return cmd_regions(rc, out);
        if (sc_dtn->parsed()) return cmd_dtn_check(rc, out);
        if (sc_par->parsed()) return cmd_parametrix_check(rc, out);
        if (sc_count->parsed()) return cmd_count(rc, out, threads);
    } catch (const error& e) {
        bool validation = e.code() == errc::invalid_argument || e.code() == errc::condition_violated ||
                          e.code() == errc::zone_mismatch;
        std::fprintf(stderr, "error: %s\n", e.what());
        return validation ? 2 : 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
