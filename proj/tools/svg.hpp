#pragma once

// Minimal SVG scatter emitter: eigenvalues as points, eigenvalue-free region
// boundaries as curves |Im| = C (|Re|+1)^p. No plotting dependency.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tevr/regions.hpp"
#include "tevr/rootscan.hpp"

namespace tevr_cli {

struct svg_canvas {
    double re_min, re_max, im_min, im_max;
    int width = 900, height = 600, margin = 50;

    double px(double re) const {
        return margin + (re - re_min) / (re_max - re_min) * (width - 2 * margin);
    }
    double py(double im) const {
        return height - margin - (im - im_min) / (im_max - im_min) * (height - 2 * margin);
    }
};

inline std::string svg_scatter(const std::vector<tevr::eig_record>& eigs,
                               const std::vector<tevr::region_spec>& regions,
                               tevr::scan_rect rect) {
    svg_canvas cv{rect.re_min, rect.re_max, rect.im_min, rect.im_max};
    std::string out;
    char buf[256];
    auto emit = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out += buf;
    };
    emit("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n", cv.width, cv.height);
    out += "<!-- tevr spectrum plot v1 -->\n";
    emit("<rect x=\"0\" y=\"0\" width=\"%d\" height=\"%d\" fill=\"white\"/>\n", cv.width, cv.height);

    // axes
    if (rect.re_min < 0.0 && rect.re_max > 0.0)
        emit("<line x1=\"%.2f\" y1=\"%d\" x2=\"%.2f\" y2=\"%d\" stroke=\"#999\"/>\n", cv.px(0.0),
             cv.margin, cv.px(0.0), cv.height - cv.margin);
    if (rect.im_min < 0.0 && rect.im_max > 0.0)
        emit("<line x1=\"%d\" y1=\"%.2f\" x2=\"%d\" y2=\"%.2f\" stroke=\"#999\"/>\n", cv.margin,
             cv.py(0.0), cv.width - cv.margin, cv.py(0.0));
    emit("<text x=\"%d\" y=\"%d\" font-size=\"12\">Re lambda in [%g, %g], Im lambda in [%g, %g]</text>\n",
         cv.margin, cv.height - 12, rect.re_min, rect.re_max, rect.im_min, rect.im_max);

    // region boundary curves
    const char* colors[] = {"#c33", "#36c", "#393", "#a3a", "#b73"};
    int ci = 0;
    for (const auto& rs : regions) {
        std::string path;
        char seg[64];
        bool first = true;
        for (int i = 0; i <= 400; ++i) {
            double re = rect.re_min + (rect.re_max - rect.re_min) * (double)i / 400.0;
            double im = 0.0;
            using tevr::region_kind;
            switch (rs.kind) {
                case region_kind::lambda_plus:
                    if (re < 0.0) continue;
                    im = rs.C * std::pow(re + 1.0, 0.75 + rs.epsilon);
                    break;
                case region_kind::t12_front:
                    if (re < 0.0) continue;
                    im = rs.C * std::pow(re + 1.0, 0.8);
                    break;
                case region_kind::t18_neg_axis:
                    if (re > 0.0) continue;
                    im = rs.C * std::pow(std::fabs(re) + 1.0, -rs.N);
                    break;
                case region_kind::pv_strip:
                    im = rs.C * std::pow(std::fabs(re) + 1.0, 1.0 - 0.5 * rs.kappa);
                    break;
                case region_kind::lambda_minus:
                    im = (re <= 0.0) ? rs.C : rect.im_max * 2.0;
                    break;
            }
            if (im > rect.im_max) continue;
            std::snprintf(seg, sizeof seg, "%s%.2f %.2f", first ? "M" : " L", cv.px(re), cv.py(im));
            path += seg;
            first = false;
        }
        if (!path.empty()) {
            emit("<path d=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.2\"/>\n", path.c_str(),
                 colors[ci % 5]);
            // mirror below the axis
            std::string lower = path;
            // regenerate with -im
            lower.clear();
            first = true;
            for (int i = 0; i <= 400; ++i) {
                double re = rect.re_min + (rect.re_max - rect.re_min) * (double)i / 400.0;
                double im = 0.0;
                using tevr::region_kind;
                switch (rs.kind) {
                    case region_kind::lambda_plus:
                        if (re < 0.0) continue;
                        im = rs.C * std::pow(re + 1.0, 0.75 + rs.epsilon);
                        break;
                    case region_kind::t12_front:
                        if (re < 0.0) continue;
                        im = rs.C * std::pow(re + 1.0, 0.8);
                        break;
                    case region_kind::t18_neg_axis:
                        if (re > 0.0) continue;
                        im = rs.C * std::pow(std::fabs(re) + 1.0, -rs.N);
                        break;
                    case region_kind::pv_strip:
                        im = rs.C * std::pow(std::fabs(re) + 1.0, 1.0 - 0.5 * rs.kappa);
                        break;
                    case region_kind::lambda_minus:
                        im = (re <= 0.0) ? rs.C : rect.im_max * 2.0;
                        break;
                }
                if (-im < rect.im_min) continue;
                std::snprintf(seg, sizeof seg, "%s%.2f %.2f", first ? "M" : " L", cv.px(re), cv.py(-im));
                lower += seg;
                first = false;
            }
            if (!lower.empty())
                emit("<path d=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.2\"/>\n", lower.c_str(),
                     colors[ci % 5]);
        }
        ++ci;
    }

    for (const auto& e : eigs) {
        if (!rect.contains(e.lambda)) continue;
        emit("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.2\" fill=\"%s\"/>\n", cv.px(e.lambda.real()),
             cv.py(e.lambda.imag()), e.certified_real ? "#06c" : "#000");
    }
    out += "</svg>\n";
    return out;
}

} // namespace tevr_cli
