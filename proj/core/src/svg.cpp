#include "spdc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "spdc/errors.hpp"
#include "spdc/io.hpp"

namespace spdc {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string num_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// Dark-blue to yellow ramp, linear between anchor colors.
std::string color(double t) {
    static const double stops[5][3] = {{68, 1, 84},
                                       {59, 82, 139},
                                       {33, 145, 140},
                                       {94, 201, 98},
                                       {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int k = std::min(3, static_cast<int>(t));
    const double f = t - k;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)",
                  static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                  static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                  static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
    return buf;
}

constexpr int kPlotW = 560, kPlotH = 560, kMarginL = 70, kMarginB = 50, kMarginT = 40,
              kMarginR = 20;

std::string svg_open(int w, int h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
           "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) +
           " " + std::to_string(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 int size = 13) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
           std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

}  // namespace

void write_heatmap_svg(const std::filesystem::path& path, const JointSpectrum& js,
                       const std::string& title) {
    js.validate();
    // Block-average down to at most 128 cells per axis.
    const int bs = (js.grid.signal.n + 127) / 128;
    const int bi = (js.grid.idler.n + 127) / 128;
    const int ns = (js.grid.signal.n + bs - 1) / bs;
    const int ni = (js.grid.idler.n + bi - 1) / bi;
    Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(ns, ni);
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(ns, ni);
    for (int i = 0; i < js.grid.signal.n; ++i) {
        for (int j = 0; j < js.grid.idler.n; ++j) {
            const double v = js.kind == SpectrumKind::Jsa ? std::abs(js.values(i, j))
                                                          : js.values(i, j);
            cells(i / bs, j / bi) += v;
            counts(i / bs, j / bi) += 1.0;
        }
    }
    cells.array() /= counts.array();
    const double vmax = cells.maxCoeff();
    if (!(vmax > 0.0)) throw DomainError("cannot render an empty spectrum");

    const int W = kMarginL + kPlotW + kMarginR, H = kMarginT + kPlotH + kMarginB;
    std::string out = svg_open(W, H);
    out += text(kMarginL + kPlotW / 2.0, kMarginT - 14, title, "middle", 15);
    const double cw = static_cast<double>(kPlotW) / ni;
    const double ch = static_cast<double>(kPlotH) / ns;
    for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < ni; ++j) {
            // Signal increases upward, idler to the right.
            const double x = kMarginL + j * cw;
            const double y = kMarginT + kPlotH - (i + 1) * ch;
            out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw + 0.5) +
                   "\" height=\"" + num(ch + 0.5) + "\" fill=\"" + color(cells(i, j) / vmax) +
                   "\"/>\n";
        }
    }
    const char* unit = js.grid.is_wavelength() ? " nm" : " rad/ps";
    out += text(kMarginL, kMarginT + kPlotH + 18, num_label(js.grid.idler.start) + unit, "start");
    out += text(kMarginL + kPlotW, kMarginT + kPlotH + 18, num_label(js.grid.idler.last()) + unit,
                "end");
    out += text(kMarginL + kPlotW / 2.0, kMarginT + kPlotH + 36, "idler");
    out += "<g transform=\"translate(" + num(kMarginL - 46) + " " +
           num(kMarginT + kPlotH / 2.0) + ") rotate(-90)\">" +
           text(0, 0, "signal", "middle") + "</g>\n";
    out += text(kMarginL - 8, kMarginT + kPlotH, num_label(js.grid.signal.start) + unit, "end", 11);
    out += text(kMarginL - 8, kMarginT + 10, num_label(js.grid.signal.last()) + unit, "end", 11);
    out += "</svg>\n";
    atomic_write(path, out);
}

void write_sweep_svg(const std::filesystem::path& path, const std::vector<SweepRow>& rows,
                     const std::string& title) {
    if (rows.size() < 2) throw ContractError("sweep chart needs at least two rows");
    const int W = kMarginL + kPlotW + kMarginR, H = kMarginT + kPlotH / 2 + kMarginB;
    const int ph = kPlotH / 2;
    double x0 = rows.front().lambda_nm, x1 = rows.back().lambda_nm;
    double y0 = 1.0, y1 = 0.0;
    for (const SweepRow& r : rows) {
        y0 = std::min({y0, r.p_jsi, r.p_jsa});
        y1 = std::max({y1, r.p_jsi, r.p_jsa});
    }
    const double ypad = 0.05 * (y1 - y0 + 1e-12);
    y0 -= ypad;
    y1 += ypad;

    auto X = [&](double l) { return kMarginL + (l - x0) / (x1 - x0) * kPlotW; };
    auto Y = [&](double p) { return kMarginT + ph - (p - y0) / (y1 - y0) * ph; };

    std::string out = svg_open(W, H);
    out += text(kMarginL + kPlotW / 2.0, kMarginT - 14, title, "middle", 15);
    out += "<rect x=\"" + num(kMarginL) + "\" y=\"" + num(kMarginT) + "\" width=\"" +
           num(kPlotW) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    const struct {
        double SweepRow::* field;
        const char* color;
        const char* name;
    } series[2] = {{&SweepRow::p_jsi, "#1f77b4", "intensity purity"},
                   {&SweepRow::p_jsa, "#d62728", "amplitude purity"}};
    for (const auto& s : series) {
        std::string pts;
        for (const SweepRow& r : rows)
            pts += num(X(r.lambda_nm)) + "," + num(Y(r.*(s.field))) + " ";
        out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.5\"/>\n";
    }
    out += text(kMarginL, kMarginT + ph + 18, num_label(x0) + " nm", "start");
    out += text(kMarginL + kPlotW, kMarginT + ph + 18, num_label(x1) + " nm", "end");
    out += text(kMarginL - 8, kMarginT + ph, num_label(y0 + ypad), "end", 11);
    out += text(kMarginL - 8, kMarginT + 10, num_label(y1 - ypad), "end", 11);
    out += text(kMarginL + 120, kMarginT + 16, "intensity purity", "start", 12);
    out += "<line x1=\"" + num(kMarginL + 90) + "\" y1=\"" + num(kMarginT + 12) + "\" x2=\"" +
           num(kMarginL + 114) + "\" y2=\"" + num(kMarginT + 12) +
           "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    out += text(kMarginL + 120, kMarginT + 34, "amplitude purity", "start", 12);
    out += "<line x1=\"" + num(kMarginL + 90) + "\" y1=\"" + num(kMarginT + 30) + "\" x2=\"" +
           num(kMarginL + 114) + "\" y2=\"" + num(kMarginT + 30) +
           "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    out += "</svg>\n";
    atomic_write(path, out);
}

}  // namespace spdc
