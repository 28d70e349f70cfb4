#include "fdboot/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include <fmt/format.h>

namespace fdboot {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

double nice_step(double span) {
    const double raw = span / 5.0;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    for (const double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * magnitude >= raw) return m * magnitude;
    }
    return 10.0 * magnitude;
}

class Canvas {
public:
    Canvas(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
        if (!(x1_ > x0_)) x1_ = x0_ + 1.0;
        if (!(y1_ > y0_)) {
            const double pad = std::max(1e-9, std::abs(y0_) * 0.05 + 0.5);
            y0_ -= pad;
            y1_ += pad;
        }
        body_ = fmt::format(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
            "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n"
            "<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n",
            kWidth, kHeight, kWidth, kHeight, kWidth, kHeight);
    }

    double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom); }

    void axes(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
        const double plot_right = kWidth - kRight;
        const double plot_bottom = kHeight - kBottom;
        body_ += fmt::format(
            "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
            "stroke=\"black\"/>\n",
            kLeft, kTop, plot_right - kLeft, plot_bottom - kTop);
        const double xs = nice_step(x1_ - x0_);
        for (double x = std::ceil(x0_ / xs) * xs; x <= x1_ + 1e-9 * xs; x += xs) {
            body_ += fmt::format(
                "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n"
                "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4}</text>\n",
                px(x), plot_bottom, plot_bottom + 5.0, plot_bottom + 18.0, fmt::format("{:g}", x + 0.0));
        }
        const double ys = nice_step(y1_ - y0_);
        for (double y = std::ceil(y0_ / ys) * ys; y <= y1_ + 1e-9 * ys; y += ys) {
            body_ += fmt::format(
                "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n"
                "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5}</text>\n",
                kLeft - 5.0, py(y), kLeft, kLeft - 8.0, py(y) + 4.0,
                fmt::format("{:g}", std::abs(y) < 1e-12 * ys ? 0.0 : y));
        }
        body_ += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                             (kLeft + plot_right) / 2.0, kTop - 14.0, escape(title));
        body_ += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                             (kLeft + plot_right) / 2.0, kHeight - 12.0, escape(xlabel));
        body_ += fmt::format(
            "<text x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.2f})\">{1}</text>\n",
            (kTop + plot_bottom) / 2.0, escape(ylabel));
    }

    void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
                  double width, const std::string& dash = "", double opacity = 1.0) {
        std::string coords;
        for (const auto& [x, y] : points) {
            if (!coords.empty()) coords += ' ';
            coords += fmt::format("{:.2f},{:.2f}", px(x), py(y));
        }
        body_ += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{:g}\"", stroke, width);
        if (!dash.empty()) body_ += fmt::format(" stroke-dasharray=\"{}\"", dash);
        if (opacity < 1.0) body_ += fmt::format(" stroke-opacity=\"{:g}\"", opacity);
        body_ += fmt::format(" points=\"{}\"/>\n", coords);
    }

    void marker(double x, double y, const std::string& fill) {
        body_ += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(x), py(y), fill);
    }

    void legend(std::size_t slot, const std::string& label, const std::string& stroke,
                const std::string& dash = "") {
        const double x = kWidth - kRight + 12.0;
        const double y = kTop + 12.0 + 18.0 * static_cast<double>(slot);
        body_ += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"",
                             x, y, x + 24.0, y, stroke);
        if (!dash.empty()) body_ += fmt::format(" stroke-dasharray=\"{}\"", dash);
        body_ += fmt::format("/>\n<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", x + 30.0, y + 4.0, escape(label));
    }

    std::string finish() { return body_ + "</svg>\n"; }

private:
    double x0_, x1_, y0_, y1_;
    std::string body_;
};

const char* const kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string coverage_svg(const CoverageTable& table, const std::string& title) {
    double lo = 1.0;
    for (const auto& r : table.rows) lo = std::min({lo, r.nominal, r.empirical});
    lo = std::max(0.0, std::floor(lo * 10.0) / 10.0);
    if (lo >= 1.0) lo = 0.9;
    Canvas canvas(lo, 1.0, lo, 1.0);
    canvas.axes(title, "Nominal coverage", "Empirical coverage");
    canvas.polyline({{lo, lo}, {1.0, 1.0}}, "#7f7f7f", 1.0, "4,3");

    using Key = std::tuple<std::size_t, std::size_t, std::string, int>;
    std::map<Key, std::vector<std::pair<double, double>>> groups;
    std::vector<Key> order;
    for (const auto& r : table.rows) {
        Key key{r.B1, r.B2, r.bootstrap, r.method == BootstrapLevel::Single ? 0 : 1};
        if (!groups.count(key)) order.push_back(key);
        groups[key].emplace_back(r.nominal, r.empirical);
    }
    const bool several = order.size() > 2;
    for (std::size_t g = 0; g < order.size(); ++g) {
        const auto& [b1, b2, boot, method] = order[g];
        const std::string colour = kPalette[g % std::size(kPalette)];
        const std::string dash = method == 0 ? "" : "6,3";
        canvas.polyline(groups[order[g]], colour, 2.0, dash);
        for (const auto& [x, y] : groups[order[g]]) canvas.marker(x, y, colour);
        std::string label = method == 0 ? "single" : "double";
        if (several) label += fmt::format(" B1={} B2={}", b1, b2);
        canvas.legend(g, label, colour, dash);
    }
    return canvas.finish();
}

std::string band_svg(const FunctionalSample& sample, const BandSet& bands, const std::string& title) {
    const Grid& grid = *sample.grid();
    double lo = sample.values().minCoeff();
    double hi = sample.values().maxCoeff();
    const auto widen = [&](const Curve& c) {
        lo = std::min(lo, c.values().minCoeff());
        hi = std::max(hi, c.values().maxCoeff());
    };
    widen(bands.single.lower);
    widen(bands.single.upper);
    if (bands.double_level) {
        widen(bands.double_level->lower);
        widen(bands.double_level->upper);
    }
    Canvas canvas(grid.front(), grid.back(), lo, hi);
    canvas.axes(title, "t", "value");

    const auto points = [&](std::span<const double> values) {
        std::vector<std::pair<double, double>> out;
        out.reserve(values.size());
        for (std::size_t j = 0; j < values.size(); ++j) out.emplace_back(grid[j], values[j]);
        return out;
    };
    const auto curve_points = [&](const Curve& c) {
        return points({c.values().data(), c.size()});
    };
    for (std::size_t i = 0; i < sample.size(); ++i) {
        canvas.polyline(points(sample.row(i)), "#9a9a9a", 0.6, "", 0.6);
    }
    canvas.polyline(curve_points(bands.single.lower), "#d62728", 1.6);
    canvas.polyline(curve_points(bands.single.upper), "#d62728", 1.6);
    if (bands.double_level) {
        canvas.polyline(curve_points(bands.double_level->lower), "#1f77b4", 1.6, "2,3");
        canvas.polyline(curve_points(bands.double_level->upper), "#1f77b4", 1.6, "2,3");
    }
    canvas.polyline(curve_points(bands.single.estimate), "black", 2.0);

    canvas.legend(0, "estimate", "black");
    canvas.legend(1, "single bootstrap", "#d62728");
    if (bands.double_level) canvas.legend(2, "double bootstrap", "#1f77b4", "2,3");
    return canvas.finish();
}

}  // namespace fdboot
