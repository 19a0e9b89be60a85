#include "spinmarket/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "spinmarket/error.hpp"

namespace spinmarket::svg {

namespace {

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
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

std::string num(double v, const char* fmt = "%.1f") {
    char buf[32];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        } else if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

}  // namespace

void decimate_minmax(std::span<const double> x, std::span<const double> y, std::size_t columns,
                     std::vector<double>& x_out, std::vector<double>& y_out) {
    x_out.clear();
    y_out.clear();
    const std::size_t n = std::min(x.size(), y.size());
    if (n == 0 || columns == 0) return;
    const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    const double x0 = *xmin_it;
    const double width = *xmax_it - x0;
    if (!(width > 0.0)) {
        x_out.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
        y_out.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
        return;
    }

    std::size_t i = 0;
    for (std::size_t col = 0; col < columns && i < n; ++col) {
        const double edge = col + 1 == columns ? std::numeric_limits<double>::infinity()
                                               : x0 + width * static_cast<double>(col + 1) / columns;
        std::size_t lo = i, hi = i;
        const std::size_t begin = i;
        while (i < n && x[i] < edge) {
            if (y[i] < y[lo]) lo = i;
            if (y[i] > y[hi]) hi = i;
            ++i;
        }
        if (i == begin) continue;
        const std::size_t first = std::min(lo, hi), second = std::max(lo, hi);
        x_out.push_back(x[first]);
        y_out.push_back(y[first]);
        if (second != first) {
            x_out.push_back(x[second]);
            y_out.push_back(y[second]);
        }
    }
}

std::string render(const Plot& plot, int width, int height) {
    constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 55;
    const double pw = width - kLeft - kRight;
    const double ph = height - kTop - kBottom;

    auto tx = [&](double v) { return plot.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return plot.log_y ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!plot.log_x || x > 0) && (!plot.log_y || y > 0);
    };

    std::vector<Series> drawn;
    Range rx, ry;
    for (const auto& s : plot.series) {
        Series d = s;
        if (s.x.size() > kDecimateAbove) decimate_minmax(s.x, s.y, static_cast<std::size_t>(pw), d.x, d.y);
        for (std::size_t i = 0; i < std::min(d.x.size(), d.y.size()); ++i) {
            if (!usable(d.x[i], d.y[i])) continue;
            rx.add(tx(d.x[i]));
            ry.add(ty(d.y[i]));
        }
        drawn.push_back(std::move(d));
    }
    rx.finish();
    ry.finish();

    auto px = [&](double v) { return kLeft + (tx(v) - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto py = [&](double v) { return kTop + ph - (ty(v) - ry.lo) / (ry.hi - ry.lo) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
      << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int t = 0; t <= 4; ++t) {
        const double fx = rx.lo + (rx.hi - rx.lo) * t / 4.0;
        const double fy = ry.lo + (ry.hi - ry.lo) * t / 4.0;
        const double sx = kLeft + pw * t / 4.0;
        const double sy = kTop + ph - ph * t / 4.0;
        const double vx = plot.log_x ? std::pow(10.0, fx) : fx;
        const double vy = plot.log_y ? std::pow(10.0, fy) : fy;
        o << "<text x=\"" << num(sx) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
          << num(vx, "%.3g") << "</text>\n";
        o << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy + 4) << "\" text-anchor=\"end\">"
          << num(vy, "%.3g") << "</text>\n";
    }
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
      << escape(plot.x_label) << "</text>\n"
      << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(kTop + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

    int legend_row = 0;
    for (const auto& s : drawn) {
        const std::string color = escape(s.color);
        if (s.markers) {
            o << "<g fill=\"" << color << "\">\n";
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
                if (!usable(s.x[i], s.y[i])) continue;
                o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"2\"/>\n";
            }
            o << "</g>\n";
        } else {
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
            bool first = true;
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
                if (!usable(s.x[i], s.y[i])) continue;
                if (!first) o << ' ';
                o << num(px(s.x[i])) << ',' << num(py(s.y[i]));
                first = false;
            }
            o << "\"/>\n";
        }
        const double ly = kTop + 12 + 18 * legend_row++;
        o << "<rect x=\"" << num(kLeft + pw + 12) << "\" y=\"" << num(ly - 9) << "\" width=\"12\" height=\"10\" fill=\""
          << color << "\"/>\n"
          << "<text x=\"" << num(kLeft + pw + 30) << "\" y=\"" << num(ly) << "\">" << escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write(const std::filesystem::path& path, const Plot& plot) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << render(plot);
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace spinmarket::svg
