#include "soarplan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "soarplan/format.hpp"

namespace soarplan::svg {

namespace {

constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string num(double v) {
    // Pixel coordinates only need two decimals.
    return format_double(std::round(v * 100.0) / 100.0);
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finalize() {
        if (!(lo <= hi)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-9) lo -= 0.5, hi += 0.5;
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    double span() const { return hi - lo; }
};

double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

std::string tick_label(double v, double step) {
    std::ostringstream ss;
    if (std::abs(v) < step * 1e-6) v = 0.0;
    if (std::abs(v) >= 1e5 || (std::abs(v) < 1e-3 && v != 0.0)) {
        ss.precision(2);
        ss << std::scientific << v;
    } else {
        ss << format_double(std::round(v / step) * step);
    }
    return ss.str();
}

class Frame {
public:
    Frame(Range x, Range y, int width, int height, bool equal_aspect)
        : x_(x), y_(y), width_(width), height_(height) {
        plot_w_ = width - kMarginLeft - kMarginRight;
        plot_h_ = height - kMarginTop - kMarginBottom;
        if (equal_aspect) {
            const double scale = std::min(plot_w_ / x_.span(), plot_h_ / y_.span());
            const double cx = 0.5 * (x_.lo + x_.hi), cy = 0.5 * (y_.lo + y_.hi);
            x_.lo = cx - 0.5 * plot_w_ / scale, x_.hi = cx + 0.5 * plot_w_ / scale;
            y_.lo = cy - 0.5 * plot_h_ / scale, y_.hi = cy + 0.5 * plot_h_ / scale;
        }
    }

    double px(double x) const { return kMarginLeft + (x - x_.lo) / x_.span() * plot_w_; }
    double py(double y) const { return kMarginTop + (y_.hi - y) / y_.span() * plot_h_; }
    double sx(double d) const { return d / x_.span() * plot_w_; }

    void axes(std::ostringstream& out, const std::string& title, const std::string& x_label,
              const std::string& y_label, bool x_ticks = true) const {
        out << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(kMarginTop) << "\" width=\""
            << num(plot_w_) << "\" height=\"" << num(plot_h_)
            << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << num(width_ / 2.0) << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";
        out << "<text x=\"" << num(kMarginLeft + plot_w_ / 2.0) << "\" y=\"" << num(height_ - 10.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape(x_label) << "</text>\n";
        out << "<text x=\"16\" y=\"" << num(kMarginTop + plot_h_ / 2.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
            << "transform=\"rotate(-90 16 " << num(kMarginTop + plot_h_ / 2.0) << ")\">"
            << escape(y_label) << "</text>\n";

        if (x_ticks) {
            const double step = nice_step(x_.span(), 6);
            for (double t = std::ceil(x_.lo / step) * step; t <= x_.hi; t += step) {
                out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(kMarginTop + plot_h_)
                    << "\" x2=\"" << num(px(t)) << "\" y2=\"" << num(kMarginTop + plot_h_ + 5.0)
                    << "\" stroke=\"#444444\"/>\n";
                out << "<text x=\"" << num(px(t)) << "\" y=\"" << num(kMarginTop + plot_h_ + 18.0)
                    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
                    << tick_label(t, step) << "</text>\n";
            }
        }
        const double step = nice_step(y_.span(), 6);
        for (double t = std::ceil(y_.lo / step) * step; t <= y_.hi; t += step) {
            out << "<line x1=\"" << num(kMarginLeft - 5.0) << "\" y1=\"" << num(py(t)) << "\" x2=\""
                << num(kMarginLeft) << "\" y2=\"" << num(py(t)) << "\" stroke=\"#444444\"/>\n";
            out << "<text x=\"" << num(kMarginLeft - 8.0) << "\" y=\"" << num(py(t) + 3.0)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
                << tick_label(t, step) << "</text>\n";
        }
    }

    double plot_w() const { return plot_w_; }
    double plot_h() const { return plot_h_; }

private:
    Range x_, y_;
    int width_, height_;
    double plot_w_ = 0.0, plot_h_ = 0.0;
};

void open_document(std::ostringstream& out, int width, int height) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

}  // namespace

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render(const LinePlot& plot, int width, int height) {
    Range xr, yr;
    for (const auto& line : plot.lines)
        for (const auto& [x, y] : line.points) xr.add(x), yr.add(y);
    for (const auto& c : plot.circles) {
        xr.add(c.center.first - c.radius), xr.add(c.center.first + c.radius);
        yr.add(c.center.second - c.radius), yr.add(c.center.second + c.radius);
    }
    for (const auto& m : plot.markers) xr.add(m.at.first), yr.add(m.at.second);
    xr.finalize();
    yr.finalize();
    const Frame f(xr, yr, width, height, plot.equal_aspect);

    std::ostringstream out;
    open_document(out, width, height);
    for (const auto& c : plot.circles) {
        out << "<circle cx=\"" << num(f.px(c.center.first)) << "\" cy=\"" << num(f.py(c.center.second))
            << "\" r=\"" << num(std::abs(f.sx(c.radius))) << "\" fill=\""
            << (c.fill.empty() ? "none" : c.fill) << "\" fill-opacity=\"" << num(c.opacity)
            << "\" stroke=\"" << (c.stroke.empty() ? "none" : c.stroke) << "\"/>\n";
    }
    for (const auto& line : plot.lines) {
        if (line.points.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << line.color << "\" stroke-width=\""
            << num(line.width) << "\" stroke-opacity=\"" << num(line.opacity) << "\" points=\"";
        for (std::size_t i = 0; i < line.points.size(); ++i) {
            if (i) out << ' ';
            out << num(f.px(line.points[i].first)) << ',' << num(f.py(line.points[i].second));
        }
        out << "\"/>\n";
    }
    for (const auto& m : plot.markers) {
        out << "<circle cx=\"" << num(f.px(m.at.first)) << "\" cy=\"" << num(f.py(m.at.second))
            << "\" r=\"5\" fill=\"" << m.color << "\" stroke=\"#000000\"/>\n";
        if (!m.label.empty()) {
            out << "<text x=\"" << num(f.px(m.at.first) + 8.0) << "\" y=\"" << num(f.py(m.at.second) - 8.0)
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(m.label) << "</text>\n";
        }
    }
    f.axes(out, plot.title, plot.x_label, plot.y_label);
    double ly = kMarginTop + 14.0;
    for (const auto& entry : plot.legend) {
        const double lx = width - kMarginRight - 120.0;
        out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20.0)
            << "\" y2=\"" << num(ly) << "\" stroke=\"" << entry.color << "\" stroke-width=\"3\"/>\n";
        out << "<text x=\"" << num(lx + 26.0) << "\" y=\"" << num(ly + 4.0)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(entry.label) << "</text>\n";
        ly += 16.0;
    }
    out << "</svg>\n";
    return out.str();
}

std::string render(const BarChart& chart, int width, int height) {
    Range yr;
    yr.add(0.0);
    for (const auto& b : chart.bars) {
        if (b.mean) {
            yr.add(*b.mean);
            if (b.std_dev) yr.add(*b.mean + *b.std_dev), yr.add(*b.mean - *b.std_dev);
        }
        for (double s : b.samples) yr.add(s);
    }
    yr.finalize();
    Range xr;
    xr.lo = 0.0;
    xr.hi = static_cast<double>(std::max<std::size_t>(1, chart.bars.size()));
    const Frame f(xr, yr, width, height, false);

    std::ostringstream out;
    open_document(out, width, height);
    const double zero = f.py(0.0);
    for (std::size_t i = 0; i < chart.bars.size(); ++i) {
        const Bar& b = chart.bars[i];
        const double left = f.px(static_cast<double>(i) + 0.2);
        const double right = f.px(static_cast<double>(i) + 0.8);
        const double mid = 0.5 * (left + right);
        if (b.mean) {
            const double top = f.py(*b.mean);
            out << "<rect x=\"" << num(left) << "\" y=\"" << num(std::min(top, zero)) << "\" width=\""
                << num(right - left) << "\" height=\"" << num(std::abs(zero - top)) << "\" fill=\""
                << b.color << "\" fill-opacity=\"0.6\" stroke=\"" << b.color << "\"/>\n";
            if (b.std_dev) {
                const double hi = f.py(*b.mean + *b.std_dev), lo = f.py(*b.mean - *b.std_dev);
                out << "<line x1=\"" << num(mid) << "\" y1=\"" << num(hi) << "\" x2=\"" << num(mid)
                    << "\" y2=\"" << num(lo) << "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
                for (double y : {hi, lo}) {
                    out << "<line x1=\"" << num(mid - 8.0) << "\" y1=\"" << num(y) << "\" x2=\""
                        << num(mid + 8.0) << "\" y2=\"" << num(y) << "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
                }
            }
        }
        for (std::size_t k = 0; k < b.samples.size(); ++k) {
            // Deterministic spread so overlapping samples stay visible.
            const double jitter = (static_cast<double>(k % 7) - 3.0) / 3.0 * 0.2 * (right - left);
            out << "<circle cx=\"" << num(mid + jitter) << "\" cy=\"" << num(f.py(b.samples[k]))
                << "\" r=\"2.5\" fill=\"#333333\" fill-opacity=\"0.7\"/>\n";
        }
        out << "<text x=\"" << num(mid) << "\" y=\"" << num(kMarginTop + f.plot_h() + 18.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(b.label)
            << "</text>\n";
    }
    f.axes(out, chart.title, "", chart.y_label, false);
    out << "</svg>\n";
    return out.str();
}

}  // namespace soarplan::svg
