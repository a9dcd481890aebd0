// Static SVG charts for trajectories and benchmark summaries.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace soarplan::svg {

namespace colors {
inline constexpr const char* kStraight = "#2ca02c";  // green
inline constexpr const char* kCurve = "#1f77b4";     // blue
inline constexpr const char* kSpiral = "#000000";    // black
inline constexpr const char* kSpline = "#d62728";    // red
inline constexpr const char* kStart = "#32cd32";     // lime
inline constexpr const char* kGoal = "#d62728";
inline constexpr const char* kThermal = "#f2c200";   // yellow
inline constexpr const char* kPath = "#1f77b4";
}  // namespace colors

using Point = std::pair<double, double>;

struct Polyline {
    std::vector<Point> points;
    std::string color;
    double width = 1.5;
    double opacity = 1.0;
};

struct Circle {
    Point center;
    double radius = 1.0;  // data units
    std::string fill;
    std::string stroke;
    double opacity = 0.5;
};

struct Marker {
    Point at;
    std::string color;
    std::string label;
};

struct LegendEntry {
    std::string label;
    std::string color;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Polyline> lines;
    std::vector<Circle> circles;
    std::vector<Marker> markers;
    std::vector<LegendEntry> legend;
    /// Same scale on both axes (top-down maps).
    bool equal_aspect = false;
};

std::string render(const LinePlot& plot, int width = 720, int height = 600);

struct Bar {
    std::string label;
    std::string color;
    std::optional<double> mean;
    std::optional<double> std_dev;
    std::vector<double> samples;  // drawn as points over the bar
};

struct BarChart {
    std::string title;
    std::string y_label;
    std::vector<Bar> bars;
};

std::string render(const BarChart& chart, int width = 480, int height = 400);

/// Escapes the five XML special characters.
std::string escape(const std::string& text);

}  // namespace soarplan::svg
