#include "soarplan/wind.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace soarplan {

namespace {

void require(bool ok, const std::string& field, const std::string& rule, double value) {
    if (!ok) {
        throw std::invalid_argument("thermal." + field + " must be " + rule + " (got " +
                                    std::to_string(value) + ")");
    }
}

}  // namespace

void Thermal::validate() const {
    require(std::isfinite(center_north), "center_north", "finite", center_north);
    require(std::isfinite(center_east), "center_east", "finite", center_east);
    require(std::isfinite(radius) && radius > 0.0, "radius", "> 0", radius);
    require(std::isfinite(core_updraft) && core_updraft > 0.0, "core_updraft", "> 0",
            core_updraft);
    require(std::isfinite(base_height), "base_height", "finite", base_height);
    require(std::isfinite(top_height) && top_height > base_height, "top_height",
            "> base_height", top_height);
}

double Thermal::updraft_at(double north, double east, double height) const {
    if (height < base_height || height > top_height) return 0.0;
    const double dn = north - center_north;
    const double de = east - center_east;
    const double r2 = (dn * dn + de * de) / (radius * radius);
    return core_updraft * std::exp(-r2);
}

WindVector WindField::at(double north, double east, double height) const {
    WindVector w = ambient;
    for (const auto& t : thermals) w.down -= t.updraft_at(north, east, height);
    return w;
}

double WindField::max_updraft() const {
    double up = ambient.down < 0.0 ? -ambient.down : 0.0;
    for (const auto& t : thermals) up += t.core_updraft;
    return up;
}

void WindField::validate() const {
    if (!std::isfinite(ambient.north) || !std::isfinite(ambient.east) ||
        !std::isfinite(ambient.down)) {
        throw std::invalid_argument("ambient_wind must be finite");
    }
    for (const auto& t : thermals) t.validate();
}

}  // namespace soarplan
