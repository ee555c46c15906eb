#include "bifi/hypercube.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace bifi {

Hypercube::Hypercube(Point lower, Point upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size()) {
        throw ConfigError("hypercube bounds must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || lower_[i] >= upper_[i]) {
            throw ConfigError("hypercube requires finite lower[i] < upper[i] (coordinate " +
                              std::to_string(i) + ")");
        }
    }
}

Hypercube Hypercube::unit(std::size_t d) {
    return Hypercube(Point(d, 0.0), Point(d, 1.0));
}

bool Hypercube::contains(const Point& x) const {
    if (x.size() != dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
    }
    return true;
}

void Hypercube::require_inside(const Point& x) const {
    if (x.size() != dim()) {
        throw DomainError("point has dimension " + std::to_string(x.size()) +
                          ", domain has dimension " + std::to_string(dim()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) {
            throw DomainError("coordinate " + std::to_string(i) + " = " + std::to_string(x[i]) +
                              " outside [" + std::to_string(lower_[i]) + ", " +
                              std::to_string(upper_[i]) + "]");
        }
    }
}

Point Hypercube::from_unit(const Point& u) const {
    Point x(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        x[i] = lower_[i] + u[i] * (upper_[i] - lower_[i]);
    }
    return x;
}

Point Hypercube::to_unit(const Point& x) const {
    Point u(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        u[i] = (x[i] - lower_[i]) / (upper_[i] - lower_[i]);
    }
    return u;
}

}  // namespace bifi
