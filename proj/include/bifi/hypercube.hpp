#ifndef BIFI_HYPERCUBE_HPP
#define BIFI_HYPERCUBE_HPP

#include <cstddef>
#include <vector>

#include "bifi/errors.hpp"

namespace bifi {

using Point = std::vector<double>;

/// Axis-aligned box [lower_1, upper_1] x ... x [lower_d, upper_d].
class Hypercube {
public:
    Hypercube(Point lower, Point upper);

    /// Unit hypercube [0,1]^d.
    static Hypercube unit(std::size_t d);

    std::size_t dim() const { return lower_.size(); }
    const Point& lower() const { return lower_; }
    const Point& upper() const { return upper_; }

    bool contains(const Point& x) const;

    /// Throws DomainError when x is outside the box or has the wrong length.
    void require_inside(const Point& x) const;

    /// Maps a point of [0,1]^d onto this box.
    Point from_unit(const Point& u) const;

    /// Maps a point of this box onto [0,1]^d.
    Point to_unit(const Point& x) const;

private:
    Point lower_;
    Point upper_;
};

}  // namespace bifi

#endif
