#ifndef BIFI_SAMPLING_HPP
#define BIFI_SAMPLING_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bifi/hypercube.hpp"

namespace bifi {

/// Midpoint Latin Hypercube plan on [0,1]^d: every coordinate column visits
/// each cell centre (k + 0.5)/n exactly once. Coordinates are stored as
/// integer cell levels so that distance comparisons during optimization are
/// exact; level L maps to coordinate (L + 0.5)/n.
class SamplingPlan {
public:
    /// `levels` is row-major, size n*d, each column a permutation of 0..n-1.
    SamplingPlan(std::vector<int> levels, int n, int d, std::uint64_t seed);

    int size() const { return n_; }
    int dim() const { return d_; }
    std::uint64_t seed() const { return seed_; }

    int level(int i, int k) const { return levels_[static_cast<std::size_t>(i) * d_ + k]; }
    double coordinate(int i, int k) const { return (level(i, k) + 0.5) / n_; }

    Point point(int i) const;
    std::vector<Point> points() const;

    /// Squared distance between points i and j in units of (1/n)^2.
    std::int64_t sq_dist(int i, int j) const;

    const std::vector<int>& levels() const { return levels_; }

private:
    std::vector<int> levels_;
    int n_;
    int d_;
    std::uint64_t seed_;
};

/// A sampling plan for the cheap source together with the indices of the
/// subset at which the expensive source is sampled.
struct NestedDesign {
    SamplingPlan plan;
    std::vector<int> subset;  // sorted, distinct indices into the plan

    int n_low() const { return plan.size(); }
    int n_high() const { return static_cast<int>(subset.size()); }
    std::vector<Point> low_points() const { return plan.points(); }
    std::vector<Point> high_points() const;
};

/// Random midpoint LHS plan. Requires n_l >= 2.
SamplingPlan lhs_plan(int n_l, int d, std::uint64_t seed);

/// Greedy maximin improvement: scans point pairs and coordinates in
/// lexicographic order, swaps a single coordinate between two points whenever
/// that strictly increases the minimum pairwise distance, and restarts the
/// scan after every accepted swap. The result is locally optimal: no single
/// coordinate swap improves it further. The Latin property is preserved.
SamplingPlan optimize_plan(SamplingPlan plan);

/// Seeded random draw of n_h distinct plan indices, sorted ascending; the
/// starting point of nested_subset.
std::vector<int> random_subset(int plan_size, int n_h, std::uint64_t seed);

/// Selects a locally optimal subset of size n_h: starts from random_subset
/// and swaps one inside point for one outside point while the minimum
/// pairwise distance within the subset strictly increases (inside indices
/// ascending, outside indices ascending, restart after each accepted swap).
NestedDesign nested_subset(SamplingPlan plan, int n_h, std::uint64_t seed);

/// Minimum pairwise squared distance in level units; +infinity sentinel
/// (int64 max) when fewer than two points are given.
std::int64_t min_pairwise_sq(const SamplingPlan& plan);
std::int64_t min_pairwise_sq(const SamplingPlan& plan, const std::vector<int>& subset);

/// Minimum pairwise Euclidean distance in [0,1]^d units.
double min_pairwise_distance(const SamplingPlan& plan);

/// Versioned text format: header with n_l, n_h, d, seed, then one point per
/// row, then the subset indices.
void save_design(const NestedDesign& design, std::ostream& out);
NestedDesign load_design(std::istream& in);
void save_design_file(const NestedDesign& design, const std::string& path);
NestedDesign load_design_file(const std::string& path);

}  // namespace bifi

#endif
