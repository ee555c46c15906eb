#ifndef BIFI_ACCURACY_HPP
#define BIFI_ACCURACY_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "bifi/function_pair.hpp"

namespace bifi {

struct AccuracyReport {
    double p_corr;  // Pearson sample correlation of model means with f_h
    int n_test;
};

/// Model mean prediction as a function of a unit-hypercube point.
using MeanFunction = std::function<double(const Point&)>;

/// Pearson sample correlation between model means and the true high-fidelity
/// values over the test points (given in unit coordinates and mapped onto the
/// pair's domain for evaluation). Throws UndefinedCorrelationError when the
/// model means or the true values are constant over the test set.
AccuracyReport accuracy(const MeanFunction& model_mean, const FunctionPair& pair,
                        const std::vector<Point>& unit_test_points);

/// Seeded random Latin hypercube of n points (not optimized) in [0,1]^d;
/// the standard accuracy test plan has n = 1000 * d.
std::vector<Point> random_test_plan(int d, int n, std::uint64_t seed);

}  // namespace bifi

#endif
