#include "bifi/accuracy.hpp"

#include <cmath>

#include "bifi/errors.hpp"
#include "bifi/kriging.hpp"
#include "bifi/sampling.hpp"

namespace bifi {

AccuracyReport accuracy(const MeanFunction& model_mean, const FunctionPair& pair,
                        const std::vector<Point>& unit_test_points) {
    if (unit_test_points.size() < 3) throw SizeError("accuracy needs at least three test points");
    std::vector<double> truth;
    std::vector<double> means;
    truth.reserve(unit_test_points.size());
    means.reserve(unit_test_points.size());
    for (const Point& u : unit_test_points) {
        truth.push_back(pair.high(pair.domain().from_unit(u)));
        const double mean = model_mean(u);
        if (!std::isfinite(mean)) throw DegeneracyError("model produced a non-finite prediction");
        means.push_back(mean);
    }
    const double corr = pearson_correlation(means, truth);
    return {corr, static_cast<int>(unit_test_points.size())};
}

std::vector<Point> random_test_plan(int d, int n, std::uint64_t seed) {
    return lhs_plan(n, d, seed).points();
}

}  // namespace bifi
