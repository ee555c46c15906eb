#ifndef BIFI_DETAIL_NELDER_MEAD_HPP
#define BIFI_DETAIL_NELDER_MEAD_HPP

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace bifi::detail {

struct NelderMeadResult {
    std::vector<double> x;
    double value;
};

/// Box-constrained Nelder-Mead maximization. Points are clamped into the box
/// before every evaluation, so the returned point is always feasible. Fully
/// deterministic for a given start.
inline NelderMeadResult nelder_mead_maximize(
    const std::function<double(const std::vector<double>&)>& objective, std::vector<double> start,
    const std::vector<double>& lo, const std::vector<double>& hi, int max_iterations) {
    const std::size_t d = start.size();
    const auto clamp = [&](std::vector<double>& x) {
        for (std::size_t k = 0; k < d; ++k) x[k] = std::max(lo[k], std::min(hi[k], x[k]));
    };

    clamp(start);
    std::vector<std::vector<double>> simplex;
    std::vector<double> values;
    simplex.push_back(start);
    values.push_back(objective(start));
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> vertex = start;
        const double step = 0.1 * (hi[k] - lo[k]);
        vertex[k] += vertex[k] + step <= hi[k] ? step : -step;
        clamp(vertex);
        simplex.push_back(vertex);
        values.push_back(objective(vertex));
    }

    std::vector<std::size_t> order(simplex.size());
    const auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    };

    for (int iter = 0; iter < max_iterations; ++iter) {
        sort_simplex();
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[order.size() - 2];
        if (values[best] - values[worst] < 1e-12) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t v = 0; v < simplex.size(); ++v) {
            if (v == worst) continue;
            for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[v][k];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        const auto blend = [&](double factor) {
            std::vector<double> x(d);
            for (std::size_t k = 0; k < d; ++k) {
                x[k] = centroid[k] + factor * (centroid[k] - simplex[worst][k]);
            }
            clamp(x);
            return x;
        };

        const std::vector<double> reflected = blend(1.0);
        const double reflected_value = objective(reflected);
        if (reflected_value > values[best]) {
            const std::vector<double> expanded = blend(2.0);
            const double expanded_value = objective(expanded);
            if (expanded_value > reflected_value) {
                simplex[worst] = expanded;
                values[worst] = expanded_value;
            } else {
                simplex[worst] = reflected;
                values[worst] = reflected_value;
            }
            continue;
        }
        if (reflected_value > values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = reflected_value;
            continue;
        }
        const std::vector<double> contracted = blend(-0.5);
        const double contracted_value = objective(contracted);
        if (contracted_value > values[worst]) {
            simplex[worst] = contracted;
            values[worst] = contracted_value;
            continue;
        }
        // Shrink towards the best vertex.
        for (std::size_t v = 0; v < simplex.size(); ++v) {
            if (v == order.front()) continue;
            for (std::size_t k = 0; k < d; ++k) {
                simplex[v][k] = simplex[best][k] + 0.5 * (simplex[v][k] - simplex[best][k]);
            }
            clamp(simplex[v]);
            values[v] = objective(simplex[v]);
        }
    }

    sort_simplex();
    return {simplex[order.front()], values[order.front()]};
}

}  // namespace bifi::detail

#endif
