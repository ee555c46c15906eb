#include "bifi/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bifi/errors.hpp"

namespace bifi {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730950488016887242097); }

struct RankedDifferences {
    // Doubled midranks, so ties stay exact integers.
    std::vector<long long> nonzero_ranks2;
    std::vector<long long> positive_ranks2;
    std::vector<long long> tie_group_sizes;  // among nonzero differences
    int num_zero = 0;
};

RankedDifferences rank_differences(const std::vector<double>& diffs) {
    const std::size_t n = diffs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(diffs[a]) < std::abs(diffs[b]);
    });

    RankedDifferences out;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) ++j;
        // 1-based positions i+1 .. j+1 share midrank (i+j+2)/2; doubled: i+j+2.
        const long long rank2 = static_cast<long long>(i + j + 2);
        long long nonzero_in_group = 0;
        for (std::size_t k = i; k <= j; ++k) {
            const double d = diffs[order[k]];
            if (d == 0.0) {
                ++out.num_zero;
                continue;
            }
            ++nonzero_in_group;
            out.nonzero_ranks2.push_back(rank2);
            if (d > 0.0) out.positive_ranks2.push_back(rank2);
        }
        if (nonzero_in_group > 1) out.tie_group_sizes.push_back(nonzero_in_group);
        i = j + 1;
    }
    return out;
}

double exact_lower_p(const RankedDifferences& ranked) {
    const long long total =
        std::accumulate(ranked.nonzero_ranks2.begin(), ranked.nonzero_ranks2.end(), 0LL);
    const long long observed =
        std::accumulate(ranked.positive_ranks2.begin(), ranked.positive_ranks2.end(), 0LL);
    // Counts of sign assignments per doubled rank sum.
    std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
    counts[0] = 1.0;
    for (long long rank2 : ranked.nonzero_ranks2) {
        for (long long s = total; s >= rank2; --s) {
            counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - rank2)];
        }
    }
    double below = 0.0;
    for (long long s = 0; s <= observed; ++s) below += counts[static_cast<std::size_t>(s)];
    return below / std::pow(2.0, static_cast<double>(ranked.nonzero_ranks2.size()));
}

double approximate_lower_p(const RankedDifferences& ranked, std::size_t n) {
    const double big = static_cast<double>(n);
    const double zero = static_cast<double>(ranked.num_zero);
    const double mean = (big * (big + 1.0) - zero * (zero + 1.0)) / 4.0;
    double variance = (big * (big + 1.0) * (2.0 * big + 1.0) - zero * (zero + 1.0) * (2.0 * zero + 1.0)) / 24.0;
    for (long long t : ranked.tie_group_sizes) {
        const double tt = static_cast<double>(t);
        variance -= (tt * tt * tt - tt) / 48.0;
    }
    const double observed =
        0.5 * static_cast<double>(std::accumulate(ranked.positive_ranks2.begin(),
                                                  ranked.positive_ranks2.end(), 0LL));
    if (variance <= 0.0) return observed >= mean ? 1.0 : 0.0;
    // Continuity-corrected lower-tail: P(W <= w) ~ Phi((w + 0.5 - mean)/sd).
    return normal_cdf((observed + 0.5 - mean) / std::sqrt(variance));
}

}  // namespace

double wilcoxon_signed_rank_less_p(const std::vector<double>& differences) {
    if (differences.empty()) throw SizeError("signed-rank test needs at least one difference");
    for (double d : differences) {
        if (!std::isfinite(d)) throw DataError("non-finite difference in signed-rank test");
    }
    const RankedDifferences ranked = rank_differences(differences);
    const std::size_t nonzero = ranked.nonzero_ranks2.size();
    if (nonzero == 0) return 1.0;  // every pair tied: no evidence against the candidate
    if (nonzero <= 25) return exact_lower_p(ranked);
    return approximate_lower_p(ranked, differences.size());
}

double wilcoxon_p(const std::vector<double>& candidate, const std::vector<double>& competitor,
                  double tolerance) {
    if (candidate.size() != competitor.size()) {
        throw DataError("paired accuracy vectors differ in length");
    }
    if (candidate.size() < 6) {
        throw LowPowerError("signed-rank comparison needs at least 6 valid pairs");
    }
    std::vector<double> diffs(candidate.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        diffs[i] = candidate[i] - competitor[i] + tolerance;
    }
    return wilcoxon_signed_rank_less_p(diffs);
}

}  // namespace bifi
