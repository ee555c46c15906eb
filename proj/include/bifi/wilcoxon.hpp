#ifndef BIFI_WILCOXON_HPP
#define BIFI_WILCOXON_HPP

#include <vector>

namespace bifi {

/// Lower-tail p-value of the Wilcoxon signed-rank test on the given paired
/// differences, i.e. the probability under the null of symmetry about zero
/// of observing a positive-rank sum at most as large as the one observed.
/// Small values mean the differences are predominantly negative.
///
/// Zero differences are handled per Pratt: they take part in the ranking and
/// are then dropped from the rank sum. Ties receive midranks. The exact
/// conditional distribution is enumerated for up to 25 nonzero differences;
/// beyond that a normal approximation with continuity correction and tie
/// correction is used.
double wilcoxon_signed_rank_less_p(const std::vector<double>& differences);

/// Performance p-value of `candidate` against `competitor`: the signed-rank
/// p for the alternative that the candidate accuracies are lower, after
/// shifting every difference by `tolerance` in the candidate's favour.
/// A large p therefore means the candidate is as good or better up to the
/// tolerance. Throws LowPowerError with fewer than 6 pairs.
double wilcoxon_p(const std::vector<double>& candidate, const std::vector<double>& competitor,
                  double tolerance = 0.001);

}  // namespace bifi

#endif
