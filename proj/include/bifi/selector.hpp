#ifndef BIFI_SELECTOR_HPP
#define BIFI_SELECTOR_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bifi {

enum class ModelChoice { kriging, cokriging };

inline const char* to_string(ModelChoice choice) {
    return choice == ModelChoice::kriging ? "kriging" : "cokriging";
}

struct Decision {
    ModelChoice choice;
    std::string rule_fired;
    std::vector<double> inputs;
};

/// Inputs of the 2-d projection, in this fixed order:
///   br, lcc02_sd, lcc02d_p400, lcc02d_p950, rrmse,
///   fh mmce_lda_05, fh h0, diff r2_lin, diff r2_lini
/// The last four slots cover landscape features whose computation lives
/// outside this toolkit; callers may zero-fill them.
constexpr int kProjectionInputs = 9;

const std::array<std::string, kProjectionInputs>& projection_input_ids();

/// The fixed 9x2 projection coefficients, row r giving the contribution of
/// input r to (z1, z2).
const std::array<std::array<double, 2>, kProjectionInputs>& projection_matrix();

/// Linear projection of a 9-feature vector (transformed feature space) onto
/// the 2-d instance space. Throws DataError unless exactly 9 inputs.
std::array<double, 2> project_2d(const std::vector<double>& features);

struct RuleSelectorConfig {
    /// Published threshold for the very-high-local-correlation rule; 0.7 is
    /// the more conservative variant discussed alongside it.
    double lcc_p950_threshold = 0.5;
};

/// Rule-based choice from sample features:
///   1. high budget (br_h >= 18), equal budgets (br == 1) or low local
///      correlation (lcc02d_p400 <= 0.7)  -> kriging
///   2. otherwise lcc02d_p950 >= threshold or diff r2_lin >= 0.4 -> cokriging
///   3. otherwise cokriging iff br_h <= 5
/// All five inputs must be finite; the LCC shares must lie in [0,1].
Decision rule_select(double br_h, double br, double lcc02d_p400, double lcc02d_p950,
                     double r2_lin_diff, const RuleSelectorConfig& config = {});

/// The long-standing global-correlation guideline: cokriging iff cc >= 0.7.
Decision cc_baseline_select(double cc_value);

/// Linear two-class decision rule over the projected coordinates. Stands in
/// for the footprint machinery: deterministic, seeded, resubstitution
/// accuracy reported.
struct ProjectedClassifier {
    std::array<double, 3> weights{};  // bias, z1, z2; positive margin -> cokriging
    double resubstitution_accuracy = 0.0;

    ModelChoice classify(const std::array<double, 2>& z) const;
};

struct LabelledPoint {
    std::array<double, 2> z;
    ModelChoice label;
};

/// Fits an L2-regularized logistic separation by full-batch gradient descent
/// with a fixed iteration budget. Requires at least 20 rows and both classes
/// present.
ProjectedClassifier train_classifier(const std::vector<LabelledPoint>& rows, std::uint64_t seed);

}  // namespace bifi

#endif
