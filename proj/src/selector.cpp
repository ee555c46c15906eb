#include "bifi/selector.hpp"

#include <cmath>

#include "bifi/errors.hpp"
#include "bifi/rng.hpp"

namespace bifi {

const std::array<std::string, kProjectionInputs>& projection_input_ids() {
    static const std::array<std::string, kProjectionInputs> ids = {
        "br",          "lcc02_sd", "lcc02d_p400", "lcc02d_p950", "rrmse",
        "fh_mmce_lda", "fh_h0",    "r2_lin_diff", "r2_lini_diff"};
    return ids;
}

const std::array<std::array<double, 2>, kProjectionInputs>& projection_matrix() {
    static const std::array<std::array<double, 2>, kProjectionInputs> matrix = {{
        {-0.4916, -0.0889},
        {-0.3167, -0.2321},
        {-0.1506, 0.372},
        {-0.0568, 0.4394},
        {0.1777, -0.4154},
        {0.3696, 0.0989},
        {0.4362, 0.0526},
        {0.177, 0.3381},
        {0.4031, 0.2545},
    }};
    return matrix;
}

std::array<double, 2> project_2d(const std::vector<double>& features) {
    if (features.size() != kProjectionInputs) {
        throw DataError("projection expects exactly 9 features, got " +
                        std::to_string(features.size()));
    }
    std::array<double, 2> z = {0.0, 0.0};
    const auto& matrix = projection_matrix();
    for (int r = 0; r < kProjectionInputs; ++r) {
        z[0] += matrix[r][0] * features[r];
        z[1] += matrix[r][1] * features[r];
    }
    return z;
}

Decision rule_select(double br_h, double br, double lcc02d_p400, double lcc02d_p950,
                     double r2_lin_diff, const RuleSelectorConfig& config) {
    const double inputs[] = {br_h, br, lcc02d_p400, lcc02d_p950, r2_lin_diff};
    const char* names[] = {"br_h", "br", "lcc02d_p400", "lcc02d_p950", "r2_lin_diff"};
    for (int i = 0; i < 5; ++i) {
        if (!std::isfinite(inputs[i])) {
            throw SelectionError(std::string("rule selector input missing or non-finite: ") +
                                 names[i]);
        }
    }
    if (lcc02d_p400 < 0.0 || lcc02d_p400 > 1.0 || lcc02d_p950 < 0.0 || lcc02d_p950 > 1.0) {
        throw SelectionError("local correlation shares must lie in [0, 1]");
    }

    Decision decision;
    decision.inputs = {br_h, br, lcc02d_p400, lcc02d_p950, r2_lin_diff};
    if (br_h >= 18.0) {
        decision.choice = ModelChoice::kriging;
        decision.rule_fired = "rule1_high_budget";
    } else if (br == 1.0) {
        decision.choice = ModelChoice::kriging;
        decision.rule_fired = "rule1_equal_budgets";
    } else if (lcc02d_p400 <= 0.7) {
        decision.choice = ModelChoice::kriging;
        decision.rule_fired = "rule1_low_local_correlation";
    } else if (lcc02d_p950 >= config.lcc_p950_threshold) {
        decision.choice = ModelChoice::cokriging;
        decision.rule_fired = "rule2_high_local_correlation";
    } else if (r2_lin_diff >= 0.4) {
        decision.choice = ModelChoice::cokriging;
        decision.rule_fired = "rule2_simple_difference";
    } else if (br_h <= 5.0) {
        decision.choice = ModelChoice::cokriging;
        decision.rule_fired = "rule3_scarce_high_fidelity";
    } else {
        decision.choice = ModelChoice::kriging;
        decision.rule_fired = "rule3_default_kriging";
    }
    return decision;
}

Decision cc_baseline_select(double cc_value) {
    if (!(cc_value >= 0.0 && cc_value <= 1.0)) {
        throw SelectionError("cc must lie in [0, 1]");
    }
    Decision decision;
    decision.inputs = {cc_value};
    if (cc_value >= 0.7) {
        decision.choice = ModelChoice::cokriging;
        decision.rule_fired = "cc_baseline_high";
    } else {
        decision.choice = ModelChoice::kriging;
        decision.rule_fired = "cc_baseline_low";
    }
    return decision;
}

ModelChoice ProjectedClassifier::classify(const std::array<double, 2>& z) const {
    const double margin = weights[0] + weights[1] * z[0] + weights[2] * z[1];
    return margin > 0.0 ? ModelChoice::cokriging : ModelChoice::kriging;
}

ProjectedClassifier train_classifier(const std::vector<LabelledPoint>& rows, std::uint64_t seed) {
    if (rows.size() < 20) throw SizeError("classifier training needs at least 20 labelled rows");
    int positives = 0;
    for (const auto& row : rows) {
        if (row.label == ModelChoice::cokriging) ++positives;
    }
    if (positives == 0 || positives == static_cast<int>(rows.size())) {
        throw DegeneracyError("classifier training needs both classes present");
    }

    // Standardize coordinates so the fixed step size behaves across scales.
    std::array<double, 2> mean = {0.0, 0.0};
    for (const auto& row : rows) {
        mean[0] += row.z[0];
        mean[1] += row.z[1];
    }
    mean[0] /= static_cast<double>(rows.size());
    mean[1] /= static_cast<double>(rows.size());
    std::array<double, 2> scale = {0.0, 0.0};
    for (const auto& row : rows) {
        scale[0] += (row.z[0] - mean[0]) * (row.z[0] - mean[0]);
        scale[1] += (row.z[1] - mean[1]) * (row.z[1] - mean[1]);
    }
    for (int k = 0; k < 2; ++k) {
        scale[k] = std::sqrt(scale[k] / static_cast<double>(rows.size()));
        if (scale[k] <= 0.0) scale[k] = 1.0;
    }

    Rng rng(mix_seed(seed));
    std::array<double, 3> w = {rng.uniform(-1e-3, 1e-3), rng.uniform(-1e-3, 1e-3),
                               rng.uniform(-1e-3, 1e-3)};
    const double step = 0.5;
    const double l2 = 1e-3;
    const auto n = static_cast<double>(rows.size());
    for (int iter = 0; iter < 2000; ++iter) {
        std::array<double, 3> grad = {l2 * w[0], l2 * w[1], l2 * w[2]};
        for (const auto& row : rows) {
            const double z1 = (row.z[0] - mean[0]) / scale[0];
            const double z2 = (row.z[1] - mean[1]) / scale[1];
            const double target = row.label == ModelChoice::cokriging ? 1.0 : 0.0;
            const double margin = w[0] + w[1] * z1 + w[2] * z2;
            const double prob = 1.0 / (1.0 + std::exp(-margin));
            const double err = (prob - target) / n;
            grad[0] += err;
            grad[1] += err * z1;
            grad[2] += err * z2;
        }
        for (int k = 0; k < 3; ++k) w[k] -= step * grad[k];
    }

    // Fold the standardization back into raw-coordinate weights.
    ProjectedClassifier classifier;
    classifier.weights[1] = w[1] / scale[0];
    classifier.weights[2] = w[2] / scale[1];
    classifier.weights[0] = w[0] - classifier.weights[1] * mean[0] - classifier.weights[2] * mean[1];

    int correct = 0;
    for (const auto& row : rows) {
        if (classifier.classify(row.z) == row.label) ++correct;
    }
    classifier.resubstitution_accuracy = static_cast<double>(correct) / n;
    return classifier;
}

}  // namespace bifi
