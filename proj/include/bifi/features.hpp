#ifndef BIFI_FEATURES_HPP
#define BIFI_FEATURES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bifi/hypercube.hpp"

namespace bifi {

/// Squared Pearson correlation between the two sources on a shared sample.
/// Throws UndefinedCorrelationError when either vector is constant.
double cc(const std::vector<double>& y_low, const std::vector<double>& y_high);

double rmse(const std::vector<double>& y_low, const std::vector<double>& y_high);

/// RMSE scaled by the range of the high-fidelity values. Throws DataError
/// when the high-fidelity values are constant.
double rrmse(const std::vector<double>& y_low, const std::vector<double>& y_high);

/// Squared weighted correlation with weighted means and weighted standard
/// deviations. Throws UndefinedCorrelationError when the weights sum to zero
/// or either weighted variance vanishes.
double wcc(const std::vector<double>& y_low, const std::vector<double>& y_high,
           const std::vector<double>& weights);

/// Local correlation at `centre` with relative radius `r`: a WCC whose
/// weights fall off linearly with distance and reach zero at r * sqrt(d),
/// the radius measured as a fraction of the unit-hypercube diagonal.
/// Points are expected in [0,1]^d. Returns nothing when fewer than two
/// points carry positive weight or a local variance vanishes; such centres
/// are dropped from the local-correlation statistics.
std::optional<double> lcc_at(const std::vector<Point>& points, const std::vector<double>& y_low,
                             const std::vector<double>& y_high, const Point& centre, double r);

/// Thresholds for the share-of-good-local-correlation features.
struct LccConfig {
    std::vector<double> thresholds = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.975};
};

struct LccSummary {
    /// threshold -> share of defined centres with local correlation >= p
    std::map<double, double> share_at_least;
    std::optional<double> mean;
    std::optional<double> sd;     // sample sd; missing with fewer than 2 defined centres
    std::optional<double> coeff;  // sd / mean; missing when mean is 0 or sd is missing
    int centres_total = 0;
    int centres_defined = 0;
};

/// Evaluates lcc_at with every sample point as centre and summarizes.
LccSummary lcc_features(const std::vector<Point>& points, const std::vector<double>& y_low,
                        const std::vector<double>& y_high, double r, const LccConfig& cfg = {});

struct BudgetFeatures {
    double b_h;
    double b_l;
    double br_h;
    double br_l;
    double br;
    double dim;
};

BudgetFeatures budget_features(int n_h, int n_l, int d);

struct AdjustedR2 {
    double value = 0.0;
    /// Set when the design is rank deficient or has no residual degrees of
    /// freedom; the fit is then exact by construction and value is 1.
    bool saturated = false;
};

/// Adjusted R-squared of a least-squares fit on linear terms, optionally
/// extended with all pairwise interaction products (no squares).
AdjustedR2 adjusted_r2_linear(const std::vector<Point>& points, const std::vector<double>& y,
                              bool with_interactions);

enum class FeatureProvenance { raw, transformed };

/// Named feature values for one instance; an absent key means the feature is
/// missing (undefined in every repetition it was attempted in).
struct FeatureVector {
    std::map<std::string, double> values;
    FeatureProvenance provenance = FeatureProvenance::raw;
    int n_high = 0;
    int n_low = 0;

    bool has(const std::string& id) const { return values.count(id) != 0; }
    double at(const std::string& id) const;
};

/// Declared value range per feature, used by the transform stage. Features
/// without a finite range are Box-Cox transformed instead.
struct FeatureBound {
    std::string id;
    bool bounded = false;
    double lo = 0.0;
    double hi = 1.0;
};

/// Canonical feature order for tables and CSV columns.
const std::vector<FeatureBound>& feature_schema();
std::vector<std::string> feature_ids();

/// Radius of the dimension-scaled local-correlation ball, 0.2^(1/d).
double scaled_lcc_radius(int d);

/// All raw features of one repetition: relationship features on the n_h
/// points carrying both sources, budget features, and the adjusted
/// R-squared features of the source difference. Computed from the training
/// sample alone.
FeatureVector repetition_features(const std::vector<Point>& high_points_unit,
                                  const std::vector<double>& y_low_at_high,
                                  const std::vector<double>& y_high, int n_low,
                                  const LccConfig& cfg = {});

/// Arithmetic mean of each feature across repetitions; repetitions in which
/// a feature is undefined are excluded from its mean. `defined_counts`
/// receives the number of contributing repetitions per feature.
FeatureVector sample_feature_vector(const std::vector<FeatureVector>& repetitions,
                                    std::map<std::string, int>* defined_counts = nullptr);

}  // namespace bifi

#endif
