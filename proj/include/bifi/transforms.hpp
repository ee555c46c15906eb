#ifndef BIFI_TRANSFORMS_HPP
#define BIFI_TRANSFORMS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "bifi/features.hpp"

namespace bifi {

/// Fitted per-feature transform. Bounded features are mapped affinely from
/// their declared range onto [-2, 2]. Unbounded features are shifted
/// positive, Box-Cox transformed, standardized to zero mean and unit
/// variance, and clamped to [-4, 4].
struct ColumnTransform {
    std::string id;
    bool bounded = true;
    // bounded
    double lo = 0.0;
    double hi = 1.0;
    // unbounded
    double shift = 0.0;
    double lambda = 1.0;
    double mean = 0.0;
    double sd = 1.0;

    double apply(double raw) const;
};

struct TransformSet {
    std::vector<ColumnTransform> columns;

    const ColumnTransform& column(const std::string& id) const;

    /// Transforms every present feature of `raw`; missing features stay
    /// missing. Features without a fitted column pass through untouched.
    FeatureVector apply(const FeatureVector& raw) const;
};

/// Fits transforms over the instances' raw feature vectors. Needs at least
/// two instances. Missing cells are skipped; non-finite cells raise a
/// DataError naming the instance and feature.
///
/// Box-Cox lambdas are fitted per column by profile-likelihood grid search
/// over [-2, 2] in steps of 0.05, after shifting the column by (1 - min)
/// whenever its minimum is not positive.
TransformSet fit_transforms(const std::vector<FeatureVector>& rows,
                            const std::vector<std::string>& instance_ids,
                            const std::vector<FeatureBound>& schema = feature_schema());

double box_cox(double value, double lambda);

/// Sidecar (de)serialization of the fitted parameters as JSON.
void save_transforms(const TransformSet& transforms, std::ostream& out);
TransformSet load_transforms(std::istream& in);

}  // namespace bifi

#endif
