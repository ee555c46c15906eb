#include "bifi/features.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "bifi/errors.hpp"

namespace bifi {
namespace {

void check_same_finite(const std::vector<double>& a, const std::vector<double>& b,
                       std::size_t min_len) {
    if (a.size() != b.size()) throw DataError("source value vectors differ in length");
    if (a.size() < min_len) throw SizeError("need at least " + std::to_string(min_len) + " samples");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw DataError("non-finite source value at index " + std::to_string(i));
        }
    }
}

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

/// Core of WCC; empty optional when the statistic is undefined.
std::optional<double> weighted_sq_corr(const std::vector<double>& y_low,
                                       const std::vector<double>& y_high,
                                       const std::vector<double>& w) {
    const std::size_t n = y_low.size();
    double wsum = 0.0;
    for (double wi : w) wsum += wi;
    if (wsum <= 0.0) return std::nullopt;

    double mean_low = 0.0, mean_high = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_low += w[i] * y_low[i];
        mean_high += w[i] * y_high[i];
    }
    mean_low /= wsum;
    mean_high /= wsum;

    double var_low = 0.0, var_high = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dl = y_low[i] - mean_low;
        const double dh = y_high[i] - mean_high;
        var_low += w[i] * dl * dl;
        var_high += w[i] * dh * dh;
        cross += w[i] * dl * dh;
    }
    if (var_low <= 0.0 || var_high <= 0.0) return std::nullopt;
    const double s_low = std::sqrt(var_low / wsum);
    const double s_high = std::sqrt(var_high / wsum);
    const double value = cross / (wsum * s_low * s_high);
    // Squared correlations live in [0,1]; rounding can overshoot by an ulp.
    return std::min(1.0, value * value);
}

}  // namespace

double cc(const std::vector<double>& y_low, const std::vector<double>& y_high) {
    check_same_finite(y_low, y_high, 2);
    const auto n = static_cast<double>(y_low.size());
    const double mean_low = mean_of(y_low);
    const double mean_high = mean_of(y_high);
    double ss_low = 0.0, ss_high = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < y_low.size(); ++i) {
        const double dl = y_low[i] - mean_low;
        const double dh = y_high[i] - mean_high;
        ss_low += dl * dl;
        ss_high += dh * dh;
        cross += dl * dh;
    }
    if (ss_low <= 0.0 || ss_high <= 0.0) {
        throw UndefinedCorrelationError("correlation undefined: constant input vector");
    }
    const double s_low = std::sqrt(ss_low / (n - 1.0));
    const double s_high = std::sqrt(ss_high / (n - 1.0));
    const double corr = cross / ((n - 1.0) * s_low * s_high);
    return std::min(1.0, corr * corr);
}

double rmse(const std::vector<double>& y_low, const std::vector<double>& y_high) {
    check_same_finite(y_low, y_high, 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < y_low.size(); ++i) {
        const double diff = y_low[i] - y_high[i];
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(y_low.size()));
}

double rrmse(const std::vector<double>& y_low, const std::vector<double>& y_high) {
    check_same_finite(y_low, y_high, 1);
    const auto [lo, hi] = std::minmax_element(y_high.begin(), y_high.end());
    const double range = *hi - *lo;
    if (range <= 0.0) throw DataError("relative RMSE undefined: constant high-fidelity values");
    return rmse(y_low, y_high) / range;
}

double wcc(const std::vector<double>& y_low, const std::vector<double>& y_high,
           const std::vector<double>& weights) {
    check_same_finite(y_low, y_high, 2);
    if (weights.size() != y_low.size()) throw DataError("weight vector length mismatch");
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) throw DataError("weights must be finite and nonnegative");
    }
    const auto value = weighted_sq_corr(y_low, y_high, weights);
    if (!value) {
        throw UndefinedCorrelationError(
            "weighted correlation undefined: zero weight sum or zero weighted variance");
    }
    return *value;
}

std::optional<double> lcc_at(const std::vector<Point>& points, const std::vector<double>& y_low,
                             const std::vector<double>& y_high, const Point& centre, double r) {
    check_same_finite(y_low, y_high, 2);
    if (points.size() != y_low.size()) throw DataError("point and value counts differ");
    const std::size_t d = centre.size();
    const double ball = r * std::sqrt(static_cast<double>(d));

    std::vector<double> w(points.size(), 0.0);
    int positive = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double dist2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double diff = centre[k] - points[i][k];
            dist2 += diff * diff;
        }
        const double wi = 1.0 - std::sqrt(dist2) / ball;
        if (wi > 0.0) {
            w[i] = wi;
            ++positive;
        }
    }
    if (positive < 2) return std::nullopt;
    return weighted_sq_corr(y_low, y_high, w);
}

LccSummary lcc_features(const std::vector<Point>& points, const std::vector<double>& y_low,
                        const std::vector<double>& y_high, double r, const LccConfig& cfg) {
    LccSummary out;
    out.centres_total = static_cast<int>(points.size());
    std::vector<double> defined;
    defined.reserve(points.size());
    for (const Point& centre : points) {
        if (auto value = lcc_at(points, y_low, y_high, centre, r)) defined.push_back(*value);
    }
    out.centres_defined = static_cast<int>(defined.size());
    if (defined.empty()) return out;

    const auto n = static_cast<double>(defined.size());
    for (double p : cfg.thresholds) {
        int count = 0;
        for (double v : defined) {
            if (v >= p) ++count;
        }
        out.share_at_least[p] = static_cast<double>(count) / n;
    }
    const double mean = mean_of(defined);
    out.mean = mean;
    if (defined.size() >= 2) {
        double ss = 0.0;
        for (double v : defined) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / (n - 1.0));
        out.sd = sd;
        if (mean > 0.0) out.coeff = sd / mean;
    }
    return out;
}

BudgetFeatures budget_features(int n_h, int n_l, int d) {
    if (n_h < 1 || d < 1) throw SizeError("budgets and dimension must be positive");
    if (n_h > n_l) throw SizeError("n_h must not exceed n_l");
    BudgetFeatures out;
    out.b_h = n_h;
    out.b_l = n_l;
    out.br_h = static_cast<double>(n_h) / d;
    out.br_l = static_cast<double>(n_l) / d;
    out.br = static_cast<double>(n_h) / n_l;
    out.dim = d;
    return out;
}

AdjustedR2 adjusted_r2_linear(const std::vector<Point>& points, const std::vector<double>& y,
                              bool with_interactions) {
    if (points.size() != y.size() || points.empty()) throw DataError("point/value shape mismatch");
    const auto n = static_cast<Eigen::Index>(points.size());
    const auto d = static_cast<Eigen::Index>(points[0].size());
    Eigen::Index cols = 1 + d;
    if (with_interactions) cols += d * (d - 1) / 2;

    Eigen::MatrixXd design(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        for (Eigen::Index k = 0; k < d; ++k) design(i, 1 + k) = points[i][k];
        if (with_interactions) {
            Eigen::Index c = 1 + d;
            for (Eigen::Index a = 0; a < d; ++a) {
                for (Eigen::Index b = a + 1; b < d; ++b) design(i, c++) = points[i][a] * points[i][b];
            }
        }
    }
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) target(i) = y[i];

    const double dof = static_cast<double>(n) - static_cast<double>(cols);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (dof <= 0.0 || qr.rank() < cols) return {1.0, true};

    const Eigen::VectorXd residual = target - design * qr.solve(target);
    const double ss_res = residual.squaredNorm();
    const double y_mean = target.mean();
    const double ss_tot = (target.array() - y_mean).square().sum();
    if (ss_tot <= 0.0) return {1.0, true};

    const double r2 = 1.0 - ss_res / ss_tot;
    const double predictors = static_cast<double>(cols) - 1.0;
    const double adjusted =
        1.0 - (1.0 - r2) * (static_cast<double>(n) - 1.0) / (static_cast<double>(n) - predictors - 1.0);
    return {adjusted, false};
}

double FeatureVector::at(const std::string& id) const {
    const auto it = values.find(id);
    if (it == values.end()) throw SelectionError("feature missing: " + id);
    return it->second;
}

namespace {

std::string threshold_tag(double p) {
    // 0.1 -> p100, 0.95 -> p950, 0.975 -> p975
    const int permille = static_cast<int>(std::lround(p * 1000.0));
    std::ostringstream out;
    out << 'p' << permille;
    return out.str();
}

std::vector<FeatureBound> build_schema() {
    std::vector<FeatureBound> schema;
    auto bounded = [&](const std::string& id, double lo, double hi) {
        schema.push_back({id, true, lo, hi});
    };
    auto unbounded = [&](const std::string& id) { schema.push_back({id, false, 0.0, 0.0}); };

    bounded("cc", 0.0, 1.0);
    unbounded("rrmse");
    const LccConfig defaults;
    for (const char* radius : {"lcc02", "lcc02d"}) {
        for (double p : defaults.thresholds) {
            bounded(std::string(radius) + "_" + threshold_tag(p), 0.0, 1.0);
        }
        bounded(std::string(radius) + "_mean", 0.0, 1.0);
        bounded(std::string(radius) + "_sd", 0.0, 1.0);
        unbounded(std::string(radius) + "_coeff");
    }
    bounded("b_h", 2.0, 400.0);
    bounded("b_l", 2.0, 400.0);
    bounded("br_h", 2.0, 20.0);
    bounded("br_l", 2.0, 20.0);
    bounded("br", 0.0, 1.0);
    bounded("dim", 1.0, 20.0);
    bounded("r2_lin_diff", 0.0, 1.0);
    bounded("r2_lini_diff", 0.0, 1.0);
    return schema;
}

}  // namespace

const std::vector<FeatureBound>& feature_schema() {
    static const std::vector<FeatureBound> schema = build_schema();
    return schema;
}

std::vector<std::string> feature_ids() {
    std::vector<std::string> ids;
    ids.reserve(feature_schema().size());
    for (const auto& bound : feature_schema()) ids.push_back(bound.id);
    return ids;
}

double scaled_lcc_radius(int d) { return std::pow(0.2, 1.0 / static_cast<double>(d)); }

FeatureVector repetition_features(const std::vector<Point>& high_points_unit,
                                  const std::vector<double>& y_low_at_high,
                                  const std::vector<double>& y_high, int n_low,
                                  const LccConfig& cfg) {
    const int n_high = static_cast<int>(high_points_unit.size());
    if (n_high < 2) throw SizeError("need at least two high-fidelity samples for features");
    const int d = static_cast<int>(high_points_unit[0].size());

    FeatureVector fv;
    fv.n_high = n_high;
    fv.n_low = n_low;

    try {
        fv.values["cc"] = cc(y_low_at_high, y_high);
    } catch (const UndefinedCorrelationError&) {
    }
    const auto [y_min, y_max] = std::minmax_element(y_high.begin(), y_high.end());
    if (*y_max > *y_min) fv.values["rrmse"] = rrmse(y_low_at_high, y_high);

    const double radii[2] = {0.2, scaled_lcc_radius(d)};
    const char* tags[2] = {"lcc02", "lcc02d"};
    for (int which = 0; which < 2; ++which) {
        const LccSummary summary =
            lcc_features(high_points_unit, y_low_at_high, y_high, radii[which], cfg);
        const std::string prefix = tags[which];
        for (const auto& [p, share] : summary.share_at_least) {
            fv.values[prefix + "_" + threshold_tag(p)] = share;
        }
        if (summary.mean) fv.values[prefix + "_mean"] = *summary.mean;
        if (summary.sd) fv.values[prefix + "_sd"] = *summary.sd;
        if (summary.coeff) fv.values[prefix + "_coeff"] = *summary.coeff;
    }

    const BudgetFeatures budgets = budget_features(n_high, n_low, d);
    fv.values["b_h"] = budgets.b_h;
    fv.values["b_l"] = budgets.b_l;
    fv.values["br_h"] = budgets.br_h;
    fv.values["br_l"] = budgets.br_l;
    fv.values["br"] = budgets.br;
    fv.values["dim"] = budgets.dim;

    std::vector<double> diff(y_high.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = y_high[i] - y_low_at_high[i];
    fv.values["r2_lin_diff"] = adjusted_r2_linear(high_points_unit, diff, false).value;
    fv.values["r2_lini_diff"] = adjusted_r2_linear(high_points_unit, diff, true).value;
    return fv;
}

FeatureVector sample_feature_vector(const std::vector<FeatureVector>& repetitions,
                                    std::map<std::string, int>* defined_counts) {
    if (repetitions.empty()) throw SizeError("need at least one repetition");
    std::map<std::string, double> sums;
    std::map<std::string, int> counts;
    for (const auto& rep : repetitions) {
        for (const auto& [id, value] : rep.values) {
            sums[id] += value;
            counts[id] += 1;
        }
    }
    FeatureVector out;
    out.provenance = FeatureProvenance::raw;
    out.n_high = repetitions.front().n_high;
    out.n_low = repetitions.front().n_low;
    for (const auto& [id, total] : sums) out.values[id] = total / counts[id];
    if (defined_counts) *defined_counts = counts;
    return out;
}

}  // namespace bifi
