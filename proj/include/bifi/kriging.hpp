#ifndef BIFI_KRIGING_HPP
#define BIFI_KRIGING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bifi/hypercube.hpp"

namespace bifi {

struct Prediction {
    double mean;
    double variance;
};

/// Settings shared by the Kriging and Co-Kriging trainers.
struct TrainerConfig {
    int num_starts = 10;       // multistart budget of the likelihood search
    int max_iterations = 120;  // simplex iterations per start
    double nugget = 1e-10;     // escalated by 10x on factorization failure
    double nugget_max = 1e-4;
    double log_length_lo = -4.605170185988091;  // log 1e-2
    double log_length_hi = 4.605170185988091;   // log 1e2
    double rho_lo = -5.0;  // autoregressive multiplier bounds (Co-Kriging)
    double rho_hi = 5.0;
};

/// Gaussian-process interpolator with a constant trend and an anisotropic
/// squared-exponential correlation, r(h) = exp(-sum_k (h_k / l_k)^2).
/// Hyperparameters are the maximum-likelihood estimators found by a seeded
/// multistart simplex search over the log length scales; the concentrated
/// likelihood eliminates the trend mean and process variance. Trained models
/// are immutable and safe to predict from concurrently.
class KrigingModel {
public:
    /// Maximum-likelihood training. Requires at least two distinct points
    /// with finite values. Constant values short-circuit to a constant
    /// predictor, since the likelihood is flat there.
    static KrigingModel fit(const std::vector<Point>& points, const std::vector<double>& values,
                            const TrainerConfig& config, std::uint64_t seed);

    /// Builds a model with the given length scales (no likelihood search).
    static KrigingModel with_hyperparameters(const std::vector<Point>& points,
                                             const std::vector<double>& values,
                                             const std::vector<double>& length_scales,
                                             double nugget = 1e-10, double nugget_max = 1e-4);

    Prediction predict(const Point& x) const;

    int dim() const { return d_; }
    int size() const { return static_cast<int>(points_.size()); }
    bool is_constant() const { return constant_; }
    const std::vector<Point>& training_points() const { return points_; }
    const std::vector<double>& training_values() const { return values_; }
    const std::vector<double>& length_scales() const { return length_scales_; }
    double trend_mean() const;
    double process_variance() const;
    double nugget() const { return nugget_; }
    /// Best concentrated log-likelihood seen during training (internal units).
    double log_likelihood() const { return log_likelihood_; }

    /// Optional evaluation domain; when set, predict() rejects outside points.
    void set_domain(const Hypercube& domain) { domain_ = domain; }

    void save(std::ostream& out) const;
    static KrigingModel load(std::istream& in);

private:
    KrigingModel() = default;
    void factorize();

    std::vector<Point> points_;
    std::vector<double> values_;
    std::vector<double> length_scales_;
    double nugget_ = 1e-10;
    double nugget_max_ = 1e-4;
    bool constant_ = false;
    double log_likelihood_ = 0.0;
    int d_ = 0;

    // standardized-output internals
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    double mu_std_ = 0.0;
    double sigma2_std_ = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;  // R^-1 (y_std - mu 1)

    std::optional<Hypercube> domain_;
};

/// Pearson sample correlation (not squared) between two equal-length vectors.
/// Throws UndefinedCorrelationError when either vector is constant.
double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

/// Concentrated log-likelihood of a constant-trend GP with the given length
/// scales on raw (unstandardized) values; -infinity when the correlation
/// matrix cannot be factorized at any admissible nugget. Scale-sensitive, so
/// residual magnitudes are comparable across candidate rho values.
double concentrated_log_likelihood(const std::vector<Point>& points,
                                   const std::vector<double>& values,
                                   const std::vector<double>& length_scales, double nugget,
                                   double nugget_max);

}  // namespace bifi

#endif
