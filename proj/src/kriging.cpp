#include "bifi/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "bifi/detail/nelder_mead.hpp"
#include "bifi/errors.hpp"
#include "bifi/rng.hpp"

namespace bifi {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_training_data(const std::vector<Point>& points, const std::vector<double>& values) {
    if (points.size() != values.size()) throw DataError("point and value counts differ");
    if (points.size() < 2) throw SizeError("training needs at least two samples");
    const std::size_t d = points[0].size();
    if (d == 0) throw DataError("points must have at least one coordinate");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != d) throw DataError("ragged point dimensions");
        for (double c : points[i]) {
            if (!std::isfinite(c)) throw DataError("non-finite training coordinate");
        }
        if (!std::isfinite(values[i])) throw DataError("non-finite training value");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i] == points[j]) {
                throw DegeneracyError("duplicate training points at indices " + std::to_string(i) +
                                      " and " + std::to_string(j));
            }
        }
    }
}

Eigen::MatrixXd correlation_matrix(const std::vector<Point>& points,
                                   const std::vector<double>& length_scales, double nugget) {
    const auto n = static_cast<Eigen::Index>(points.size());
    const std::size_t d = length_scales.size();
    Eigen::MatrixXd corr(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        corr(i, i) = 1.0 + nugget;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double h = (points[i][k] - points[j][k]) / length_scales[k];
                sum += h * h;
            }
            corr(i, j) = corr(j, i) = std::exp(-sum);
        }
    }
    return corr;
}

struct ConcentratedFit {
    double mu = 0.0;
    double sigma2 = 0.0;
    double log_likelihood = kNegInf;
    double nugget_used = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt;
    bool ok = false;
};

/// Profiles out the trend mean and process variance for fixed length scales.
/// The nugget escalates by factors of ten until the factorization succeeds.
ConcentratedFit concentrated_fit(const std::vector<Point>& points, const Eigen::VectorXd& y,
                                 const std::vector<double>& length_scales, double nugget,
                                 double nugget_max) {
    ConcentratedFit fit;
    const auto n = static_cast<Eigen::Index>(points.size());
    for (double eta = nugget; eta <= nugget_max * (1.0 + 1e-12); eta *= 10.0) {
        Eigen::MatrixXd corr = correlation_matrix(points, length_scales, eta);
        Eigen::LLT<Eigen::MatrixXd> llt(corr);
        if (llt.info() != Eigen::Success) continue;
        // A factorization that "succeeds" on a numerically singular matrix is
        // still useless; escalate the nugget until the solves are trustworthy.
        const auto& diag = llt.matrixLLT().diagonal();
        const double ratio = diag.minCoeff() / diag.maxCoeff();
        if (ratio * ratio < 1e-14) continue;

        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        const Eigen::VectorXd r_inv_y = llt.solve(y);
        const Eigen::VectorXd r_inv_one = llt.solve(ones);
        const double denom = ones.dot(r_inv_one);
        if (!(denom > 0.0)) continue;
        const double mu = ones.dot(r_inv_y) / denom;
        const Eigen::VectorXd centred = y - mu * ones;
        double sigma2 = centred.dot(llt.solve(centred)) / static_cast<double>(n);
        if (!std::isfinite(sigma2)) continue;
        sigma2 = std::max(sigma2, 1e-300);

        double log_det = 0.0;
        const auto& lower = llt.matrixLLT();
        for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(lower(i, i));

        const double ll = -0.5 * static_cast<double>(n) * std::log(sigma2) - 0.5 * log_det;
        if (!std::isfinite(ll)) continue;

        fit.mu = mu;
        fit.sigma2 = sigma2;
        fit.log_likelihood = ll;
        fit.nugget_used = eta;
        fit.llt = std::move(llt);
        fit.ok = true;
        return fit;
    }
    return fit;
}

}  // namespace

KrigingModel KrigingModel::with_hyperparameters(const std::vector<Point>& points,
                                                const std::vector<double>& values,
                                                const std::vector<double>& length_scales,
                                                double nugget, double nugget_max) {
    validate_training_data(points, values);
    if (length_scales.size() != points[0].size()) throw DataError("length scale count mismatch");
    for (double l : length_scales) {
        if (!(l > 0.0) || !std::isfinite(l)) throw DataError("length scales must be positive");
    }
    KrigingModel model;
    model.points_ = points;
    model.values_ = values;
    model.length_scales_ = length_scales;
    model.nugget_ = nugget;
    model.nugget_max_ = nugget_max;
    model.d_ = static_cast<int>(points[0].size());
    model.factorize();
    return model;
}

void KrigingModel::factorize() {
    const auto n = static_cast<Eigen::Index>(points_.size());
    const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    y_mean_ = 0.0;
    for (double v : values_) y_mean_ += v;
    y_mean_ /= static_cast<double>(n);
    if (*hi - *lo <= 0.0) {
        constant_ = true;
        y_scale_ = 1.0;
        mu_std_ = 0.0;
        sigma2_std_ = 0.0;
        return;
    }
    double ss = 0.0;
    for (double v : values_) ss += (v - y_mean_) * (v - y_mean_);
    y_scale_ = std::sqrt(ss / static_cast<double>(n - 1));

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = (values_[i] - y_mean_) / y_scale_;
    ConcentratedFit fit = concentrated_fit(points_, y, length_scales_, nugget_, nugget_max_);
    if (!fit.ok) {
        throw DegeneracyError("correlation matrix is not positive definite at any nugget level");
    }
    mu_std_ = fit.mu;
    sigma2_std_ = fit.sigma2;
    nugget_ = fit.nugget_used;
    log_likelihood_ = fit.log_likelihood;
    llt_ = std::move(fit.llt);

    Eigen::VectorXd centred = y - Eigen::VectorXd::Constant(n, mu_std_);
    alpha_ = llt_.solve(centred);
}

KrigingModel KrigingModel::fit(const std::vector<Point>& points, const std::vector<double>& values,
                               const TrainerConfig& config, std::uint64_t seed) {
    validate_training_data(points, values);
    const std::size_t d = points[0].size();

    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi - *lo <= 0.0) {
        // Flat likelihood: short-circuit to a constant predictor.
        KrigingModel model;
        model.points_ = points;
        model.values_ = values;
        model.length_scales_.assign(d, 1.0);
        model.d_ = static_cast<int>(d);
        model.factorize();
        return model;
    }

    const auto n = static_cast<Eigen::Index>(points.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double scale = std::sqrt(ss / static_cast<double>(n - 1));
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = (values[i] - mean) / scale;

    const auto objective = [&](const std::vector<double>& log_lengths) {
        std::vector<double> lengths(d);
        for (std::size_t k = 0; k < d; ++k) lengths[k] = std::exp(log_lengths[k]);
        return concentrated_fit(points, y, lengths, config.nugget, config.nugget_max)
            .log_likelihood;
    };

    const std::vector<double> box_lo(d, config.log_length_lo);
    const std::vector<double> box_hi(d, config.log_length_hi);
    Rng rng(mix_seed(seed));
    std::vector<double> best_x;
    double best_value = kNegInf;
    for (int start = 0; start < config.num_starts; ++start) {
        std::vector<double> x0(d);
        for (std::size_t k = 0; k < d; ++k) {
            x0[k] = rng.uniform(config.log_length_lo, config.log_length_hi);
        }
        const auto result =
            detail::nelder_mead_maximize(objective, x0, box_lo, box_hi, config.max_iterations);
        if (result.value > best_value) {
            best_value = result.value;
            best_x = result.x;
        }
    }
    if (best_x.empty() || best_value == kNegInf) {
        throw DegeneracyError("likelihood search failed for every start point");
    }

    std::vector<double> lengths(d);
    for (std::size_t k = 0; k < d; ++k) lengths[k] = std::exp(best_x[k]);
    KrigingModel model =
        with_hyperparameters(points, values, lengths, config.nugget, config.nugget_max);
    return model;
}

Prediction KrigingModel::predict(const Point& x) const {
    if (domain_) domain_->require_inside(x);
    if (static_cast<int>(x.size()) != d_) throw DomainError("query point dimension mismatch");
    for (double c : x) {
        if (!std::isfinite(c)) throw DomainError("non-finite query coordinate");
    }
    if (constant_) return {y_mean_, 0.0};
    // Deterministic sources interpolate exactly: a query that coincides with
    // a training input returns the stored observation. The nugget is jitter
    // for the factorization, not observation noise.
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i] == x) return {values_[i], 0.0};
    }

    const auto n = static_cast<Eigen::Index>(points_.size());
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int k = 0; k < d_; ++k) {
            const double h = (x[k] - points_[i][k]) / length_scales_[k];
            sum += h * h;
        }
        r(i) = std::exp(-sum);
    }
    const double mean_std = mu_std_ + r.dot(alpha_);
    const double reduction = r.dot(llt_.solve(r));
    const double variance_std = std::max(0.0, sigma2_std_ * (1.0 - reduction));
    return {y_mean_ + y_scale_ * mean_std, y_scale_ * y_scale_ * variance_std};
}

double KrigingModel::trend_mean() const {
    return constant_ ? y_mean_ : y_mean_ + y_scale_ * mu_std_;
}

double KrigingModel::process_variance() const {
    return constant_ ? 0.0 : y_scale_ * y_scale_ * sigma2_std_;
}

void KrigingModel::save(std::ostream& out) const {
    out.precision(17);
    out << "bifid-model v1\n";
    out << "kriging\n";
    out << "d " << d_ << "\n";
    out << "n " << points_.size() << "\n";
    out << "nugget " << nugget_ << "\n";
    out << "lengths";
    for (double l : length_scales_) out << ' ' << l;
    out << "\n";
    out << "trend " << trend_mean() << "\n";
    out << "variance " << process_variance() << "\n";
    out << "data\n";
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (double c : points_[i]) out << c << ' ';
        out << values_[i] << '\n';
    }
}

KrigingModel KrigingModel::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "bifid-model v1") {
        throw SchemaError("not a bifid-model v1 stream");
    }
    if (!std::getline(in, line) || line != "kriging") throw SchemaError("expected kriging block");
    std::string key;
    int d = 0;
    std::size_t n = 0;
    double nugget = 0.0;
    in >> key >> d;
    if (key != "d") throw SchemaError("expected 'd'");
    in >> key >> n;
    if (key != "n") throw SchemaError("expected 'n'");
    in >> key >> nugget;
    if (key != "nugget") throw SchemaError("expected 'nugget'");
    in >> key;
    if (key != "lengths") throw SchemaError("expected 'lengths'");
    std::vector<double> lengths(static_cast<std::size_t>(d));
    for (double& l : lengths) in >> l;
    double ignored = 0.0;
    in >> key >> ignored;  // trend
    in >> key >> ignored;  // variance
    in >> key;
    if (key != "data") throw SchemaError("expected 'data'");
    std::vector<Point> points(n, Point(static_cast<std::size_t>(d)));
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) in >> points[i][k];
        in >> values[i];
    }
    if (!in) throw SchemaError("truncated model data");
    return with_hyperparameters(points, values, lengths, nugget);
}

double concentrated_log_likelihood(const std::vector<Point>& points,
                                   const std::vector<double>& values,
                                   const std::vector<double>& length_scales, double nugget,
                                   double nugget_max) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(values.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = values[i];
    const ConcentratedFit fit = concentrated_fit(points, y, length_scales, nugget, nugget_max);
    return fit.ok ? fit.log_likelihood : kNegInf;
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw SizeError("correlation needs two equal vectors");
    const auto n = static_cast<double>(a.size());
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= n;
    mean_b /= n;
    double ss_a = 0.0, ss_b = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        ss_a += da * da;
        ss_b += db * db;
        cross += da * db;
    }
    if (ss_a <= 0.0 || ss_b <= 0.0) {
        throw UndefinedCorrelationError("correlation undefined: constant vector");
    }
    const double s_a = std::sqrt(ss_a / (n - 1.0));
    const double s_b = std::sqrt(ss_b / (n - 1.0));
    return cross / ((n - 1.0) * s_a * s_b);
}

}  // namespace bifi
