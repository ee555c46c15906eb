#ifndef BIFI_COKRIGING_HPP
#define BIFI_COKRIGING_HPP

#include <cstdint>
#include <iosfwd>

#include "bifi/kriging.hpp"

namespace bifi {

/// Two-source autoregressive surrogate: a Kriging model of the cheap source
/// plus a scaled difference process, so that the prediction at x is
/// rho * low(x) + diff(x). The multiplier rho and the difference-process
/// length scales are trained jointly by maximizing the concentrated
/// likelihood of the residuals y_h - rho * low(X_h).
class CoKrigingModel {
public:
    /// Requires the nested property X_h subset of X_l. When the low-fidelity
    /// predictions carry no signal (constant over X_h), the model reduces to
    /// plain Kriging on (X_h, y_h) with rho = 0, trained with the same
    /// config and seed.
    static CoKrigingModel fit(const std::vector<Point>& high_points,
                              const std::vector<double>& high_values,
                              const std::vector<Point>& low_points,
                              const std::vector<double>& low_values, const TrainerConfig& config,
                              std::uint64_t seed);

    Prediction predict(const Point& x) const;

    double rho() const { return rho_; }
    const KrigingModel& low_model() const { return low_; }
    const KrigingModel& diff_model() const { return diff_; }
    int dim() const { return diff_.dim(); }
    bool nested() const { return nested_; }

    void set_domain(const Hypercube& domain);

    void save(std::ostream& out) const;
    static CoKrigingModel load(std::istream& in);

private:
    CoKrigingModel(KrigingModel low, KrigingModel diff, double rho, bool nested)
        : low_(std::move(low)), diff_(std::move(diff)), rho_(rho), nested_(nested) {}

    KrigingModel low_;
    KrigingModel diff_;
    double rho_ = 0.0;
    bool nested_ = true;
};

}  // namespace bifi

#endif
