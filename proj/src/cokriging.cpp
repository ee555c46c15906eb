#include "bifi/cokriging.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "bifi/detail/nelder_mead.hpp"
#include "bifi/errors.hpp"
#include "bifi/rng.hpp"

namespace bifi {
namespace {

class DesignNotNested : public DataError {
public:
    using DataError::DataError;
};

void require_nested(const std::vector<Point>& high_points, const std::vector<Point>& low_points) {
    for (std::size_t i = 0; i < high_points.size(); ++i) {
        const bool found = std::find(low_points.begin(), low_points.end(), high_points[i]) !=
                           low_points.end();
        if (!found) {
            throw DesignNotNested("design is not nested: high-fidelity point " + std::to_string(i) +
                                  " is missing from the low-fidelity plan");
        }
    }
}

}  // namespace

CoKrigingModel CoKrigingModel::fit(const std::vector<Point>& high_points,
                                   const std::vector<double>& high_values,
                                   const std::vector<Point>& low_points,
                                   const std::vector<double>& low_values,
                                   const TrainerConfig& config, std::uint64_t seed) {
    if (high_points.size() > low_points.size()) {
        throw SizeError("more high-fidelity than low-fidelity samples");
    }
    require_nested(high_points, low_points);

    KrigingModel low = KrigingModel::fit(low_points, low_values, config, derive_seed(seed, 0, 1));

    std::vector<double> low_at_high(high_points.size());
    for (std::size_t i = 0; i < high_points.size(); ++i) {
        low_at_high[i] = low.predict(high_points[i]).mean;
    }
    const auto [lo, hi] = std::minmax_element(low_at_high.begin(), low_at_high.end());
    if (*hi - *lo <= 0.0) {
        // No usable low-fidelity signal: ignore the source entirely.
        KrigingModel diff = KrigingModel::fit(high_points, high_values, config, seed);
        return CoKrigingModel(std::move(low), std::move(diff), 0.0, true);
    }

    const std::size_t d = high_points[0].size();
    const auto objective = [&](const std::vector<double>& params) {
        std::vector<double> lengths(d);
        for (std::size_t k = 0; k < d; ++k) lengths[k] = std::exp(params[k]);
        const double rho = params[d];
        std::vector<double> residuals(high_points.size());
        for (std::size_t i = 0; i < residuals.size(); ++i) {
            residuals[i] = high_values[i] - rho * low_at_high[i];
        }
        // Concentrated likelihood of the difference process on the raw
        // residuals; the scale term is what pulls rho towards values that
        // shrink them.
        return concentrated_log_likelihood(high_points, residuals, lengths, config.nugget,
                                           config.nugget_max);
    };

    std::vector<double> box_lo(d + 1, config.log_length_lo);
    std::vector<double> box_hi(d + 1, config.log_length_hi);
    box_lo[d] = config.rho_lo;
    box_hi[d] = config.rho_hi;

    Rng rng(mix_seed(derive_seed(seed, 0, 2)));
    std::vector<double> best_x;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int start = 0; start < config.num_starts; ++start) {
        std::vector<double> x0(d + 1);
        for (std::size_t k = 0; k < d; ++k) {
            x0[k] = rng.uniform(config.log_length_lo, config.log_length_hi);
        }
        // Half the starts probe the neighbourhood of rho = 1, the natural
        // guess for a low-fidelity source on the same scale.
        x0[d] = start % 2 == 0 ? rng.uniform(0.0, 2.0) : rng.uniform(config.rho_lo, config.rho_hi);
        const auto result =
            detail::nelder_mead_maximize(objective, x0, box_lo, box_hi, config.max_iterations);
        if (result.value > best_value) {
            best_value = result.value;
            best_x = result.x;
        }
    }
    if (best_x.empty() || best_value == -std::numeric_limits<double>::infinity()) {
        throw DegeneracyError("difference-process likelihood search failed");
    }

    std::vector<double> lengths(d);
    for (std::size_t k = 0; k < d; ++k) lengths[k] = std::exp(best_x[k]);
    const double rho = best_x[d];
    std::vector<double> residuals(high_points.size());
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        residuals[i] = high_values[i] - rho * low_at_high[i];
    }
    KrigingModel diff = KrigingModel::with_hyperparameters(high_points, residuals, lengths,
                                                           config.nugget, config.nugget_max);
    return CoKrigingModel(std::move(low), std::move(diff), rho, true);
}

Prediction CoKrigingModel::predict(const Point& x) const {
    const Prediction low = low_.predict(x);
    const Prediction diff = diff_.predict(x);
    return {rho_ * low.mean + diff.mean, rho_ * rho_ * low.variance + diff.variance};
}

void CoKrigingModel::set_domain(const Hypercube& domain) {
    low_.set_domain(domain);
    diff_.set_domain(domain);
}

void CoKrigingModel::save(std::ostream& out) const {
    out.precision(17);
    out << "bifid-model v1\n";
    out << "cokriging\n";
    out << "rho " << rho_ << "\n";
    low_.save(out);
    diff_.save(out);
}

CoKrigingModel CoKrigingModel::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "bifid-model v1") {
        throw SchemaError("not a bifid-model v1 stream");
    }
    if (!std::getline(in, line) || line != "cokriging") throw SchemaError("expected cokriging block");
    std::string key;
    double rho = 0.0;
    in >> key >> rho;
    if (key != "rho") throw SchemaError("expected 'rho'");
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    KrigingModel low = KrigingModel::load(in);
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    KrigingModel diff = KrigingModel::load(in);
    return CoKrigingModel(std::move(low), std::move(diff), rho, true);
}

}  // namespace bifi
