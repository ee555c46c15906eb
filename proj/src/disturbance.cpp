#include "bifi/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bifi/rng.hpp"

namespace bifi {
namespace {

// Smooth bump: 1 at t = 0, exactly 0 for t >= 1, C-infinity in between.
double bump(double t) {
    const double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t2));
}

void validate(const DisturbanceConfig& cfg) {
    if (!std::isfinite(cfg.amplitude)) throw ConfigError("disturbance amplitude must be finite");
    if (!(cfg.radius > 0.0 && cfg.radius <= 1.0)) {
        throw ConfigError("disturbance radius must lie in (0, 1]");
    }
    if (!(cfg.target_height_quantile >= 0.0 && cfg.target_height_quantile <= 1.0)) {
        throw ConfigError("target height quantile must lie in [0, 1]");
    }
    if (cfg.mode == DisturbanceMode::centre_based && cfg.num_centres < 1) {
        throw ConfigError("centre-based disturbance needs at least one centre");
    }
}

struct SignedCentre {
    Point unit_position;
    double sign;
};

ScalarField centre_based_field(const Hypercube& domain, const ScalarField& base,
                               const DisturbanceConfig& cfg) {
    const std::size_t d = domain.dim();
    Rng rng(mix_seed(cfg.seed));
    std::vector<SignedCentre> centres;
    centres.reserve(static_cast<std::size_t>(cfg.num_centres));
    for (int c = 0; c < cfg.num_centres; ++c) {
        Point u(d);
        for (std::size_t i = 0; i < d; ++i) u[i] = rng.uniform();
        const double sign = rng.next_u64() & 1 ? 1.0 : -1.0;
        centres.push_back({std::move(u), sign});
    }
    const double ball = cfg.radius * std::sqrt(static_cast<double>(d));
    const double amplitude = cfg.amplitude;
    return [domain, base, centres, ball, amplitude](const Point& x) {
        double value = base(x);
        if (amplitude == 0.0) return value;
        const Point u = domain.to_unit(x);
        for (const auto& centre : centres) {
            double dist2 = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double diff = u[i] - centre.unit_position[i];
                dist2 += diff * diff;
            }
            value += amplitude * centre.sign * bump(std::sqrt(dist2) / ball);
        }
        return value;
    };
}

ScalarField height_based_field(const Hypercube& domain, const ScalarField& base,
                               const DisturbanceConfig& cfg) {
    const std::size_t d = domain.dim();
    Rng rng(mix_seed(cfg.seed));
    std::vector<double> probe;
    probe.reserve(1000);
    for (int k = 0; k < 1000; ++k) {
        Point u(d);
        for (std::size_t i = 0; i < d; ++i) u[i] = rng.uniform();
        probe.push_back(base(domain.from_unit(u)));
    }
    std::sort(probe.begin(), probe.end());
    const double pos = cfg.target_height_quantile * static_cast<double>(probe.size() - 1);
    const auto below = static_cast<std::size_t>(pos);
    const std::size_t above = std::min(below + 1, probe.size() - 1);
    const double frac = pos - static_cast<double>(below);
    const double target = probe[below] + frac * (probe[above] - probe[below]);
    double halfwidth = 0.1 * (probe.back() - probe.front());
    if (halfwidth <= 0.0) halfwidth = 1.0;  // constant base: band covers everything anyway
    const double amplitude = cfg.amplitude;
    return [base, target, halfwidth, amplitude](const Point& x) {
        const double value = base(x);
        if (amplitude == 0.0) return value;
        return value + amplitude * bump(std::abs(value - target) / halfwidth);
    };
}

}  // namespace

FunctionPair make_disturbance_pair(const std::string& id, const Hypercube& domain,
                                   const ScalarField& base, const DisturbanceConfig& cfg) {
    validate(cfg);
    ScalarField low = cfg.mode == DisturbanceMode::centre_based
                          ? centre_based_field(domain, base, cfg)
                          : height_based_field(domain, base, cfg);
    return FunctionPair(id, domain, base, std::move(low), SourceTag::disturbance);
}

}  // namespace bifi
