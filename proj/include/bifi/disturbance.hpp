#ifndef BIFI_DISTURBANCE_HPP
#define BIFI_DISTURBANCE_HPP

#include <cstdint>
#include <string>

#include "bifi/function_pair.hpp"

namespace bifi {

enum class DisturbanceMode { height_based, centre_based };

/// Settings for the disturbance-pair generator. The low-fidelity source is
/// the base function plus a smooth, compactly supported perturbation that is
/// fully determined by these fields (see make_disturbance_pair).
struct DisturbanceConfig {
    DisturbanceMode mode = DisturbanceMode::centre_based;
    double amplitude = 1.0;
    int num_centres = 1;                  // centre-based only
    double radius = 0.2;                  // fraction of the domain diagonal, (0, 1]
    double target_height_quantile = 0.5;  // height-based only
    std::uint64_t seed = 0;
};

/// Builds a function pair whose high-fidelity source is `base` and whose
/// low-fidelity source is `base` plus a disturbance field.
///
/// The bump kernel is exp(1 - 1/(1 - t^2)) for t < 1 and 0 beyond, so the
/// perturbation vanishes identically outside the disturbed region.
/// Centre-based mode places `num_centres` seeded centres in the domain and
/// sums signed bumps of radius `radius * |diagonal|` around them.
/// Height-based mode perturbs where the base value falls in a band around
/// the `target_height_quantile` quantile of base values, estimated on a
/// seeded 1000-point probe; the band halfwidth is a tenth of the probe range.
FunctionPair make_disturbance_pair(const std::string& id, const Hypercube& domain,
                                   const ScalarField& base, const DisturbanceConfig& cfg);

}  // namespace bifi

#endif
