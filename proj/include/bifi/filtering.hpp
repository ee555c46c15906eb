#ifndef BIFI_FILTERING_HPP
#define BIFI_FILTERING_HPP

#include <string>
#include <vector>

namespace bifi {

/// One instance as seen by the benchmark filter: transformed features, the
/// binary performance bits (one per algorithm), and a priority tier where a
/// lower tier is kept preferentially.
struct InstanceMetadataRow {
    std::string instance_id;
    std::vector<double> features;  // transformed, shared column order
    std::vector<int> performance;  // delta bits, shared algorithm order
    int priority_tier = 0;
};

struct FilterResult {
    std::vector<std::string> retained_ids;
    double theta = 0.0;
    double uniformity = 0.0;  // NaN when undefined (fewer than 2 retained)
    int dissimilar_count = 0;
    int violation_count = 0;  // retained only for the label mismatch
    int critical_count = 0;
};

/// Removal-scan filtering: rows are visited lowest priority first (higher
/// tier first, ties by descending instance id) and removed when another row
/// still in the set lies within theta in feature space. Every retained pair
/// ends up farther apart than theta.
FilterResult dissimilar_set(const std::vector<InstanceMetadataRow>& rows, double theta);

/// Like dissimilar_set, but a row is only removed when the nearby row also
/// has identical performance bits; pairs that are close in feature space but
/// disagree on performance are both kept. Every retained pair is farther
/// than theta apart or differs in its bits.
FilterResult critical_set(const std::vector<InstanceMetadataRow>& rows, double theta);

/// 1 - sd/mean of the nearest-neighbour distances between the given feature
/// vectors. Throws SizeError with fewer than two vectors.
double uniformity(const std::vector<std::vector<double>>& features);

/// Evaluates the dissimilar-set uniformity over the ascending theta grid,
/// rescales the defined values onto [0,1], and returns the smallest theta
/// whose rescaled uniformity reaches 0.5. A single-candidate grid (or a grid
/// where every defined value coincides) makes the rescaled value 1 by
/// convention. Throws SelectionError when no grid point has a defined
/// uniformity.
double select_theta(const std::vector<InstanceMetadataRow>& rows,
                    const std::vector<double>& theta_grid);

}  // namespace bifi

#endif
