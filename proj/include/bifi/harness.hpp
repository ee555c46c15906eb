#ifndef BIFI_HARNESS_HPP
#define BIFI_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bifi/features.hpp"
#include "bifi/function_pair.hpp"
#include "bifi/kriging.hpp"
#include "bifi/transforms.hpp"

namespace bifi {

/// One benchmark instance: a function pair together with the sample budgets
/// the two models are trained under.
struct InstanceSpec {
    std::string pair_id;
    int n_h = 0;
    int n_l = 0;
    int repetitions = 40;
    std::uint64_t master_seed = 0;
};

struct InstanceResult {
    InstanceSpec spec;
    int d = 0;
    SourceTag source = SourceTag::literature;
    /// Paired per-repetition accuracies; degenerate repetitions are excluded
    /// from both vectors so pairing stays intact.
    std::vector<double> kriging_accuracy;
    std::vector<double> cokriging_accuracy;
    int degenerate_repetitions = 0;
    double p_kriging = 0.0;
    double p_cokriging = 0.0;
    bool good_kriging = false;
    bool good_cokriging = false;
    bool low_power = false;
    FeatureVector raw_features;  // averaged across repetitions
    std::map<std::string, int> feature_counts;
};

/// Good performance per the protocol: strictly more likely than not that the
/// model is at least as accurate as its competitor.
inline bool binary_label(double p) { return p > 0.5; }

/// The standard benchmark budget grid: n_l in {4d,8d,...,20d}, n_h in
/// {2d,4d,...,20d} with n_h <= n_l (30 combinations). Exposed on the CLI as
/// `--grid paper`.
std::vector<std::pair<int, int>> paper_budget_grid(int d);

/// Runs the per-instance protocol: per repetition, build an optimized LHS
/// plan and nested subset, evaluate both sources, train both models, score
/// both against a shared random test plan of accuracy_per_dim * d points,
/// and collect the sample features. Afterwards the paired accuracies are
/// compared with the signed-rank test (tolerance 0.001) in both directions
/// and the binary labels derived from the p > 0.5 rule.
///
/// Repetitions whose training or scoring degenerates are flagged and
/// excluded from the pairing; their features (which depend only on the data)
/// still accumulate. With fewer than 6 valid pairs the p-values are set just
/// below 0.5 and both labels are bad, flagged via `low_power`.
InstanceResult run_instance(const InstanceSpec& spec, const FunctionPair& pair,
                            const TrainerConfig& config, int accuracy_per_dim = 1000);

/// Metadata table: one row per instance, canonical column order.
struct MetadataRow {
    std::string instance_id;
    std::string source;
    int d = 0;
    int n_h = 0;
    int n_l = 0;
    FeatureVector raw;
    FeatureVector transformed;
    double p_kriging = 0.0;
    double p_cokriging = 0.0;
    int good_kriging = 0;
    int good_cokriging = 0;
};

struct MetadataTable {
    std::vector<std::string> feature_columns;  // canonical feature id order
    std::vector<MetadataRow> rows;
};

/// Builds the metadata table, fitting feature transforms across instances.
/// Instance ids are `<pair>_nh<n_h>_nl<n_l>`; duplicates are a SchemaError.
MetadataTable assemble_metadata(const std::vector<InstanceResult>& results,
                                TransformSet* fitted_transforms = nullptr);

void save_metadata_csv(const MetadataTable& table, std::ostream& out);
MetadataTable load_metadata_csv(std::istream& in);

}  // namespace bifi

#endif
