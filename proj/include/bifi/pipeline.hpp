#ifndef BIFI_PIPELINE_HPP
#define BIFI_PIPELINE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bifi/disturbance.hpp"
#include "bifi/harness.hpp"
#include "bifi/selector.hpp"

namespace bifi {

/// A disturbance pair declared in a run config: a catalogue base function
/// plus generator settings.
struct DisturbancePairSpec {
    std::string id;
    std::string base_pair;
    DisturbanceConfig config;
};

/// Everything a pipeline run needs; serializes losslessly to JSON.
struct RunConfig {
    std::vector<std::string> pair_ids;  // empty means the whole catalogue
    std::vector<DisturbancePairSpec> disturbance_pairs;
    bool paper_grid = true;
    /// Used when paper_grid is false: (n_h, n_l) as multiples of d.
    std::vector<std::pair<int, int>> budget_multipliers;
    int repetitions = 40;
    std::uint64_t master_seed = 0;
    TrainerConfig trainer;
    int accuracy_per_dim = 1000;
    int jobs = 1;
    // filtering stage
    std::string filter_mode = "critical";  // "critical" | "dissimilar" | "off"
    std::optional<double> filter_theta;    // unset: select over theta_grid
    std::vector<double> theta_grid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::string out_dir = ".";
};

RunConfig parse_run_config(std::istream& in);
void write_run_config(const RunConfig& config, std::ostream& out);

/// Stable hash of the serialized config, recorded in the manifest.
std::string config_digest(const RunConfig& config);

/// Resolves the configured pair selection against the catalogue and the
/// declared disturbance pairs. Throws ConfigError for unknown ids.
std::vector<FunctionPair> resolve_pairs(const RunConfig& config);

struct PipelineOutcome {
    int instances_run = 0;
    int instances_failed = 0;
    std::vector<std::string> failures;  // "<instance_id>: <reason>"
    std::string metadata_path;
    std::string transforms_path;
    std::string filtered_path;
    std::string decisions_path;
    std::string manifest_path;
};

/// Runs the full pipeline: instances, metadata assembly, transforms,
/// filtering, rule decisions, manifest. Reruns with the same config produce
/// byte-identical artifacts. Per-instance failures are recorded and the run
/// continues.
PipelineOutcome command_pipeline(const RunConfig& config);

/// Per-algorithm goodness rates and, when decisions are supplied, selector
/// accuracy and per-algorithm precision/recall against the labels.
struct ReportSummary {
    int instances = 0;
    double pr_good_kriging = 0.0;
    double pr_good_cokriging = 0.0;
    /// Both models can be good at once; both bad happens only through the
    /// strict 0.5 threshold, so its frequency is worth watching.
    double pr_both_good = 0.0;
    double pr_both_bad = 0.0;
    bool has_decisions = false;
    double selector_accuracy = 0.0;
    double precision_kriging = 0.0;
    double recall_kriging = 0.0;
    double precision_cokriging = 0.0;
    double recall_cokriging = 0.0;
};

ReportSummary command_report(const MetadataTable& metadata,
                             const std::vector<std::pair<std::string, std::string>>& decisions);

/// Rule decisions (raw feature space) for every metadata row; rows missing a
/// required feature are reported in `failures`.
std::vector<std::pair<std::string, Decision>> rule_decisions(
    const MetadataTable& metadata, std::vector<std::string>* failures = nullptr);

}  // namespace bifi

#endif
