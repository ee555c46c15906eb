#include "bifi/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bifi/catalogue.hpp"
#include "bifi/csv.hpp"
#include "bifi/errors.hpp"
#include "bifi/filtering.hpp"
#include "bifi/rng.hpp"

namespace bifi {

namespace {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

nlohmann::json config_to_json(const RunConfig& config) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["pairs"] = config.pair_ids;
    auto& disturbed = doc["disturbance_pairs"];
    disturbed = nlohmann::json::array();
    for (const auto& spec : config.disturbance_pairs) {
        nlohmann::json entry;
        entry["id"] = spec.id;
        entry["base_pair"] = spec.base_pair;
        entry["mode"] =
            spec.config.mode == DisturbanceMode::centre_based ? "centre-based" : "height-based";
        entry["amplitude"] = spec.config.amplitude;
        entry["num_centres"] = spec.config.num_centres;
        entry["radius"] = spec.config.radius;
        entry["target_height_quantile"] = spec.config.target_height_quantile;
        entry["seed"] = spec.config.seed;
        disturbed.push_back(entry);
    }
    doc["grid"] = config.paper_grid ? nlohmann::json("paper") : [&] {
        nlohmann::json grid = nlohmann::json::array();
        for (const auto& [high, low] : config.budget_multipliers) {
            grid.push_back(nlohmann::json::array({high, low}));
        }
        return grid;
    }();
    doc["repetitions"] = config.repetitions;
    doc["seed"] = config.master_seed;
    doc["trainer"] = {{"num_starts", config.trainer.num_starts},
                      {"max_iterations", config.trainer.max_iterations},
                      {"nugget", config.trainer.nugget},
                      {"nugget_max", config.trainer.nugget_max}};
    doc["accuracy_per_dim"] = config.accuracy_per_dim;
    doc["jobs"] = config.jobs;
    doc["filter"] = {{"mode", config.filter_mode},
                     {"theta", config.filter_theta ? nlohmann::json(*config.filter_theta)
                                                   : nlohmann::json("auto")},
                     {"theta_grid", config.theta_grid}};
    doc["out_dir"] = config.out_dir;
    return doc;
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        RunConfig config;
        if (doc.contains("version") && doc["version"].get<int>() != 1) {
            throw ConfigError("unsupported config version");
        }
        if (doc.contains("pairs")) config.pair_ids = doc["pairs"].get<std::vector<std::string>>();
        if (doc.contains("disturbance_pairs")) {
            for (const auto& entry : doc["disturbance_pairs"]) {
                DisturbancePairSpec spec;
                spec.id = entry.at("id").get<std::string>();
                spec.base_pair = entry.at("base_pair").get<std::string>();
                const std::string mode = entry.value("mode", "centre-based");
                if (mode == "centre-based") {
                    spec.config.mode = DisturbanceMode::centre_based;
                } else if (mode == "height-based") {
                    spec.config.mode = DisturbanceMode::height_based;
                } else {
                    throw ConfigError("unknown disturbance mode: " + mode);
                }
                spec.config.amplitude = entry.value("amplitude", 1.0);
                spec.config.num_centres = entry.value("num_centres", 1);
                spec.config.radius = entry.value("radius", 0.2);
                spec.config.target_height_quantile = entry.value("target_height_quantile", 0.5);
                spec.config.seed = entry.value("seed", std::uint64_t{0});
                config.disturbance_pairs.push_back(std::move(spec));
            }
        }
        if (doc.contains("grid")) {
            if (doc["grid"].is_string()) {
                if (doc["grid"].get<std::string>() != "paper") {
                    throw ConfigError("grid must be \"paper\" or a list of [n_h, n_l] multipliers");
                }
                config.paper_grid = true;
            } else {
                config.paper_grid = false;
                for (const auto& entry : doc["grid"]) {
                    config.budget_multipliers.emplace_back(entry.at(0).get<int>(),
                                                           entry.at(1).get<int>());
                }
                if (config.budget_multipliers.empty()) throw ConfigError("empty budget grid");
            }
        }
        config.repetitions = doc.value("repetitions", 40);
        config.master_seed = doc.value("seed", std::uint64_t{0});
        if (doc.contains("trainer")) {
            const auto& trainer = doc["trainer"];
            config.trainer.num_starts = trainer.value("num_starts", config.trainer.num_starts);
            config.trainer.max_iterations =
                trainer.value("max_iterations", config.trainer.max_iterations);
            config.trainer.nugget = trainer.value("nugget", config.trainer.nugget);
            config.trainer.nugget_max = trainer.value("nugget_max", config.trainer.nugget_max);
        }
        config.accuracy_per_dim = doc.value("accuracy_per_dim", 1000);
        config.jobs = doc.value("jobs", 1);
        if (doc.contains("filter")) {
            const auto& filter = doc["filter"];
            config.filter_mode = filter.value("mode", "critical");
            if (filter.contains("theta") && filter["theta"].is_number()) {
                config.filter_theta = filter["theta"].get<double>();
            }
            if (filter.contains("theta_grid")) {
                config.theta_grid = filter["theta_grid"].get<std::vector<double>>();
            }
        }
        config.out_dir = doc.value("out_dir", std::string("."));
        if (config.repetitions < 1) throw ConfigError("repetitions must be positive");
        if (config.jobs < 1) throw ConfigError("jobs must be positive");
        if (config.filter_mode != "critical" && config.filter_mode != "dissimilar" &&
            config.filter_mode != "off") {
            throw ConfigError("filter mode must be critical, dissimilar or off");
        }
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config field: ") + e.what());
    }
}

void write_run_config(const RunConfig& config, std::ostream& out) {
    out << config_to_json(config).dump(2) << "\n";
}

std::string config_digest(const RunConfig& config) {
    // FNV-1a, enough to tie artifacts to a config.
    std::ostringstream hex;
    hex << std::hex << fnv1a(config_to_json(config).dump());
    return hex.str();
}

std::vector<FunctionPair> resolve_pairs(const RunConfig& config) {
    std::vector<FunctionPair> pairs;
    if (config.pair_ids.empty()) {
        pairs = literature_pairs();
    } else {
        for (const auto& id : config.pair_ids) {
            try {
                pairs.push_back(literature_pair(id));
            } catch (const SelectionError&) {
                throw ConfigError("unknown pair id: " + id);
            }
        }
    }
    for (const auto& spec : config.disturbance_pairs) {
        FunctionPair base = [&] {
            try {
                return literature_pair(spec.base_pair);
            } catch (const SelectionError&) {
                throw ConfigError("unknown base pair for disturbance: " + spec.base_pair);
            }
        }();
        const Hypercube domain = base.domain();
        pairs.push_back(make_disturbance_pair(
            spec.id, domain, [base](const Point& x) { return base.high(x); }, spec.config));
    }
    return pairs;
}

namespace {

std::vector<InstanceSpec> expand_instances(const RunConfig& config,
                                           const std::vector<FunctionPair>& pairs) {
    std::vector<InstanceSpec> specs;
    for (const auto& pair : pairs) {
        const int d = static_cast<int>(pair.dim());
        std::vector<std::pair<int, int>> budgets;
        if (config.paper_grid) {
            budgets = paper_budget_grid(d);
        } else {
            for (const auto& [high, low] : config.budget_multipliers) {
                budgets.emplace_back(high * d, low * d);
            }
        }
        for (const auto& [n_h, n_l] : budgets) {
            InstanceSpec spec;
            spec.pair_id = pair.id();
            spec.n_h = n_h;
            spec.n_l = n_l;
            spec.repetitions = config.repetitions;
            // Each instance gets its own deterministic stream.
            spec.master_seed = derive_seed(config.master_seed, fnv1a(spec.pair_id),
                                           static_cast<std::uint64_t>(n_h) * 1000003u + n_l);
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

int source_tier(const std::string& source) { return source == "literature" ? 0 : 1; }

std::vector<InstanceMetadataRow> filter_rows(const MetadataTable& table,
                                             std::vector<std::string>* dropped_columns) {
    // Only feature columns defined for every row can enter the distance.
    std::vector<std::string> usable;
    for (const auto& id : table.feature_columns) {
        bool complete = true;
        for (const auto& row : table.rows) {
            if (!row.transformed.has(id)) {
                complete = false;
                break;
            }
        }
        if (complete) {
            usable.push_back(id);
        } else if (dropped_columns) {
            dropped_columns->push_back(id);
        }
    }
    std::vector<InstanceMetadataRow> rows;
    for (const auto& row : table.rows) {
        InstanceMetadataRow out;
        out.instance_id = row.instance_id;
        for (const auto& id : usable) out.features.push_back(row.transformed.at(id));
        out.performance = {row.good_kriging, row.good_cokriging};
        out.priority_tier = source_tier(row.source);
        rows.push_back(std::move(out));
    }
    return rows;
}

}  // namespace

PipelineOutcome command_pipeline(const RunConfig& config) {
    namespace fs = std::filesystem;
    const std::vector<FunctionPair> pairs = resolve_pairs(config);
    const std::vector<InstanceSpec> specs = expand_instances(config, pairs);

    fs::create_directories(config.out_dir);
    PipelineOutcome outcome;

    // Parallel instance runs with a deterministic reduction by index.
    std::vector<std::optional<InstanceResult>> slots(specs.size());
    std::vector<std::string> errors(specs.size());
    std::atomic<std::size_t> next{0};
    const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(specs.size())));
    const auto worker = [&] {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= specs.size()) return;
            const auto& spec = specs[index];
            const auto pair_it =
                std::find_if(pairs.begin(), pairs.end(),
                             [&](const FunctionPair& p) { return p.id() == spec.pair_id; });
            try {
                slots[index] = run_instance(spec, *pair_it, config.trainer, config.accuracy_per_dim);
            } catch (const std::exception& e) {
                errors[index] = e.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& thread : threads) thread.join();
    }

    std::vector<InstanceResult> results;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (slots[i]) {
            results.push_back(std::move(*slots[i]));
        } else {
            std::ostringstream id;
            id << specs[i].pair_id << "_nh" << specs[i].n_h << "_nl" << specs[i].n_l;
            outcome.failures.push_back(id.str() + ": " + errors[i]);
        }
    }
    outcome.instances_run = static_cast<int>(results.size());
    outcome.instances_failed = static_cast<int>(outcome.failures.size());

    TransformSet transforms;
    const MetadataTable metadata = assemble_metadata(results, &transforms);

    outcome.metadata_path = (fs::path(config.out_dir) / "metadata.csv").string();
    {
        std::ofstream out(outcome.metadata_path, std::ios::binary);
        save_metadata_csv(metadata, out);
    }
    outcome.transforms_path = (fs::path(config.out_dir) / "transforms.json").string();
    {
        std::ofstream out(outcome.transforms_path, std::ios::binary);
        save_transforms(transforms, out);
    }

    // Filtered suite.
    outcome.filtered_path = (fs::path(config.out_dir) / "filtered.csv").string();
    if (config.filter_mode != "off" && metadata.rows.size() >= 2) {
        std::vector<std::string> dropped;
        const std::vector<InstanceMetadataRow> rows = filter_rows(metadata, &dropped);
        const double theta = config.filter_theta ? *config.filter_theta
                                                 : select_theta(rows, config.theta_grid);
        const FilterResult filtered = config.filter_mode == "critical"
                                          ? critical_set(rows, theta)
                                          : dissimilar_set(rows, theta);
        MetadataTable suite;
        suite.feature_columns = metadata.feature_columns;
        for (const auto& row : metadata.rows) {
            if (std::find(filtered.retained_ids.begin(), filtered.retained_ids.end(),
                          row.instance_id) != filtered.retained_ids.end()) {
                suite.rows.push_back(row);
            }
        }
        std::ofstream out(outcome.filtered_path, std::ios::binary);
        save_metadata_csv(suite, out);
    } else {
        std::ofstream out(outcome.filtered_path, std::ios::binary);
        save_metadata_csv(metadata, out);
    }

    // Rule decisions over raw features.
    outcome.decisions_path = (fs::path(config.out_dir) / "decisions.csv").string();
    {
        std::vector<std::string> failures;
        const auto decisions = rule_decisions(metadata, &failures);
        std::ofstream out(outcome.decisions_path, std::ios::binary);
        out << "# bifid-decisions v1\n";
        out << "instance_id,choice,rule_fired\n";
        for (const auto& [id, decision] : decisions) {
            out << id << ',' << to_string(decision.choice) << ',' << decision.rule_fired << "\n";
        }
        for (const auto& failure : failures) outcome.failures.push_back(failure);
    }

    // Manifest last: it certifies the run.
    outcome.manifest_path = (fs::path(config.out_dir) / "manifest.json").string();
    {
        nlohmann::json manifest;
        manifest["artifact"] = "bifid-run";
        manifest["version"] = 1;
        manifest["catalogue_version"] = kCatalogueVersion;
        manifest["config"] = config_to_json(config);
        manifest["config_digest"] = config_digest(config);
        manifest["instances_run"] = outcome.instances_run;
        manifest["instances_failed"] = outcome.instances_failed;
        std::ofstream out(outcome.manifest_path, std::ios::binary);
        out << manifest.dump(2) << "\n";
    }
    return outcome;
}

std::vector<std::pair<std::string, Decision>> rule_decisions(const MetadataTable& metadata,
                                                             std::vector<std::string>* failures) {
    std::vector<std::pair<std::string, Decision>> decisions;
    for (const auto& row : metadata.rows) {
        try {
            const Decision decision =
                rule_select(row.raw.at("br_h"), row.raw.at("br"), row.raw.at("lcc02d_p400"),
                            row.raw.at("lcc02d_p950"), row.raw.at("r2_lin_diff"));
            decisions.emplace_back(row.instance_id, decision);
        } catch (const Error& e) {
            if (failures) failures->push_back(row.instance_id + ": " + e.what());
        }
    }
    return decisions;
}

ReportSummary command_report(const MetadataTable& metadata,
                             const std::vector<std::pair<std::string, std::string>>& decisions) {
    ReportSummary summary;
    summary.instances = static_cast<int>(metadata.rows.size());
    if (metadata.rows.empty()) return summary;

    int good_k = 0, good_ck = 0, both_good = 0, both_bad = 0;
    for (const auto& row : metadata.rows) {
        good_k += row.good_kriging;
        good_ck += row.good_cokriging;
        both_good += row.good_kriging && row.good_cokriging ? 1 : 0;
        both_bad += !row.good_kriging && !row.good_cokriging ? 1 : 0;
    }
    const auto n = static_cast<double>(metadata.rows.size());
    summary.pr_good_kriging = good_k / n;
    summary.pr_good_cokriging = good_ck / n;
    summary.pr_both_good = both_good / n;
    summary.pr_both_bad = both_bad / n;

    if (decisions.empty()) return summary;
    summary.has_decisions = true;

    int decided = 0, correct = 0;
    int chose_k = 0, chose_k_good = 0, chose_ck = 0, chose_ck_good = 0;
    int label_k = 0, label_ck = 0;
    for (const auto& row : metadata.rows) {
        const auto it = std::find_if(decisions.begin(), decisions.end(),
                                     [&](const auto& d) { return d.first == row.instance_id; });
        if (it == decisions.end()) continue;
        ++decided;
        const bool chose_kriging = it->second == "kriging";
        const int good_bit = chose_kriging ? row.good_kriging : row.good_cokriging;
        correct += good_bit;
        label_k += row.good_kriging;
        label_ck += row.good_cokriging;
        if (chose_kriging) {
            ++chose_k;
            chose_k_good += row.good_kriging;
        } else {
            ++chose_ck;
            chose_ck_good += row.good_cokriging;
        }
    }
    if (decided == 0) {
        summary.has_decisions = false;
        return summary;
    }
    summary.selector_accuracy = static_cast<double>(correct) / decided;
    summary.precision_kriging = chose_k ? static_cast<double>(chose_k_good) / chose_k : 0.0;
    summary.precision_cokriging = chose_ck ? static_cast<double>(chose_ck_good) / chose_ck : 0.0;
    summary.recall_kriging = label_k ? static_cast<double>(chose_k_good) / label_k : 0.0;
    summary.recall_cokriging = label_ck ? static_cast<double>(chose_ck_good) / label_ck : 0.0;
    return summary;
}

}  // namespace bifi
