// bifid: bi-fidelity surrogate benchmarking pipeline.
//
// Subcommands: pairs list, plan, fit, run, features, filter, project,
// select, report. Exit codes: 0 success, 1 configuration error, 2 partial
// per-instance failures.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bifi/accuracy.hpp"
#include "bifi/catalogue.hpp"
#include "bifi/cokriging.hpp"
#include "bifi/csv.hpp"
#include "bifi/errors.hpp"
#include "bifi/filtering.hpp"
#include "bifi/harness.hpp"
#include "bifi/pipeline.hpp"
#include "bifi/rng.hpp"
#include "bifi/sampling.hpp"
#include "bifi/selector.hpp"
#include "bifi/transforms.hpp"

namespace {

using namespace bifi;

std::optional<std::uint64_t> env_seed_override() {
    const char* raw = std::getenv("BIFID_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    return std::stoull(raw);
}

int cmd_pairs_list() {
    std::cout << "id,d,source\n";
    for (const auto& pair : literature_pairs()) {
        std::cout << pair.id() << ',' << pair.dim() << ',' << to_string(pair.source_tag()) << "\n";
    }
    return 0;
}

int cmd_plan(int n_low, int n_high, int dim, std::uint64_t seed, const std::string& out_path) {
    const SamplingPlan plan = optimize_plan(lhs_plan(n_low, dim, seed));
    const NestedDesign design = nested_subset(plan, n_high, seed);
    if (out_path.empty()) {
        save_design(design, std::cout);
    } else {
        save_design_file(design, out_path);
        std::cerr << "wrote " << out_path << " (min distance " << min_pairwise_distance(design.plan)
                  << ")\n";
    }
    return 0;
}

int cmd_fit(const std::string& model_kind, const std::string& pair_id,
            const std::string& design_path, std::uint64_t seed, const std::string& out_path) {
    const FunctionPair pair = literature_pair(pair_id);
    const int d = static_cast<int>(pair.dim());
    const NestedDesign design = load_design_file(design_path);
    if (design.plan.dim() != d) throw ConfigError("design dimension does not match the pair");

    const std::vector<Point> low_unit = design.low_points();
    const std::vector<Point> high_unit = design.high_points();
    std::vector<double> y_low, y_high;
    for (const auto& u : low_unit) y_low.push_back(pair.low(pair.domain().from_unit(u)));
    for (const auto& u : high_unit) y_high.push_back(pair.high(pair.domain().from_unit(u)));

    TrainerConfig config;
    std::ostringstream buffer;
    if (model_kind == "kriging") {
        KrigingModel model = KrigingModel::fit(high_unit, y_high, config, seed);
        model.save(buffer);
    } else {
        CoKrigingModel model = CoKrigingModel::fit(high_unit, y_high, low_unit, y_low, config, seed);
        model.save(buffer);
    }
    if (out_path.empty()) {
        std::cout << buffer.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << buffer.str();
        std::cerr << "wrote " << out_path << "\n";
    }
    return 0;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_run_config(in);
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& pair_ids,
            const std::string& grid, int reps, std::uint64_t seed, bool seed_given,
            const std::string& out_dir, int jobs) {
    RunConfig config;
    if (!config_path.empty()) {
        config = load_config_file(config_path);
    } else {
        config.pair_ids = pair_ids;
        config.paper_grid = grid == "paper";
        if (!config.paper_grid) {
            // custom grid: "2:4,2:8,..." as multiples of d
            for (const auto& token : CLI::detail::split(grid, ',')) {
                const auto sep = token.find(':');
                if (sep == std::string::npos) throw ConfigError("bad budget token: " + token);
                config.budget_multipliers.emplace_back(std::stoi(token.substr(0, sep)),
                                                       std::stoi(token.substr(sep + 1)));
            }
        }
        config.repetitions = reps;
        config.out_dir = out_dir;
        config.jobs = jobs;
    }
    if (seed_given) config.master_seed = seed;
    if (const auto override_seed = env_seed_override()) config.master_seed = *override_seed;

    const PipelineOutcome outcome = command_pipeline(config);
    std::cerr << "instances run: " << outcome.instances_run
              << ", failed: " << outcome.instances_failed << "\n";
    for (const auto& failure : outcome.failures) std::cerr << "  " << failure << "\n";
    std::cerr << "metadata: " << outcome.metadata_path << "\n";
    return outcome.failures.empty() ? 0 : 2;
}

int cmd_features(const std::string& pair_id, int n_high, int n_low, int reps, std::uint64_t seed,
                 const std::string& out_path) {
    const FunctionPair pair = literature_pair(pair_id);
    InstanceSpec spec;
    spec.pair_id = pair_id;
    spec.n_h = n_high;
    spec.n_l = n_low;
    spec.repetitions = reps;
    spec.master_seed = env_seed_override().value_or(seed);

    // Feature extraction only: reuse the harness data path without training.
    const int d = static_cast<int>(pair.dim());
    std::vector<FeatureVector> reps_features;
    for (int rep = 0; rep < reps; ++rep) {
        const auto k = static_cast<std::uint64_t>(rep);
        const SamplingPlan plan =
            optimize_plan(lhs_plan(n_low, d, derive_seed(spec.master_seed, k, 1)));
        const NestedDesign design = nested_subset(plan, n_high, derive_seed(spec.master_seed, k, 2));
        std::vector<double> y_low, y_high, y_low_at_high;
        for (const auto& u : design.low_points()) y_low.push_back(pair.low(pair.domain().from_unit(u)));
        const auto high_unit = design.high_points();
        for (std::size_t i = 0; i < high_unit.size(); ++i) {
            y_high.push_back(pair.high(pair.domain().from_unit(high_unit[i])));
            y_low_at_high.push_back(y_low[static_cast<std::size_t>(design.subset[i])]);
        }
        reps_features.push_back(repetition_features(high_unit, y_low_at_high, y_high, n_low));
    }
    std::map<std::string, int> counts;
    const FeatureVector averaged = sample_feature_vector(reps_features, &counts);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        out = &file;
    }
    // Wide table: feature ids as the header, one averaged row per instance.
    const auto ids = feature_ids();
    std::vector<std::string> header = {"instance_id"};
    header.insert(header.end(), ids.begin(), ids.end());
    *out << join_csv(header) << "\n";
    std::vector<std::string> row = {pair_id + "_nh" + std::to_string(n_high) + "_nl" +
                                    std::to_string(n_low)};
    for (const auto& id : ids) {
        row.push_back(averaged.has(id) ? format_double(averaged.at(id)) : std::string());
    }
    *out << join_csv(row) << "\n";
    for (const auto& id : ids) {
        if (!counts.count(id) || counts.at(id) < reps) {
            std::cerr << id << ": defined in " << (counts.count(id) ? counts.at(id) : 0) << "/"
                      << reps << " repetitions\n";
        }
    }
    return 0;
}

MetadataTable load_metadata_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open metadata file " + path);
    return load_metadata_csv(in);
}

int cmd_filter(const std::string& metadata_path, const std::string& theta_arg,
               const std::string& mode, const std::string& out_path) {
    const MetadataTable metadata = load_metadata_file(metadata_path);
    std::vector<std::string> dropped;
    std::vector<InstanceMetadataRow> rows;
    for (const auto& id : metadata.feature_columns) {
        bool complete = true;
        for (const auto& row : metadata.rows) complete = complete && row.transformed.has(id);
        if (!complete) dropped.push_back(id);
    }
    for (const auto& row : metadata.rows) {
        InstanceMetadataRow out;
        out.instance_id = row.instance_id;
        for (const auto& id : metadata.feature_columns) {
            if (std::find(dropped.begin(), dropped.end(), id) == dropped.end()) {
                out.features.push_back(row.transformed.at(id));
            }
        }
        out.performance = {row.good_kriging, row.good_cokriging};
        out.priority_tier = row.source == "literature" ? 0 : 1;
        rows.push_back(std::move(out));
    }
    if (!dropped.empty()) {
        std::cerr << "ignoring incomplete feature columns:";
        for (const auto& id : dropped) std::cerr << ' ' << id;
        std::cerr << "\n";
    }

    double theta = 0.0;
    if (theta_arg == "auto") {
        theta = select_theta(rows, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
    } else {
        std::size_t consumed = 0;
        try {
            theta = std::stod(theta_arg, &consumed);
        } catch (const std::exception&) {
            consumed = std::string::npos;
        }
        if (consumed != theta_arg.size() || theta < 0.0) {
            throw ConfigError("--theta must be 'auto' or a nonnegative number, got '" + theta_arg +
                              "'");
        }
    }
    const FilterResult result = mode == "critical" ? critical_set(rows, theta)
                                                   : dissimilar_set(rows, theta);
    std::cerr << "theta " << theta << ": retained " << result.retained_ids.size() << " of "
              << rows.size() << " (dissimilar " << result.dissimilar_count << ", violations "
              << result.violation_count << ", uniformity " << result.uniformity << ")\n";

    MetadataTable suite;
    suite.feature_columns = metadata.feature_columns;
    for (const auto& row : metadata.rows) {
        if (std::find(result.retained_ids.begin(), result.retained_ids.end(), row.instance_id) !=
            result.retained_ids.end()) {
            suite.rows.push_back(row);
        }
    }
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        out = &file;
    }
    save_metadata_csv(suite, *out);
    return 0;
}

/// Projection inputs from a metadata row (transformed space). The two
/// landscape slots this toolkit does not compute are zero-filled.
std::optional<std::vector<double>> projection_inputs(const MetadataRow& row) {
    const char* needed[] = {"br",    "lcc02_sd",    "lcc02d_p400", "lcc02d_p950",
                            "rrmse", "r2_lin_diff", "r2_lini_diff"};
    for (const char* id : needed) {
        if (!row.transformed.has(id)) return std::nullopt;
    }
    return std::vector<double>{row.transformed.at("br"),
                               row.transformed.at("lcc02_sd"),
                               row.transformed.at("lcc02d_p400"),
                               row.transformed.at("lcc02d_p950"),
                               row.transformed.at("rrmse"),
                               0.0,
                               0.0,
                               row.transformed.at("r2_lin_diff"),
                               row.transformed.at("r2_lini_diff")};
}

int cmd_project(const std::string& metadata_path, const std::string& out_path) {
    const MetadataTable metadata = load_metadata_file(metadata_path);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        out = &file;
    }
    *out << "instance_id,z1,z2,good_kriging,good_cokriging\n";
    int skipped = 0;
    for (const auto& row : metadata.rows) {
        const auto inputs = projection_inputs(row);
        if (!inputs) {
            ++skipped;
            continue;
        }
        const auto z = project_2d(*inputs);
        *out << row.instance_id << ',' << format_double(z[0]) << ',' << format_double(z[1]) << ','
             << row.good_kriging << ',' << row.good_cokriging << "\n";
    }
    if (skipped) std::cerr << "skipped " << skipped << " rows with missing projection inputs\n";
    return 0;
}

int cmd_select(const std::string& mode, const std::string& metadata_path,
               const std::string& out_path, std::uint64_t seed) {
    const MetadataTable metadata = load_metadata_file(metadata_path);
    std::vector<std::pair<std::string, std::string>> choices;
    std::vector<std::string> failures;

    if (mode == "rules") {
        for (const auto& [id, decision] : rule_decisions(metadata, &failures)) {
            choices.emplace_back(id, std::string(to_string(decision.choice)) + "," +
                                         decision.rule_fired);
        }
    } else if (mode == "cc-baseline") {
        for (const auto& row : metadata.rows) {
            try {
                const Decision decision = cc_baseline_select(row.raw.at("cc"));
                choices.emplace_back(row.instance_id, std::string(to_string(decision.choice)) +
                                                          "," + decision.rule_fired);
            } catch (const Error& e) {
                failures.push_back(row.instance_id + ": " + e.what());
            }
        }
    } else {  // classifier
        std::vector<LabelledPoint> training;
        std::vector<std::pair<std::string, std::array<double, 2>>> projected;
        for (const auto& row : metadata.rows) {
            const auto inputs = projection_inputs(row);
            if (!inputs) {
                failures.push_back(row.instance_id + ": missing projection inputs");
                continue;
            }
            const auto z = project_2d(*inputs);
            projected.emplace_back(row.instance_id, z);
            // Prefer the cheap source only when it is the sole good option.
            const ModelChoice label = row.good_cokriging == 1 && row.good_kriging == 0
                                          ? ModelChoice::cokriging
                                          : ModelChoice::kriging;
            training.push_back({z, label});
        }
        const ProjectedClassifier classifier = train_classifier(training, seed);
        std::cerr << "resubstitution accuracy: " << classifier.resubstitution_accuracy << "\n";
        for (const auto& [id, z] : projected) {
            choices.emplace_back(id, std::string(to_string(classifier.classify(z))) + ",classifier");
        }
    }

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        out = &file;
    }
    *out << "# bifid-decisions v1\n";
    *out << "instance_id,choice,rule_fired\n";
    for (const auto& [id, rest] : choices) *out << id << ',' << rest << "\n";
    for (const auto& failure : failures) std::cerr << failure << "\n";
    return failures.empty() ? 0 : 2;
}

std::vector<std::pair<std::string, std::string>> load_decisions_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open decisions file " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# bifid-decisions v1", 0) != 0) {
        throw SchemaError("not a bifid-decisions v1 file");
    }
    std::getline(in, line);  // header
    std::vector<std::pair<std::string, std::string>> decisions;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 2) throw SchemaError("malformed decisions row");
        decisions.emplace_back(fields[0], fields[1]);
    }
    return decisions;
}

int cmd_report(const std::string& metadata_path, const std::string& decisions_path) {
    const MetadataTable metadata = load_metadata_file(metadata_path);
    std::vector<std::pair<std::string, std::string>> decisions;
    if (!decisions_path.empty()) decisions = load_decisions_file(decisions_path);
    const ReportSummary summary = command_report(metadata, decisions);

    std::cout << "instances: " << summary.instances << "\n";
    if (summary.instances == 0) return 0;
    std::cout << "algorithm,pr_good,precision,recall\n";
    std::cout << "kriging," << format_double(summary.pr_good_kriging);
    if (summary.has_decisions) {
        std::cout << ',' << format_double(summary.precision_kriging) << ','
                  << format_double(summary.recall_kriging);
    } else {
        std::cout << ",,";
    }
    std::cout << "\n";
    std::cout << "cokriging," << format_double(summary.pr_good_cokriging);
    if (summary.has_decisions) {
        std::cout << ',' << format_double(summary.precision_cokriging) << ','
                  << format_double(summary.recall_cokriging);
    } else {
        std::cout << ",,";
    }
    std::cout << "\n";
    std::cout << "both good: " << format_double(summary.pr_both_good)
              << ", both bad: " << format_double(summary.pr_both_bad) << "\n";
    if (summary.has_decisions) {
        std::cout << "selector accuracy: " << format_double(summary.selector_accuracy) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bi-fidelity surrogate benchmarking pipeline"};
    app.require_subcommand(1);

    // pairs list
    auto* pairs = app.add_subcommand("pairs", "catalogue queries");
    pairs->require_subcommand(1);
    pairs->add_subcommand("list", "list the function-pair catalogue");

    // plan
    auto* plan = app.add_subcommand("plan", "build an optimized nested sampling plan");
    int plan_n_low = 8, plan_n_high = 4, plan_dim = 1;
    std::uint64_t plan_seed = 0;
    std::string plan_out;
    plan->add_option("--n-low", plan_n_low, "low-fidelity sample count")->required();
    plan->add_option("--n-high", plan_n_high, "high-fidelity subset size")->required();
    plan->add_option("--dim", plan_dim, "dimension")->required();
    plan->add_option("--seed", plan_seed, "seed");
    plan->add_option("--out", plan_out, "output file (default: stdout)");

    // fit
    auto* fit = app.add_subcommand("fit", "train a surrogate on a pair and design");
    std::string fit_model = "kriging", fit_pair, fit_design, fit_out;
    std::uint64_t fit_seed = 0;
    fit->add_option("--model", fit_model, "kriging or cokriging")
        ->check(CLI::IsMember({"kriging", "cokriging"}));
    fit->add_option("--pair", fit_pair, "catalogue pair id")->required();
    fit->add_option("--design", fit_design, "plan file from `bifid plan`")->required();
    fit->add_option("--seed", fit_seed, "trainer seed");
    fit->add_option("--out", fit_out, "output model file (default: stdout)");

    // run
    auto* run = app.add_subcommand("run", "run the instance pipeline");
    std::string run_config, run_grid = "paper", run_out_dir = ".";
    std::vector<std::string> run_pairs;
    int run_reps = 40, run_jobs = 1;
    std::uint64_t run_seed = 0;
    run->add_option("--config", run_config, "JSON run config (overrides other flags)");
    run->add_option("--pairs", run_pairs, "pair ids (default: whole catalogue)");
    run->add_option("--grid", run_grid, "paper, or nh:nl list in multiples of d (2:8,4:8,...)");
    run->add_option("--reps", run_reps, "repetitions per instance");
    auto* run_seed_opt = run->add_option("--seed", run_seed, "master seed");
    run->add_option("--out", run_out_dir, "output directory");
    run->add_option("--jobs", run_jobs, "parallel instance workers");

    // features
    auto* features = app.add_subcommand("features", "sample features for one instance");
    std::string feat_pair, feat_out;
    int feat_n_high = 0, feat_n_low = 0, feat_reps = 40;
    std::uint64_t feat_seed = 0;
    features->add_option("--pair", feat_pair, "catalogue pair id")->required();
    features->add_option("--n-high", feat_n_high, "n_h")->required();
    features->add_option("--n-low", feat_n_low, "n_l")->required();
    features->add_option("--reps", feat_reps, "repetitions");
    features->add_option("--seed", feat_seed, "master seed");
    features->add_option("--out", feat_out, "output CSV (default: stdout)");

    // filter
    auto* filter = app.add_subcommand("filter", "filter a metadata table");
    std::string filter_metadata, filter_theta = "auto", filter_mode = "critical", filter_out;
    filter->add_option("--metadata", filter_metadata, "metadata CSV")->required();
    filter->add_option("--theta", filter_theta, "similarity threshold or 'auto'");
    filter->add_option("--mode", filter_mode, "dissimilar or critical")
        ->check(CLI::IsMember({"dissimilar", "critical"}));
    filter->add_option("--out", filter_out, "output CSV (default: stdout)");

    // project
    auto* project = app.add_subcommand("project", "project instances onto (z1, z2)");
    std::string project_metadata, project_out;
    project->add_option("--metadata", project_metadata, "metadata CSV")->required();
    project->add_option("--out", project_out, "output CSV (default: stdout)");

    // select
    auto* select = app.add_subcommand("select", "choose a model per instance");
    std::string select_mode = "rules", select_metadata, select_out;
    std::uint64_t select_seed = 0;
    select->add_option("--mode", select_mode, "rules, cc-baseline or classifier")
        ->check(CLI::IsMember({"rules", "cc-baseline", "classifier"}));
    select->add_option("--metadata", select_metadata, "metadata CSV")->required();
    select->add_option("--seed", select_seed, "classifier seed");
    select->add_option("--out", select_out, "output decisions CSV (default: stdout)");

    // report
    auto* report = app.add_subcommand("report", "summarize labels and selector quality");
    std::string report_metadata, report_decisions;
    report->add_option("--metadata", report_metadata, "metadata CSV")->required();
    report->add_option("--decisions", report_decisions, "decisions CSV from `bifid select`");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pairs->parsed()) return cmd_pairs_list();
        if (plan->parsed()) return cmd_plan(plan_n_low, plan_n_high, plan_dim, plan_seed, plan_out);
        if (fit->parsed()) return cmd_fit(fit_model, fit_pair, fit_design, fit_seed, fit_out);
        if (run->parsed()) {
            return cmd_run(run_config, run_pairs, run_grid, run_reps, run_seed,
                           run_seed_opt->count() > 0, run_out_dir, run_jobs);
        }
        if (features->parsed()) {
            return cmd_features(feat_pair, feat_n_high, feat_n_low, feat_reps, feat_seed, feat_out);
        }
        if (filter->parsed()) return cmd_filter(filter_metadata, filter_theta, filter_mode, filter_out);
        if (project->parsed()) return cmd_project(project_metadata, project_out);
        if (select->parsed()) return cmd_select(select_mode, select_metadata, select_out, select_seed);
        if (report->parsed()) return cmd_report(report_metadata, report_decisions);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
