// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion also enforces its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bifi/accuracy.hpp"
#include "bifi/catalogue.hpp"
#include "bifi/cokriging.hpp"
#include "bifi/disturbance.hpp"
#include "bifi/features.hpp"
#include "bifi/filtering.hpp"
#include "bifi/harness.hpp"
#include "bifi/kriging.hpp"
#include "bifi/pipeline.hpp"
#include "bifi/rng.hpp"
#include "bifi/sampling.hpp"
#include "bifi/selector.hpp"
#include "bifi/wilcoxon.hpp"
#include "oracles.hpp"

using namespace bifi;

namespace {

struct Criterion {
    int number;
    std::string description;
    double time_limit_seconds;
    std::function<bool(std::string&)> run;
};

bool check(bool condition, const std::string& message, std::string& detail) {
    if (!condition && detail.empty()) detail = message;
    return condition;
}

// ---------------------------------------------------------------- criterion 1

bool interpolation_suite(std::string& detail) {
    TrainerConfig config;
    config.num_starts = 5;
    config.max_iterations = 80;

    const char* pair_by_dim[] = {"forrester", "currin", "friedman5"};
    bool ok = true;
    int models = 0;
    for (int index = 0; index < 25; ++index) {
        const int which = index % 3;
        const FunctionPair pair = literature_pair(pair_by_dim[which]);
        const int d = static_cast<int>(pair.dim());
        const std::uint64_t seed = 1000 + index;
        const int n_h = 5 + index % 7;
        const int n_l = 3 * n_h;
        const SamplingPlan plan = optimize_plan(lhs_plan(n_l, d, seed));
        const NestedDesign design = nested_subset(plan, n_h, seed);
        std::vector<double> y_low, y_high;
        for (const auto& u : design.low_points()) {
            y_low.push_back(pair.low(pair.domain().from_unit(u)));
        }
        const auto high_unit = design.high_points();
        for (const auto& u : high_unit) y_high.push_back(pair.high(pair.domain().from_unit(u)));
        double lo = y_high[0], hi = y_high[0];
        for (double v : y_high) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double tolerance = 1e-6 * std::max(hi - lo, 1e-12);

        const KrigingModel kriging = KrigingModel::fit(high_unit, y_high, config, seed);
        const CoKrigingModel cokriging =
            CoKrigingModel::fit(high_unit, y_high, design.low_points(), y_low, config, seed + 1);
        models += 2;
        for (std::size_t i = 0; i < high_unit.size(); ++i) {
            ok &= check(std::abs(kriging.predict(high_unit[i]).mean - y_high[i]) <= tolerance,
                        "kriging misses a training point on " + pair.id(), detail);
            ok &= check(std::abs(cokriging.predict(high_unit[i]).mean - y_high[i]) <= tolerance,
                        "cokriging misses a training point on " + pair.id(), detail);
        }
    }
    ok &= check(models == 50, "expected 50 models", detail);
    return ok;
}

// ---------------------------------------------------------------- criterion 2

bool feature_oracles(std::string& detail) {
    bool ok = true;
    Rng rng(777);

    for (int fixture = 0; fixture < 20; ++fixture) {
        const std::size_t n = 12 + fixture % 9;
        std::vector<double> y_low(n), y_high(n), weights(n);
        for (std::size_t i = 0; i < n; ++i) {
            y_low[i] = rng.uniform(-4.0, 4.0);
            y_high[i] = rng.uniform(-4.0, 4.0);
            weights[i] = rng.uniform(0.0, 2.0);
        }
        ok &= check(std::abs(cc(y_low, y_high) - oracle::squared_pearson(y_low, y_high)) < 1e-10,
                    "cc oracle mismatch", detail);
        ok &= check(std::abs(rmse(y_low, y_high) - oracle::rmse(y_low, y_high)) < 1e-10,
                    "rmse oracle mismatch", detail);
        ok &= check(std::abs(rrmse(y_low, y_high) - oracle::rrmse(y_low, y_high)) < 1e-10,
                    "rrmse oracle mismatch", detail);
        ok &= check(std::abs(wcc(y_low, y_high, weights) - oracle::wcc(y_low, y_high, weights)) <
                        1e-10,
                    "wcc oracle mismatch", detail);
    }

    // Local correlation at a centre is a WCC with compact linear weights.
    for (int fixture = 0; fixture < 20; ++fixture) {
        const std::size_t n = 14;
        const std::size_t d = 1 + fixture % 3;
        std::vector<Point> points(n, Point(d));
        std::vector<double> y_low(n), y_high(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& c : points[i]) c = rng.uniform();
            y_low[i] = rng.uniform(-2.0, 2.0);
            y_high[i] = rng.uniform(-2.0, 2.0);
        }
        const double r = 0.5;
        const Point centre = points[fixture % n];
        std::vector<double> weights(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double dist = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                dist += (centre[k] - points[i][k]) * (centre[k] - points[i][k]);
            }
            weights[i] = std::max(0.0, 1.0 - std::sqrt(dist) / (r * std::sqrt(double(d))));
        }
        const auto value = lcc_at(points, y_low, y_high, centre, r);
        if (value) {
            ok &= check(std::abs(*value - oracle::wcc(y_low, y_high, weights)) < 1e-10,
                        "lcc_at oracle mismatch", detail);
        }
        // Family statistics summarize the defined per-centre values.
        const LccSummary summary = lcc_features(points, y_low, y_high, r);
        std::vector<double> defined;
        for (const auto& c : points) {
            if (auto v = lcc_at(points, y_low, y_high, c, r)) defined.push_back(*v);
        }
        if (!defined.empty()) {
            ok &= check(std::abs(*summary.mean - oracle::mean(defined)) < 1e-10,
                        "lcc mean mismatch", detail);
            for (const auto& [p, share] : summary.share_at_least) {
                double cnt = 0.0;
                for (double v : defined) cnt += v >= p ? 1.0 : 0.0;
                ok &= check(std::abs(share - cnt / defined.size()) < 1e-10,
                            "lcc share mismatch", detail);
            }
        }
    }

    // Adjusted R-squared against the normal-equations oracle.
    for (int fixture = 0; fixture < 20; ++fixture) {
        const std::size_t n = 14 + fixture % 6;
        const std::size_t d = 1 + fixture % 2;
        std::vector<Point> points(n, Point(d));
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& c : points[i]) c = rng.uniform();
            y[i] = rng.uniform(-1.0, 1.0) + 2.0 * points[i][0];
        }
        for (bool interactions : {false, true}) {
            std::vector<std::vector<double>> design;
            for (const auto& p : points) {
                std::vector<double> row = {1.0};
                for (double c : p) row.push_back(c);
                if (interactions) {
                    for (std::size_t a = 0; a < d; ++a) {
                        for (std::size_t b = a + 1; b < d; ++b) row.push_back(p[a] * p[b]);
                    }
                }
                design.push_back(row);
            }
            const AdjustedR2 fit = adjusted_r2_linear(points, y, interactions);
            ok &= check(!fit.saturated &&
                            std::abs(fit.value - oracle::adjusted_r2(design, y)) < 1e-10,
                        "adjusted r2 oracle mismatch", detail);
        }
    }

    // Uniformity of nearest-neighbour distances.
    for (int fixture = 0; fixture < 20; ++fixture) {
        std::vector<std::vector<double>> rows(8 + fixture % 10);
        for (auto& row : rows) {
            row = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        }
        ok &= check(std::abs(uniformity(rows) - oracle::nn_uniformity(rows)) < 1e-10,
                    "uniformity oracle mismatch", detail);
    }

    // Wilcoxon signed-rank, both code paths.
    for (int fixture = 0; fixture < 20; ++fixture) {
        std::vector<double> large(40), small(12);
        for (auto& v : large) v = rng.normal() * 0.1 + 0.005;
        for (auto& v : small) v = rng.uniform() < 0.2 ? 0.0 : rng.normal();
        ok &= check(std::abs(wilcoxon_signed_rank_less_p(large) -
                             oracle::wilcoxon_less_approx(large)) < 1e-8,
                    "wilcoxon approximate path mismatch", detail);
        ok &= check(std::abs(wilcoxon_signed_rank_less_p(small) -
                             oracle::wilcoxon_less_exact_enumeration(small)) < 1e-8,
                    "wilcoxon exact path mismatch", detail);
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 3

bool filtering_invariants(std::string& detail) {
    bool ok = true;
    Rng rng(4242);
    std::vector<InstanceMetadataRow> rows(200);
    for (int i = 0; i < 200; ++i) {
        rows[i].instance_id = "inst_" + std::to_string(1000 + i);
        for (int k = 0; k < 5; ++k) rows[i].features.push_back(rng.uniform(-2.0, 2.0));
        rows[i].performance = {rng.next_u64() & 1 ? 1 : 0, rng.next_u64() & 1 ? 1 : 0};
        rows[i].priority_tier = static_cast<int>(rng.below(3));
    }
    const auto find = [&](const std::string& id) -> const InstanceMetadataRow& {
        for (const auto& row : rows) {
            if (row.instance_id == id) return row;
        }
        throw std::logic_error("id not found");
    };

    std::size_t previous_size = rows.size() + 1;
    for (double theta : {0.4, 0.8, 1.2, 1.6, 2.0}) {
        const FilterResult critical = critical_set(rows, theta);
        for (std::size_t a = 0; a < critical.retained_ids.size(); ++a) {
            for (std::size_t b = a + 1; b < critical.retained_ids.size(); ++b) {
                const auto& ra = find(critical.retained_ids[a]);
                const auto& rb = find(critical.retained_ids[b]);
                double dist = 0.0;
                for (std::size_t k = 0; k < ra.features.size(); ++k) {
                    dist += (ra.features[k] - rb.features[k]) * (ra.features[k] - rb.features[k]);
                }
                ok &= check(std::sqrt(dist) > theta || ra.performance != rb.performance,
                            "critical-set pairwise property violated", detail);
            }
        }
        const std::size_t size = dissimilar_set(rows, theta).retained_ids.size();
        ok &= check(size <= previous_size, "dissimilar size increased with theta", detail);
        previous_size = size;
    }

    // Priority fixture: within-theta pair with equal labels keeps the lower tier.
    InstanceMetadataRow first, second;
    first.instance_id = "tier0";
    first.features = {0.0, 0.0};
    first.performance = {1, 0};
    first.priority_tier = 0;
    second = first;
    second.instance_id = "tier1";
    second.features = {0.05, 0.0};
    second.priority_tier = 1;
    const FilterResult filtered = critical_set({second, first}, 0.5);
    ok &= check(filtered.retained_ids == std::vector<std::string>{"tier0"},
                "priority fixture kept the wrong row", detail);
    return ok;
}

// ---------------------------------------------------------------- criterion 4

bool helpful_source_study(std::string& detail) {
    TrainerConfig config;
    config.num_starts = 5;
    config.max_iterations = 80;
    const FunctionPair pair = literature_pair("forrester");
    bool ok = true;
    for (int n_h : {2, 3, 4, 5, 6}) {
        InstanceSpec spec;
        spec.pair_id = "forrester";
        spec.n_h = n_h;
        spec.n_l = 4 * n_h;
        spec.repetitions = 40;
        spec.master_seed = 100 + n_h;
        const InstanceResult result = run_instance(spec, pair, config, 1000);
        ok &= check(result.good_cokriging,
                    "cokriging not labelled good at n_h=" + std::to_string(n_h), detail);
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 5

bool harmful_source_study(std::string& detail) {
    TrainerConfig config;
    config.num_starts = 5;
    config.max_iterations = 80;
    const FunctionPair base = literature_pair("currin");
    DisturbanceConfig cfg;
    cfg.mode = DisturbanceMode::centre_based;
    cfg.amplitude = 25.0;
    cfg.num_centres = 6;
    cfg.radius = 0.25;
    cfg.seed = 20;
    const FunctionPair pair = make_disturbance_pair(
        "harmful", base.domain(), [&](const Point& x) { return base.high(x); }, cfg);

    bool ok = true;
    int kriging_good = 0, total = 0;
    for (int budget : {8, 16, 24, 32, 40}) {  // equal budgets: n_h = n_l
        for (std::uint64_t seed : {1ull, 2ull}) {
            InstanceSpec spec;
            spec.pair_id = "harmful";
            spec.n_h = budget;
            spec.n_l = budget;
            spec.repetitions = 40;
            spec.master_seed = seed * 1000 + budget;
            const InstanceResult result = run_instance(spec, pair, config, 1000);
            ok &= check(result.raw_features.has("lcc02d_p400") &&
                            result.raw_features.at("lcc02d_p400") <= 0.7,
                        "fixture not tuned: sample lcc02d_p400 above 0.7", detail);
            kriging_good += result.good_kriging ? 1 : 0;
            ++total;
        }
    }
    ok &= check(total == 10, "expected 10 instance specs", detail);
    ok &= check(kriging_good * 4 >= total * 3,
                "kriging good on only " + std::to_string(kriging_good) + "/10", detail);
    return ok;
}

// ---------------------------------------------------------------- criterion 6

bool rule_selector_fidelity(std::string& detail) {
    bool ok = true;
    // The four published examples.
    ok &= check(rule_select(19, 0.5, 0.9, 0.9, 0.9).choice == ModelChoice::kriging,
                "high-budget example", detail);
    ok &= check(rule_select(10, 0.5, 0.9, 0.6, 0.0).choice == ModelChoice::cokriging,
                "locally-excellent example", detail);
    ok &= check(rule_select(4, 0.5, 0.8, 0.2, 0.1).choice == ModelChoice::cokriging,
                "scarce-data example", detail);
    ok &= check(rule_select(4, 1.0, 1.0, 1.0, 1.0).choice == ModelChoice::kriging,
                "equal-budget dominance example", detail);

    // Truth table across every clause boundary. Expected values computed by
    // an independent longhand reading of the clause list.
    const auto expected_choice = [](double br_h, double br, double p400, double p950, double r2) {
        if (br_h >= 18.0 || br == 1.0 || p400 <= 0.7) return ModelChoice::kriging;
        if (p950 >= 0.5 || r2 >= 0.4) return ModelChoice::cokriging;
        return br_h <= 5.0 ? ModelChoice::cokriging : ModelChoice::kriging;
    };
    int cases = 0;
    for (double br_h : {5.0, 5.1, 17.9, 18.0}) {
        for (double br : {0.99, 1.0}) {
            for (double p400 : {0.7, 0.71}) {
                for (double p950 : {0.4999, 0.5}) {
                    for (double r2 : {0.39, 0.4}) {
                        const Decision decision = rule_select(br_h, br, p400, p950, r2);
                        ok &= check(decision.choice == expected_choice(br_h, br, p400, p950, r2),
                                    "truth-table mismatch", detail);
                        ++cases;
                    }
                }
            }
        }
    }
    ok &= check(cases >= 30, "truth table too small", detail);
    return ok;
}

// ---------------------------------------------------------------- criterion 7

bool projection_fidelity(std::string& detail) {
    bool ok = true;
    for (int r = 0; r < kProjectionInputs; ++r) {
        std::vector<double> basis(kProjectionInputs, 0.0);
        basis[r] = 1.0;
        const auto z = project_2d(basis);
        ok &= check(std::abs(z[0] - projection_matrix()[r][0]) < 1e-12 &&
                        std::abs(z[1] - projection_matrix()[r][1]) < 1e-12,
                    "basis projection mismatch at row " + std::to_string(r), detail);
    }
    Rng rng(31337);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> u(kProjectionInputs), v(kProjectionInputs), w(kProjectionInputs);
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        for (int k = 0; k < kProjectionInputs; ++k) {
            u[k] = rng.uniform(-4.0, 4.0);
            v[k] = rng.uniform(-4.0, 4.0);
            w[k] = a * u[k] + b * v[k];
        }
        const auto zu = project_2d(u);
        const auto zv = project_2d(v);
        const auto zw = project_2d(w);
        ok &= check(std::abs(zw[0] - (a * zu[0] + b * zv[0])) < 1e-12 &&
                        std::abs(zw[1] - (a * zu[1] + b * zv[1])) < 1e-12,
                    "projection linearity violated", detail);
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 8

bool end_to_end_determinism(std::string& detail) {
    RunConfig config;
    config.pair_ids = {"forrester", "currin", "booth", "sixhump", "park2"};
    config.paper_grid = false;
    config.budget_multipliers = {{2, 4}, {2, 8}, {4, 8}, {4, 12}, {8, 12}, {12, 12}};
    config.repetitions = 10;
    config.master_seed = 90210;
    config.trainer.num_starts = 5;
    config.trainer.max_iterations = 80;
    config.accuracy_per_dim = 1000;
    config.jobs = 2;
    config.filter_mode = "critical";

    const std::string dir_a = "/tmp/bifid_acceptance_run_a";
    const std::string dir_b = "/tmp/bifid_acceptance_run_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);

    config.out_dir = dir_a;
    const PipelineOutcome first = command_pipeline(config);
    config.out_dir = dir_b;
    const PipelineOutcome second = command_pipeline(config);

    bool ok = check(first.instances_failed == 0 && second.instances_failed == 0,
                    "pipeline reported instance failures", detail);
    ok &= check(first.instances_run == 30, "expected 5 pairs x 6 budgets = 30 instances", detail);

    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    for (const char* name : {"metadata.csv", "transforms.json", "filtered.csv", "decisions.csv"}) {
        ok &= check(slurp(dir_a + "/" + name) == slurp(dir_b + "/" + name),
                    std::string("artifact differs between reruns: ") + name, detail);
        ok &= check(!slurp(dir_a + "/" + name).empty(), std::string("empty artifact: ") + name,
                    detail);
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "interpolation suite (50 models, d in {1,2,5})", 120.0, interpolation_suite},
        {2, "feature and statistic oracle equivalence", 60.0, feature_oracles},
        {3, "filtering invariants on 200 rows x 5 thetas", 30.0, filtering_invariants},
        {4, "helpful low fidelity: cokriging good on forrester", 600.0, helpful_source_study},
        {5, "harmful low fidelity: kriging good at equal budgets", 900.0, harmful_source_study},
        {6, "rule selector truth table", 1.0, rule_selector_fidelity},
        {7, "projection coefficients and linearity", 1.0, projection_fidelity},
        {8, "end-to-end pipeline determinism", 1200.0, end_to_end_determinism},
    };

    // Optional criterion numbers on the command line select a subset.
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (!wanted.empty() &&
            std::find(wanted.begin(), wanted.end(), criterion.number) == wanted.end()) {
            continue;
        }
        std::string detail;
        const auto start = std::chrono::steady_clock::now();
        bool passed = false;
        try {
            passed = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criterion.time_limit_seconds) {
            passed = false;
            if (detail.empty()) detail = "time limit exceeded";
        }
        std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", passed ? "PASS" : "FAIL",
                    criterion.number, criterion.description.c_str(), elapsed,
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!passed) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
