#include <doctest.h>

#include <atomic>
#include <sstream>
#include <thread>

#include "bifi/catalogue.hpp"
#include "bifi/errors.hpp"
#include "bifi/harness.hpp"
#include "bifi/sampling.hpp"

using namespace bifi;

namespace {

TrainerConfig fast_config() {
    TrainerConfig config;
    config.num_starts = 4;
    config.max_iterations = 60;
    return config;
}

InstanceSpec forrester_spec(int n_h, int n_l, int reps, std::uint64_t seed) {
    InstanceSpec spec;
    spec.pair_id = "forrester";
    spec.n_h = n_h;
    spec.n_l = n_l;
    spec.repetitions = reps;
    spec.master_seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("the budget grid has 30 combinations, all nested") {
    for (int d : {1, 2, 3}) {
        const auto grid = paper_budget_grid(d);
        CHECK(grid.size() == 30);
        for (const auto& [n_h, n_l] : grid) {
            CHECK(n_h <= n_l);
            CHECK(n_h % (2 * d) == 0);
            CHECK(n_l % (4 * d) == 0);
            CHECK(n_h >= 2 * d);
            CHECK(n_l <= 20 * d);
        }
    }
}

TEST_CASE("the goodness label is a strict threshold") {
    CHECK(binary_label(0.51));
    CHECK(!binary_label(0.5));
    CHECK(!binary_label(0.49));
}

TEST_CASE("run_instance is deterministic end to end") {
    const FunctionPair pair = literature_pair("forrester");
    const InstanceSpec spec = forrester_spec(4, 8, 6, 42);
    const InstanceResult a = run_instance(spec, pair, fast_config(), 100);
    const InstanceResult b = run_instance(spec, pair, fast_config(), 100);
    CHECK(a.kriging_accuracy == b.kriging_accuracy);
    CHECK(a.cokriging_accuracy == b.cokriging_accuracy);
    CHECK(a.p_kriging == b.p_kriging);
    CHECK(a.p_cokriging == b.p_cokriging);
    CHECK(a.raw_features.values == b.raw_features.values);
    CHECK(a.kriging_accuracy.size() == a.cokriging_accuracy.size());
    CHECK(a.good_kriging == binary_label(a.p_kriging));
    CHECK(a.good_cokriging == binary_label(a.p_cokriging));
}

TEST_CASE("a single repetition cannot claim goodness") {
    const FunctionPair pair = literature_pair("forrester");
    const InstanceSpec spec = forrester_spec(3, 6, 1, 9);
    const InstanceResult result = run_instance(spec, pair, fast_config(), 100);
    CHECK(result.low_power);
    CHECK(result.p_kriging < 0.5);
    CHECK(result.p_cokriging < 0.5);
    CHECK(!result.good_kriging);
    CHECK(!result.good_cokriging);
}

TEST_CASE("an identical-source pair with generous low budget favours cokriging") {
    const FunctionPair forrester = literature_pair("forrester");
    const FunctionPair identical(
        "identical", forrester.domain(), [&](const Point& x) { return forrester.high(x); },
        [&](const Point& x) { return forrester.high(x); }, SourceTag::literature);
    InstanceSpec spec;
    spec.pair_id = "identical";
    spec.n_h = 3;
    spec.n_l = 12;
    spec.repetitions = 10;
    spec.master_seed = 7;
    const InstanceResult result = run_instance(spec, identical, fast_config(), 200);
    CHECK(result.good_cokriging);
}

TEST_CASE("spec validation") {
    const FunctionPair pair = literature_pair("forrester");
    InstanceSpec wrong_pair = forrester_spec(4, 8, 2, 0);
    wrong_pair.pair_id = "nope";
    CHECK_THROWS_AS(run_instance(wrong_pair, pair, fast_config()), ConfigError);
    CHECK_THROWS_AS(run_instance(forrester_spec(9, 8, 2, 0), pair, fast_config()), SizeError);
    CHECK_THROWS_AS(run_instance(forrester_spec(4, 8, 0, 0), pair, fast_config()), SizeError);
}

TEST_CASE("metadata assembly and csv round-trip") {
    const FunctionPair pair = literature_pair("forrester");
    std::vector<InstanceResult> results;
    for (const auto& [n_h, n_l] : std::vector<std::pair<int, int>>{{3, 6}, {4, 8}, {6, 12}}) {
        results.push_back(run_instance(forrester_spec(n_h, n_l, 6, 13), pair, fast_config(), 100));
    }
    TransformSet transforms;
    const MetadataTable table = assemble_metadata(results, &transforms);
    CHECK(table.rows.size() == 3);
    CHECK(table.feature_columns == feature_ids());
    for (std::size_t i = 0; i < results.size(); ++i) {
        CHECK(table.rows[i].good_kriging == (results[i].good_kriging ? 1 : 0));
        CHECK(table.rows[i].good_cokriging == (results[i].good_cokriging ? 1 : 0));
        CHECK(table.rows[i].n_h == results[i].spec.n_h);
    }

    std::stringstream buffer;
    save_metadata_csv(table, buffer);
    const MetadataTable loaded = load_metadata_csv(buffer);
    std::stringstream buffer2;
    save_metadata_csv(loaded, buffer2);
    CHECK(buffer.str() == buffer2.str());

    // Duplicate instances cannot merge.
    std::vector<InstanceResult> duplicated = {results[0], results[0]};
    CHECK_THROWS_AS(assemble_metadata(duplicated), SchemaError);
}

TEST_CASE("empty metadata saves as a header-only table") {
    const MetadataTable table = assemble_metadata({});
    std::stringstream buffer;
    save_metadata_csv(table, buffer);
    const MetadataTable loaded = load_metadata_csv(buffer);
    CHECK(loaded.rows.empty());
    CHECK(loaded.feature_columns == feature_ids());

    std::stringstream junk("oops");
    CHECK_THROWS_AS(load_metadata_csv(junk), SchemaError);
}

TEST_CASE("a constant expensive source degenerates every repetition") {
    const FunctionPair flat(
        "flat", Hypercube::unit(1), [](const Point&) { return 3.0; },
        [](const Point& x) { return x[0]; }, SourceTag::literature);
    InstanceSpec spec;
    spec.pair_id = "flat";
    spec.n_h = 4;
    spec.n_l = 8;
    spec.repetitions = 8;
    spec.master_seed = 5;
    const InstanceResult result = run_instance(spec, flat, fast_config(), 100);
    // Constant models have no defined accuracy correlation.
    CHECK(result.degenerate_repetitions == 8);
    CHECK(result.kriging_accuracy.empty());
    CHECK(result.low_power);
    CHECK(!result.good_kriging);
    CHECK(!result.good_cokriging);
    // Features still accumulate: they depend only on the sampled data.
    CHECK(result.raw_features.has("b_h"));
    CHECK(result.raw_features.has("r2_lin_diff"));
}

TEST_CASE("pairs and trained models are safe to evaluate concurrently") {
    const FunctionPair pair = literature_pair("currin");
    const SamplingPlan plan = optimize_plan(lhs_plan(16, 2, 3));
    const NestedDesign design = nested_subset(plan, 8, 3);
    std::vector<double> y;
    const auto high_unit = design.high_points();
    for (const auto& u : high_unit) y.push_back(pair.high(pair.domain().from_unit(u)));
    const KrigingModel model = KrigingModel::fit(high_unit, y, fast_config(), 2);

    const Point probe = {0.37, 0.81};
    const double expected_pair = pair.high(probe);
    const double expected_mean = model.predict(probe).mean;
    std::vector<std::thread> threads;
    std::atomic<int> mismatches{0};
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 500; ++i) {
                if (pair.high(probe) != expected_pair) ++mismatches;
                if (model.predict(probe).mean != expected_mean) ++mismatches;
            }
        });
    }
    for (auto& thread : threads) thread.join();
    CHECK(mismatches == 0);
}
