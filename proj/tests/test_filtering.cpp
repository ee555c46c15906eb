#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bifi/errors.hpp"
#include "bifi/filtering.hpp"
#include "bifi/rng.hpp"
#include "oracles.hpp"

using namespace bifi;

namespace {

double row_distance(const InstanceMetadataRow& a, const InstanceMetadataRow& b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.features.size(); ++k) {
        sum += (a.features[k] - b.features[k]) * (a.features[k] - b.features[k]);
    }
    return std::sqrt(sum);
}

// Independent re-implementation of the removal scan.
std::vector<std::string> reference_filter(std::vector<InstanceMetadataRow> rows, double theta,
                                          bool respect_labels) {
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].priority_tier != rows[b].priority_tier) {
            return rows[a].priority_tier > rows[b].priority_tier;
        }
        return rows[a].instance_id > rows[b].instance_id;
    });
    std::vector<bool> gone(rows.size(), false);
    for (std::size_t i : order) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j == i || gone[j]) continue;
            const bool close = row_distance(rows[i], rows[j]) <= theta;
            const bool same = rows[i].performance == rows[j].performance;
            if (close && (!respect_labels || same)) {
                gone[i] = true;
                break;
            }
        }
    }
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!gone[i]) kept.push_back(rows[i].instance_id);
    }
    return kept;
}

std::vector<InstanceMetadataRow> random_rows(Rng& rng, int n, int features, int bits) {
    std::vector<InstanceMetadataRow> rows(n);
    for (int i = 0; i < n; ++i) {
        rows[i].instance_id = "row_" + std::to_string(100 + i);
        for (int k = 0; k < features; ++k) rows[i].features.push_back(rng.uniform(-2.0, 2.0));
        for (int b = 0; b < bits; ++b) rows[i].performance.push_back(rng.next_u64() & 1 ? 1 : 0);
        rows[i].priority_tier = static_cast<int>(rng.below(2));
    }
    return rows;
}

const InstanceMetadataRow* find_row(const std::vector<InstanceMetadataRow>& rows,
                                    const std::string& id) {
    for (const auto& row : rows) {
        if (row.instance_id == id) return &row;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("theta zero keeps every distinct row") {
    Rng rng(1);
    const auto rows = random_rows(rng, 20, 3, 2);
    const FilterResult result = dissimilar_set(rows, 0.0);
    CHECK(result.retained_ids.size() == rows.size());
}

TEST_CASE("theta beyond the diameter keeps exactly one row") {
    Rng rng(2);
    const auto rows = random_rows(rng, 15, 3, 2);
    const FilterResult result = dissimilar_set(rows, 1e6);
    CHECK(result.retained_ids.size() == 1);
}

TEST_CASE("dissimilar set satisfies the pairwise property and matches the reference") {
    Rng rng(3);
    const auto rows = random_rows(rng, 50, 4, 2);
    const double theta = 1.0;
    const FilterResult result = dissimilar_set(rows, theta);
    CHECK(result.retained_ids == reference_filter(rows, theta, false));
    for (std::size_t a = 0; a < result.retained_ids.size(); ++a) {
        for (std::size_t b = a + 1; b < result.retained_ids.size(); ++b) {
            const auto* ra = find_row(rows, result.retained_ids[a]);
            const auto* rb = find_row(rows, result.retained_ids[b]);
            CHECK(row_distance(*ra, *rb) > theta);
        }
    }
    CHECK(result.violation_count == 0);
}

TEST_CASE("critical set keeps label-distinct neighbours") {
    Rng rng(4);
    auto rows = random_rows(rng, 30, 3, 2);

    SUBCASE("all labels distinct keeps everything") {
        // 2 bits only allow 4 distinct labels; use row index parity patterns
        // across 30 rows is impossible, so construct 4 rows.
        std::vector<InstanceMetadataRow> four(rows.begin(), rows.begin() + 4);
        const int patterns[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        for (int i = 0; i < 4; ++i) {
            four[i].performance = {patterns[i][0], patterns[i][1]};
            four[i].features = {0.0, 0.0, 0.0};  // identical features
        }
        const FilterResult result = critical_set(four, 10.0);
        CHECK(result.retained_ids.size() == 4);
    }

    SUBCASE("identical labels reduce to the dissimilar set") {
        for (auto& row : rows) row.performance = {1, 0};
        const FilterResult crit = critical_set(rows, 0.8);
        const FilterResult diss = dissimilar_set(rows, 0.8);
        CHECK(crit.retained_ids == diss.retained_ids);
    }
}

TEST_CASE("critical set pairwise property verified exhaustively on 100 rows") {
    Rng rng(5);
    const auto rows = random_rows(rng, 100, 4, 2);
    for (double theta : {0.5, 1.0, 2.0}) {
        const FilterResult result = critical_set(rows, theta);
        CHECK(result.retained_ids == reference_filter(rows, theta, true));
        for (std::size_t a = 0; a < result.retained_ids.size(); ++a) {
            for (std::size_t b = a + 1; b < result.retained_ids.size(); ++b) {
                const auto* ra = find_row(rows, result.retained_ids[a]);
                const auto* rb = find_row(rows, result.retained_ids[b]);
                const bool ok = row_distance(*ra, *rb) > theta || ra->performance != rb->performance;
                CHECK(ok);
            }
        }
    }
}

TEST_CASE("critical retains at least the dissimilar rows") {
    Rng rng(6);
    const auto rows = random_rows(rng, 60, 3, 2);
    for (double theta : {0.3, 0.8, 1.5}) {
        const FilterResult diss = dissimilar_set(rows, theta);
        const FilterResult crit = critical_set(rows, theta);
        for (const auto& id : diss.retained_ids) {
            CHECK(std::find(crit.retained_ids.begin(), crit.retained_ids.end(), id) !=
                  crit.retained_ids.end());
        }
    }
}

TEST_CASE("filtering is a fixed point on its own output") {
    Rng rng(7);
    const auto rows = random_rows(rng, 40, 3, 2);
    const FilterResult first = dissimilar_set(rows, 1.2);
    std::vector<InstanceMetadataRow> survivors;
    for (const auto& row : rows) {
        if (std::find(first.retained_ids.begin(), first.retained_ids.end(), row.instance_id) !=
            first.retained_ids.end()) {
            survivors.push_back(row);
        }
    }
    const FilterResult second = dissimilar_set(survivors, 1.2);
    CHECK(second.retained_ids == first.retained_ids);
}

TEST_CASE("retained count is non-increasing in theta") {
    Rng rng(8);
    const auto rows = random_rows(rng, 60, 3, 2);
    std::size_t previous = rows.size() + 1;
    for (double theta : {0.0, 0.2, 0.5, 1.0, 1.8, 3.0}) {
        const std::size_t size = dissimilar_set(rows, theta).retained_ids.size();
        CHECK(size <= previous);
        previous = size;
    }
}

TEST_CASE("lower tiers are kept when a within-theta pair shares labels") {
    InstanceMetadataRow keeper, loser, bystander;
    keeper.instance_id = "keeper";
    keeper.features = {0.0, 0.0};
    keeper.performance = {1, 1};
    keeper.priority_tier = 0;
    loser = keeper;
    loser.instance_id = "loser";
    loser.features = {0.1, 0.0};
    loser.priority_tier = 1;
    bystander = keeper;
    bystander.instance_id = "bystander";
    bystander.features = {5.0, 5.0};
    const FilterResult result = critical_set({loser, keeper, bystander}, 0.5);
    CHECK(std::find(result.retained_ids.begin(), result.retained_ids.end(), "keeper") !=
          result.retained_ids.end());
    CHECK(std::find(result.retained_ids.begin(), result.retained_ids.end(), "loser") ==
          result.retained_ids.end());
}

TEST_CASE("schema mismatches are rejected") {
    InstanceMetadataRow a, b;
    a.instance_id = "a";
    a.features = {1.0, 2.0};
    a.performance = {1};
    b.instance_id = "b";
    b.features = {1.0};
    b.performance = {1};
    CHECK_THROWS_AS(dissimilar_set({a, b}, 1.0), SchemaError);
    b.features = {1.0, 3.0};
    b.performance = {1, 0};
    CHECK_THROWS_AS(critical_set({a, b}, 1.0), SchemaError);
}

TEST_CASE("uniformity of equispaced and random features") {
    std::vector<std::vector<double>> line;
    for (int i = 0; i < 9; ++i) line.push_back({0.5 * i});
    CHECK(uniformity(line) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(uniformity({{0.0}, {3.0}}) == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(9);
    std::vector<std::vector<double>> cloud;
    for (int i = 0; i < 20; ++i) cloud.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    CHECK(uniformity(cloud) == doctest::Approx(oracle::nn_uniformity(cloud)).epsilon(1e-12));

    CHECK_THROWS_AS(uniformity({{1.0}}), SizeError);
}

TEST_CASE("theta selection follows the rescaled uniformity rule") {
    Rng rng(10);
    const auto rows = random_rows(rng, 40, 3, 2);

    SUBCASE("single-candidate grids select that candidate") {
        CHECK(select_theta(rows, {0.7}) == 0.7);
    }

    SUBCASE("matches an independent re-implementation") {
        const std::vector<double> grid = {0.1, 0.4, 0.8, 1.2, 1.6, 2.2};
        // Oracle: reference filter + oracle uniformity + min-max + first >= 0.5.
        std::vector<double> values;
        for (double theta : grid) {
            const auto kept = reference_filter(rows, theta, false);
            std::vector<std::vector<double>> feats;
            for (const auto& id : kept) feats.push_back(find_row(rows, id)->features);
            values.push_back(feats.size() >= 2 ? oracle::nn_uniformity(feats)
                                               : std::nan(""));
        }
        double lo = 1e300, hi = -1e300;
        for (double v : values) {
            if (!std::isnan(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        double expected = std::nan("");
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (std::isnan(values[g])) continue;
            const double scaled = hi > lo ? (values[g] - lo) / (hi - lo) : 1.0;
            if (scaled >= 0.5) {
                expected = grid[g];
                break;
            }
        }
        REQUIRE(!std::isnan(expected));
        CHECK(select_theta(rows, grid) == expected);
    }

    SUBCASE("grid validation") {
        CHECK_THROWS_AS(select_theta(rows, {}), ConfigError);
        CHECK_THROWS_AS(select_theta(rows, {2.0, 1.0}), ConfigError);
    }
}

TEST_CASE("theta selection fails cleanly when uniformity is never defined") {
    InstanceMetadataRow only;
    only.instance_id = "solo";
    only.features = {0.0};
    only.performance = {1};
    // A single row never yields two retained instances.
    CHECK_THROWS_AS(select_theta({only}, {0.5, 1.0}), SelectionError);
}
