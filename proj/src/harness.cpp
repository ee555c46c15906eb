#include "bifi/harness.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "bifi/accuracy.hpp"
#include "bifi/cokriging.hpp"
#include "bifi/csv.hpp"
#include "bifi/errors.hpp"
#include "bifi/rng.hpp"
#include "bifi/sampling.hpp"
#include "bifi/wilcoxon.hpp"

namespace bifi {

std::vector<std::pair<int, int>> paper_budget_grid(int d) {
    std::vector<std::pair<int, int>> grid;
    for (int low = 4; low <= 20; low += 4) {
        for (int high = 2; high <= low; high += 2) {
            grid.emplace_back(high * d, low * d);
        }
    }
    return grid;
}

namespace {

// Seed stream tags for the independent per-repetition draws.
enum : std::uint64_t { kPlanStream = 1, kSubsetStream, kTestStream, kKrigStream, kCokrigStream };

}  // namespace

InstanceResult run_instance(const InstanceSpec& spec, const FunctionPair& pair,
                            const TrainerConfig& config, int accuracy_per_dim) {
    if (pair.id() != spec.pair_id) throw ConfigError("instance spec names a different pair");
    if (spec.n_h < 2 || spec.n_h > spec.n_l) throw SizeError("need 2 <= n_h <= n_l");
    if (spec.repetitions < 1) throw SizeError("need at least one repetition");

    const int d = static_cast<int>(pair.dim());
    InstanceResult result;
    result.spec = spec;
    result.d = d;
    result.source = pair.source_tag();

    std::vector<FeatureVector> per_repetition_features;
    per_repetition_features.reserve(spec.repetitions);

    for (int rep = 0; rep < spec.repetitions; ++rep) {
        const auto rep_index = static_cast<std::uint64_t>(rep);
        const SamplingPlan plan = optimize_plan(
            lhs_plan(spec.n_l, d, derive_seed(spec.master_seed, rep_index, kPlanStream)));
        const NestedDesign design =
            nested_subset(plan, spec.n_h, derive_seed(spec.master_seed, rep_index, kSubsetStream));

        const std::vector<Point> low_unit = design.low_points();
        const std::vector<Point> high_unit = design.high_points();
        std::vector<double> y_low(low_unit.size());
        for (std::size_t i = 0; i < low_unit.size(); ++i) {
            y_low[i] = pair.low(pair.domain().from_unit(low_unit[i]));
        }
        std::vector<double> y_high(high_unit.size());
        std::vector<double> y_low_at_high(high_unit.size());
        for (std::size_t i = 0; i < high_unit.size(); ++i) {
            y_high[i] = pair.high(pair.domain().from_unit(high_unit[i]));
            y_low_at_high[i] = y_low[static_cast<std::size_t>(design.subset[i])];
        }

        per_repetition_features.push_back(
            repetition_features(high_unit, y_low_at_high, y_high, spec.n_l));

        try {
            const KrigingModel kriging = KrigingModel::fit(
                high_unit, y_high, config, derive_seed(spec.master_seed, rep_index, kKrigStream));
            const CoKrigingModel cokriging =
                CoKrigingModel::fit(high_unit, y_high, low_unit, y_low, config,
                                    derive_seed(spec.master_seed, rep_index, kCokrigStream));

            // Both models share one test plan within a repetition.
            const std::vector<Point> test_plan = random_test_plan(
                d, accuracy_per_dim * d, derive_seed(spec.master_seed, rep_index, kTestStream));
            const AccuracyReport kriging_report = accuracy(
                [&](const Point& u) { return kriging.predict(u).mean; }, pair, test_plan);
            const AccuracyReport cokriging_report = accuracy(
                [&](const Point& u) { return cokriging.predict(u).mean; }, pair, test_plan);

            result.kriging_accuracy.push_back(kriging_report.p_corr);
            result.cokriging_accuracy.push_back(cokriging_report.p_corr);
        } catch (const DegeneracyError&) {
            ++result.degenerate_repetitions;
        } catch (const UndefinedCorrelationError&) {
            ++result.degenerate_repetitions;
        }
    }

    result.raw_features = sample_feature_vector(per_repetition_features, &result.feature_counts);
    result.raw_features.n_high = spec.n_h;
    result.raw_features.n_low = spec.n_l;

    if (result.kriging_accuracy.size() >= 6) {
        result.p_kriging = wilcoxon_p(result.kriging_accuracy, result.cokriging_accuracy);
        result.p_cokriging = wilcoxon_p(result.cokriging_accuracy, result.kriging_accuracy);
    } else {
        // Too few valid pairs to claim goodness for either model.
        result.low_power = true;
        result.p_kriging = 0.5 - 1e-9;
        result.p_cokriging = 0.5 - 1e-9;
    }
    result.good_kriging = binary_label(result.p_kriging);
    result.good_cokriging = binary_label(result.p_cokriging);
    return result;
}

MetadataTable assemble_metadata(const std::vector<InstanceResult>& results,
                                TransformSet* fitted_transforms) {
    MetadataTable table;
    table.feature_columns = feature_ids();

    std::vector<FeatureVector> raw_rows;
    std::vector<std::string> ids;
    std::set<std::string> seen;
    for (const auto& result : results) {
        std::ostringstream id;
        id << result.spec.pair_id << "_nh" << result.spec.n_h << "_nl" << result.spec.n_l;
        if (!seen.insert(id.str()).second) {
            throw SchemaError("duplicate instance id: " + id.str());
        }
        ids.push_back(id.str());
        raw_rows.push_back(result.raw_features);
    }

    TransformSet transforms;
    if (results.size() >= 2) {
        transforms = fit_transforms(raw_rows, ids);
    } else if (!results.empty()) {
        // A single instance cannot anchor the unbounded transforms; fall back
        // to the bounded columns only.
        for (const auto& bound : feature_schema()) {
            if (!bound.bounded) continue;
            ColumnTransform col;
            col.id = bound.id;
            col.bounded = true;
            col.lo = bound.lo;
            col.hi = bound.hi;
            transforms.columns.push_back(col);
        }
    }
    if (fitted_transforms) *fitted_transforms = transforms;

    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& result = results[i];
        MetadataRow row;
        row.instance_id = ids[i];
        row.source = to_string(result.source);
        row.d = result.d;
        row.n_h = result.spec.n_h;
        row.n_l = result.spec.n_l;
        row.raw = result.raw_features;
        row.transformed = transforms.apply(result.raw_features);
        row.p_kriging = result.p_kriging;
        row.p_cokriging = result.p_cokriging;
        row.good_kriging = result.good_kriging ? 1 : 0;
        row.good_cokriging = result.good_cokriging ? 1 : 0;
        table.rows.push_back(std::move(row));
    }
    return table;
}

void save_metadata_csv(const MetadataTable& table, std::ostream& out) {
    out << "# bifid-metadata v1\n";
    std::vector<std::string> header = {"instance_id", "source", "d", "n_h", "n_l"};
    for (const auto& id : table.feature_columns) header.push_back(id);
    for (const auto& id : table.feature_columns) header.push_back("t_" + id);
    header.insert(header.end(), {"p_kriging", "p_cokriging", "good_kriging", "good_cokriging"});
    out << join_csv(header) << "\n";

    const auto cell = [](const FeatureVector& fv, const std::string& id) {
        return fv.has(id) ? format_double(fv.values.at(id)) : std::string();
    };
    for (const auto& row : table.rows) {
        std::vector<std::string> fields = {row.instance_id, row.source, std::to_string(row.d),
                                           std::to_string(row.n_h), std::to_string(row.n_l)};
        for (const auto& id : table.feature_columns) fields.push_back(cell(row.raw, id));
        for (const auto& id : table.feature_columns) fields.push_back(cell(row.transformed, id));
        fields.push_back(format_double(row.p_kriging));
        fields.push_back(format_double(row.p_cokriging));
        fields.push_back(std::to_string(row.good_kriging));
        fields.push_back(std::to_string(row.good_cokriging));
        out << join_csv(fields) << "\n";
    }
}

MetadataTable load_metadata_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# bifid-metadata v1", 0) != 0) {
        throw SchemaError("not a bifid-metadata v1 file");
    }
    if (!std::getline(in, line)) throw SchemaError("missing metadata header row");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 9 || header[0] != "instance_id") {
        throw SchemaError("malformed metadata header");
    }

    MetadataTable table;
    std::size_t col = 5;
    while (col < header.size() && header[col].rfind("t_", 0) != 0 &&
           header[col] != "p_kriging") {
        table.feature_columns.push_back(header[col]);
        ++col;
    }
    const std::size_t n_features = table.feature_columns.size();
    const std::size_t expected = 5 + 2 * n_features + 4;
    if (header.size() != expected) throw SchemaError("metadata header has unexpected column count");

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != expected) throw SchemaError("metadata row has wrong field count");
        MetadataRow row;
        row.instance_id = fields[0];
        row.source = fields[1];
        row.d = std::stoi(fields[2]);
        row.n_h = std::stoi(fields[3]);
        row.n_l = std::stoi(fields[4]);
        row.raw.n_high = row.n_h;
        row.raw.n_low = row.n_l;
        row.transformed.provenance = FeatureProvenance::transformed;
        for (std::size_t f = 0; f < n_features; ++f) {
            if (!fields[5 + f].empty()) {
                row.raw.values[table.feature_columns[f]] = std::stod(fields[5 + f]);
            }
            const std::string& t = fields[5 + n_features + f];
            if (!t.empty()) row.transformed.values[table.feature_columns[f]] = std::stod(t);
        }
        row.p_kriging = std::stod(fields[expected - 4]);
        row.p_cokriging = std::stod(fields[expected - 3]);
        row.good_kriging = std::stoi(fields[expected - 2]);
        row.good_cokriging = std::stoi(fields[expected - 1]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace bifi
