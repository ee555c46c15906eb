#include "bifi/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "bifi/errors.hpp"

namespace bifi {

namespace {
constexpr double kBoundedLimit = 2.0;
constexpr double kOutlierLimit = 4.0;

double clamp(double v, double limit) { return std::max(-limit, std::min(limit, v)); }
}  // namespace

double box_cox(double value, double lambda) {
    if (lambda == 0.0) return std::log(value);
    return (std::pow(value, lambda) - 1.0) / lambda;
}

double ColumnTransform::apply(double raw) const {
    if (bounded) {
        const double scaled = -kBoundedLimit + 2.0 * kBoundedLimit * (raw - lo) / (hi - lo);
        return clamp(scaled, kBoundedLimit);
    }
    // Fitted on shifted-positive data; unseen values below the training
    // minimum are floored just above zero so the power transform stays real.
    const double shifted = std::max(raw + shift, 1e-12);
    const double transformed = box_cox(shifted, lambda);
    const double z = sd > 0.0 ? (transformed - mean) / sd : 0.0;
    return clamp(z, kOutlierLimit);
}

const ColumnTransform& TransformSet::column(const std::string& id) const {
    for (const auto& col : columns) {
        if (col.id == id) return col;
    }
    throw SchemaError("no fitted transform for feature " + id);
}

FeatureVector TransformSet::apply(const FeatureVector& raw) const {
    FeatureVector out;
    out.provenance = FeatureProvenance::transformed;
    out.n_high = raw.n_high;
    out.n_low = raw.n_low;
    for (const auto& [id, value] : raw.values) {
        const auto it = std::find_if(columns.begin(), columns.end(),
                                     [&](const ColumnTransform& col) { return col.id == id; });
        out.values[id] = it == columns.end() ? value : it->apply(value);
    }
    return out;
}

namespace {

ColumnTransform fit_unbounded(const std::string& id, const std::vector<double>& raw) {
    ColumnTransform col;
    col.id = id;
    col.bounded = false;

    const double min = *std::min_element(raw.begin(), raw.end());
    col.shift = min <= 0.0 ? 1.0 - min : 0.0;
    std::vector<double> shifted(raw.size());
    double log_sum = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        shifted[i] = raw[i] + col.shift;
        log_sum += std::log(shifted[i]);
    }

    const auto n = static_cast<double>(raw.size());
    double best_lambda = 1.0;
    double best_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> transformed(raw.size());
    for (int step = -40; step <= 40; ++step) {
        const double lambda = step * 0.05;
        double mean = 0.0;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            transformed[i] = box_cox(shifted[i], lambda);
            mean += transformed[i];
        }
        mean /= n;
        double variance = 0.0;
        for (double t : transformed) variance += (t - mean) * (t - mean);
        variance /= n;
        if (!(variance > 0.0)) continue;
        const double ll = -0.5 * n * std::log(variance) + (lambda - 1.0) * log_sum;
        if (ll > best_ll) {
            best_ll = ll;
            best_lambda = lambda;
        }
    }
    col.lambda = best_lambda;

    double mean = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        transformed[i] = box_cox(shifted[i], best_lambda);
        mean += transformed[i];
    }
    mean /= n;
    double ss = 0.0;
    for (double t : transformed) ss += (t - mean) * (t - mean);
    col.mean = mean;
    col.sd = raw.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return col;
}

}  // namespace

TransformSet fit_transforms(const std::vector<FeatureVector>& rows,
                            const std::vector<std::string>& instance_ids,
                            const std::vector<FeatureBound>& schema) {
    if (rows.size() < 2) throw SizeError("transform fitting needs at least two instances");
    if (!instance_ids.empty() && instance_ids.size() != rows.size()) {
        throw DataError("instance id count does not match row count");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [id, value] : rows[i].values) {
            if (!std::isfinite(value)) {
                const std::string name = instance_ids.empty() ? std::to_string(i) : instance_ids[i];
                throw DataError("non-finite raw feature '" + id + "' for instance " + name);
            }
        }
    }

    TransformSet set;
    for (const auto& bound : schema) {
        if (bound.bounded) {
            ColumnTransform col;
            col.id = bound.id;
            col.bounded = true;
            col.lo = bound.lo;
            col.hi = bound.hi;
            set.columns.push_back(col);
            continue;
        }
        std::vector<double> raw;
        for (const auto& row : rows) {
            const auto it = row.values.find(bound.id);
            if (it != row.values.end()) raw.push_back(it->second);
        }
        if (raw.empty()) continue;  // feature missing everywhere: nothing to fit
        set.columns.push_back(fit_unbounded(bound.id, raw));
    }
    return set;
}

void save_transforms(const TransformSet& transforms, std::ostream& out) {
    nlohmann::json doc;
    doc["version"] = 1;
    auto& cols = doc["columns"];
    cols = nlohmann::json::array();
    for (const auto& col : transforms.columns) {
        nlohmann::json entry;
        entry["id"] = col.id;
        entry["bounded"] = col.bounded;
        if (col.bounded) {
            entry["lo"] = col.lo;
            entry["hi"] = col.hi;
        } else {
            entry["shift"] = col.shift;
            entry["lambda"] = col.lambda;
            entry["mean"] = col.mean;
            entry["sd"] = col.sd;
        }
        cols.push_back(entry);
    }
    out << doc.dump(2) << "\n";
}

TransformSet load_transforms(std::istream& in) {
    nlohmann::json doc;
    in >> doc;
    if (!doc.contains("version") || doc["version"].get<int>() != 1) {
        throw SchemaError("unsupported transform sidecar version");
    }
    TransformSet set;
    for (const auto& entry : doc["columns"]) {
        ColumnTransform col;
        col.id = entry["id"].get<std::string>();
        col.bounded = entry["bounded"].get<bool>();
        if (col.bounded) {
            col.lo = entry["lo"].get<double>();
            col.hi = entry["hi"].get<double>();
        } else {
            col.shift = entry["shift"].get<double>();
            col.lambda = entry["lambda"].get<double>();
            col.mean = entry["mean"].get<double>();
            col.sd = entry["sd"].get<double>();
        }
        set.columns.push_back(col);
    }
    return set;
}

}  // namespace bifi
