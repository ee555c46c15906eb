#include "bifi/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bifi/errors.hpp"

namespace bifi {
namespace {

void validate_rows(const std::vector<InstanceMetadataRow>& rows) {
    if (rows.empty()) return;
    const std::size_t n_features = rows.front().features.size();
    const std::size_t n_bits = rows.front().performance.size();
    for (const auto& row : rows) {
        if (row.features.size() != n_features) {
            throw SchemaError("row " + row.instance_id + " has a different feature count");
        }
        if (row.performance.size() != n_bits) {
            throw SchemaError("row " + row.instance_id + " has a different performance length");
        }
        for (double f : row.features) {
            if (!std::isfinite(f)) throw DataError("non-finite feature in row " + row.instance_id);
        }
        for (int bit : row.performance) {
            if (bit != 0 && bit != 1) throw DataError("performance bits must be 0 or 1");
        }
    }
}

double distance(const InstanceMetadataRow& a, const InstanceMetadataRow& b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.features.size(); ++k) {
        const double diff = a.features[k] - b.features[k];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

/// Lowest-priority rows are scanned (and so removed) first: descending tier,
/// then descending instance id.
std::vector<std::size_t> removal_order(const std::vector<InstanceMetadataRow>& rows) {
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].priority_tier != rows[b].priority_tier) {
            return rows[a].priority_tier > rows[b].priority_tier;
        }
        return rows[a].instance_id > rows[b].instance_id;
    });
    return order;
}

FilterResult filter_scan(const std::vector<InstanceMetadataRow>& rows, double theta,
                         bool respect_labels) {
    validate_rows(rows);
    if (theta < 0.0) throw ConfigError("theta must be nonnegative");

    std::vector<char> removed(rows.size(), 0);
    const std::vector<std::size_t> order = removal_order(rows);
    for (std::size_t i : order) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j == i || removed[j]) continue;
            if (distance(rows[i], rows[j]) > theta) continue;
            if (respect_labels && rows[i].performance != rows[j].performance) continue;
            removed[i] = 1;
            break;
        }
    }

    FilterResult result;
    result.theta = theta;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!removed[i]) result.retained_ids.push_back(rows[i].instance_id);
    }
    // Diagnostics: rows that survive only because of a label mismatch.
    std::vector<std::vector<double>> retained_features;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (removed[i]) continue;
        retained_features.push_back(rows[i].features);
        bool has_close_neighbour = false;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j == i || removed[j]) continue;
            if (distance(rows[i], rows[j]) <= theta) {
                has_close_neighbour = true;
                break;
            }
        }
        if (has_close_neighbour) {
            ++result.violation_count;
        } else {
            ++result.dissimilar_count;
        }
    }
    result.critical_count = static_cast<int>(result.retained_ids.size());
    if (retained_features.size() >= 2) {
        result.uniformity = uniformity(retained_features);
    } else {
        result.uniformity = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

}  // namespace

FilterResult dissimilar_set(const std::vector<InstanceMetadataRow>& rows, double theta) {
    return filter_scan(rows, theta, false);
}

FilterResult critical_set(const std::vector<InstanceMetadataRow>& rows, double theta) {
    return filter_scan(rows, theta, true);
}

double uniformity(const std::vector<std::vector<double>>& features) {
    if (features.size() < 2) throw SizeError("uniformity needs at least two instances");
    const std::size_t n = features.size();
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double sum = 0.0;
            for (std::size_t k = 0; k < features[i].size(); ++k) {
                const double diff = features[i][k] - features[j][k];
                sum += diff * diff;
            }
            nearest[i] = std::min(nearest[i], std::sqrt(sum));
        }
    }
    double mean = 0.0;
    for (double v : nearest) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : nearest) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return 1.0 - sd / mean;
}

double select_theta(const std::vector<InstanceMetadataRow>& rows,
                    const std::vector<double>& theta_grid) {
    if (theta_grid.empty()) throw ConfigError("theta grid must not be empty");
    if (!std::is_sorted(theta_grid.begin(), theta_grid.end())) {
        throw ConfigError("theta grid must be ascending");
    }

    std::vector<double> values(theta_grid.size(), std::numeric_limits<double>::quiet_NaN());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < theta_grid.size(); ++g) {
        const FilterResult result = dissimilar_set(rows, theta_grid[g]);
        if (std::isnan(result.uniformity)) continue;
        values[g] = result.uniformity;
        lo = std::min(lo, result.uniformity);
        hi = std::max(hi, result.uniformity);
    }
    if (!(lo <= hi)) throw SelectionError("uniformity undefined at every grid theta");

    for (std::size_t g = 0; g < theta_grid.size(); ++g) {
        if (std::isnan(values[g])) continue;
        // A degenerate scale (single candidate or all values equal) rescales
        // to 1 so the candidate is selectable.
        const double scaled = hi > lo ? (values[g] - lo) / (hi - lo) : 1.0;
        if (scaled >= 0.5) return theta_grid[g];
    }
    throw SelectionError("no grid theta reaches the rescaled uniformity threshold");
}

}  // namespace bifi
