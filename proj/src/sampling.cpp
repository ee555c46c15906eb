#include "bifi/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "bifi/errors.hpp"
#include "bifi/rng.hpp"

namespace bifi {

namespace {
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
}

SamplingPlan::SamplingPlan(std::vector<int> levels, int n, int d, std::uint64_t seed)
    : levels_(std::move(levels)), n_(n), d_(d), seed_(seed) {
    if (n_ < 1 || d_ < 1 || levels_.size() != static_cast<std::size_t>(n_) * d_) {
        throw SizeError("sampling plan shape mismatch");
    }
    // Latin property: every column is a permutation of 0..n-1.
    std::vector<char> seen(static_cast<std::size_t>(n_));
    for (int k = 0; k < d_; ++k) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int i = 0; i < n_; ++i) {
            const int level = levels_[static_cast<std::size_t>(i) * d_ + k];
            if (level < 0 || level >= n_ || seen[level]) {
                throw DataError("column " + std::to_string(k) + " is not a permutation of cell levels");
            }
            seen[level] = 1;
        }
    }
}

Point SamplingPlan::point(int i) const {
    Point x(d_);
    for (int k = 0; k < d_; ++k) x[k] = coordinate(i, k);
    return x;
}

std::vector<Point> SamplingPlan::points() const {
    std::vector<Point> all;
    all.reserve(n_);
    for (int i = 0; i < n_; ++i) all.push_back(point(i));
    return all;
}

std::int64_t SamplingPlan::sq_dist(int i, int j) const {
    std::int64_t sum = 0;
    for (int k = 0; k < d_; ++k) {
        const std::int64_t diff = level(i, k) - level(j, k);
        sum += diff * diff;
    }
    return sum;
}

std::vector<Point> NestedDesign::high_points() const {
    std::vector<Point> pts;
    pts.reserve(subset.size());
    for (int idx : subset) pts.push_back(plan.point(idx));
    return pts;
}

SamplingPlan lhs_plan(int n_l, int d, std::uint64_t seed) {
    if (n_l < 2) throw SizeError("a sampling plan needs at least 2 points");
    if (d < 1) throw SizeError("dimension must be positive");
    Rng rng(mix_seed(seed));
    std::vector<int> levels(static_cast<std::size_t>(n_l) * d);
    std::vector<int> column(static_cast<std::size_t>(n_l));
    for (int k = 0; k < d; ++k) {
        std::iota(column.begin(), column.end(), 0);
        rng.shuffle(column);
        for (int i = 0; i < n_l; ++i) levels[static_cast<std::size_t>(i) * d + k] = column[i];
    }
    return SamplingPlan(std::move(levels), n_l, d, seed);
}

std::int64_t min_pairwise_sq(const SamplingPlan& plan) {
    const int n = plan.size();
    if (n < 2) return kInf;
    std::int64_t best = kInf;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) best = std::min(best, plan.sq_dist(i, j));
    }
    return best;
}

std::int64_t min_pairwise_sq(const SamplingPlan& plan, const std::vector<int>& subset) {
    const int m = static_cast<int>(subset.size());
    if (m < 2) return kInf;
    std::int64_t best = kInf;
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) best = std::min(best, plan.sq_dist(subset[a], subset[b]));
    }
    return best;
}

double min_pairwise_distance(const SamplingPlan& plan) {
    const std::int64_t sq = min_pairwise_sq(plan);
    if (sq == kInf) return std::numeric_limits<double>::infinity();
    return std::sqrt(static_cast<double>(sq)) / plan.size();
}

namespace {

struct PairList {
    std::int64_t min_sq = kInf;
    std::vector<std::pair<int, int>> at_min;
};

PairList scan_min_pairs(const std::vector<std::int64_t>& dist, int n) {
    PairList out;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const std::int64_t v = dist[static_cast<std::size_t>(i) * n + j];
            if (v < out.min_sq) {
                out.min_sq = v;
                out.at_min.clear();
            }
            if (v == out.min_sq) out.at_min.emplace_back(i, j);
        }
    }
    return out;
}

// A single coordinate swap between i and j only changes distances incident
// to i or j, so it can raise the global minimum only if every pair currently
// at the minimum touches {i, j}.
bool covers_all(const PairList& pairs, int i, int j) {
    for (const auto& [a, b] : pairs.at_min) {
        if (a != i && a != j && b != i && b != j) return false;
    }
    return true;
}

}  // namespace

SamplingPlan optimize_plan(SamplingPlan plan) {
    const int n = plan.size();
    const int d = plan.dim();
    if (n < 3 || d < 2) return plan;  // coordinate swaps cannot change the point set

    std::vector<int> levels = plan.levels();
    const auto at = [&](int i, int k) -> int& { return levels[static_cast<std::size_t>(i) * d + k]; };

    // Full squared-distance matrix, kept in sync with `levels`.
    std::vector<std::int64_t> dist(static_cast<std::size_t>(n) * n, 0);
    const auto dref = [&](int i, int j) -> std::int64_t& {
        return dist[static_cast<std::size_t>(i) * n + j];
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::int64_t sum = 0;
            for (int k = 0; k < d; ++k) {
                const std::int64_t diff = at(i, k) - at(j, k);
                sum += diff * diff;
            }
            dref(i, j) = dref(j, i) = sum;
        }
    }

    PairList pairs = scan_min_pairs(dist, n);
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < n - 1 && !improved; ++i) {
            for (int j = i + 1; j < n && !improved; ++j) {
                if (!covers_all(pairs, i, j)) continue;
                for (int k = 0; k < d; ++k) {
                    const std::int64_t li = at(i, k);
                    const std::int64_t lj = at(j, k);
                    // New distances of i and j to every other point; d(i,j)
                    // itself is unchanged by the swap.
                    bool ok = dref(i, j) > pairs.min_sq;
                    for (int p = 0; ok && p < n; ++p) {
                        if (p == i || p == j) continue;
                        const std::int64_t lp = at(p, k);
                        const std::int64_t di = dref(i, p) - (li - lp) * (li - lp) + (lj - lp) * (lj - lp);
                        const std::int64_t dj = dref(j, p) - (lj - lp) * (lj - lp) + (li - lp) * (li - lp);
                        ok = di > pairs.min_sq && dj > pairs.min_sq;
                    }
                    if (!ok) continue;
                    // Accept: swap the k-th coordinate of i and j.
                    at(i, k) = static_cast<int>(lj);
                    at(j, k) = static_cast<int>(li);
                    for (int p = 0; p < n; ++p) {
                        if (p == i || p == j) continue;
                        const std::int64_t lp = at(p, k);
                        dref(i, p) = dref(p, i) = dref(i, p) - (li - lp) * (li - lp) + (lj - lp) * (lj - lp);
                        dref(j, p) = dref(p, j) = dref(j, p) - (lj - lp) * (lj - lp) + (li - lp) * (li - lp);
                    }
                    pairs = scan_min_pairs(dist, n);
                    improved = true;
                    break;
                }
            }
        }
    }
    return SamplingPlan(std::move(levels), n, d, plan.seed());
}

std::vector<int> random_subset(int plan_size, int n_h, std::uint64_t seed) {
    if (n_h < 1) throw SizeError("subset size must be positive");
    if (n_h > plan_size) throw SizeError("subset size exceeds plan size");
    std::vector<int> order(static_cast<std::size_t>(plan_size));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(seed ^ 0x9d2c5680ULL));
    rng.shuffle(order);
    std::vector<int> subset(order.begin(), order.begin() + n_h);
    std::sort(subset.begin(), subset.end());
    return subset;
}

NestedDesign nested_subset(SamplingPlan plan, int n_h, std::uint64_t seed) {
    const int n = plan.size();
    std::vector<int> subset = random_subset(n, n_h, seed);

    if (n_h == n || n_h == 1) return NestedDesign{std::move(plan), std::move(subset)};

    std::vector<char> inside(static_cast<std::size_t>(n), 0);
    for (int idx : subset) inside[idx] = 1;

    std::int64_t current = min_pairwise_sq(plan, subset);
    bool improved = true;
    while (improved) {
        improved = false;
        const int m = n_h;
        for (int a = 0; a < m && !improved; ++a) {
            // min over subset pairs that avoid position a
            std::int64_t rest = kInf;
            for (int b = 0; b < m; ++b) {
                if (b == a) continue;
                for (int c = b + 1; c < m; ++c) {
                    if (c == a) continue;
                    rest = std::min(rest, plan.sq_dist(subset[b], subset[c]));
                }
            }
            for (int out = 0; out < n && !improved; ++out) {
                if (inside[out]) continue;
                std::int64_t candidate = rest;
                for (int b = 0; b < m; ++b) {
                    if (b == a) continue;
                    candidate = std::min(candidate, plan.sq_dist(out, subset[b]));
                }
                if (candidate > current) {
                    inside[subset[a]] = 0;
                    inside[out] = 1;
                    subset[a] = out;
                    std::sort(subset.begin(), subset.end());
                    current = candidate;
                    improved = true;
                }
            }
        }
    }
    return NestedDesign{std::move(plan), std::move(subset)};
}

void save_design(const NestedDesign& design, std::ostream& out) {
    out.precision(17);
    out << "bifid-plan v1\n";
    out << "n_l " << design.n_low() << "\n";
    out << "n_h " << design.n_high() << "\n";
    out << "d " << design.plan.dim() << "\n";
    out << "seed " << design.plan.seed() << "\n";
    out << "points\n";
    for (int i = 0; i < design.n_low(); ++i) {
        for (int k = 0; k < design.plan.dim(); ++k) {
            if (k) out << ' ';
            out << design.plan.coordinate(i, k);
        }
        out << '\n';
    }
    out << "subset\n";
    for (std::size_t a = 0; a < design.subset.size(); ++a) {
        if (a) out << ' ';
        out << design.subset[a];
    }
    out << '\n';
}

NestedDesign load_design(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "bifid-plan v1") {
        throw SchemaError("not a bifid-plan v1 file");
    }
    auto read_kv = [&](const std::string& key) -> long long {
        std::string k;
        long long v = 0;
        if (!(in >> k >> v) || k != key) throw SchemaError("expected '" + key + "' in plan header");
        return v;
    };
    const int n_l = static_cast<int>(read_kv("n_l"));
    const int n_h = static_cast<int>(read_kv("n_h"));
    const int d = static_cast<int>(read_kv("d"));
    std::string word;
    in >> word >> word;  // "seed <value>"
    const std::uint64_t seed = std::stoull(word);
    in >> word;
    if (word != "points") throw SchemaError("expected 'points' section");
    // Midpoint coordinates (L + 0.5)/n map back to exact cell levels.
    std::vector<int> levels(static_cast<std::size_t>(n_l) * d);
    for (auto& v : levels) {
        double coordinate = 0.0;
        if (!(in >> coordinate)) throw SchemaError("truncated plan points");
        const double level = coordinate * n_l - 0.5;
        v = static_cast<int>(std::llround(level));
        if (std::abs(level - v) > 1e-6) {
            throw SchemaError("plan point is not on the midpoint lattice");
        }
    }
    in >> word;
    if (word != "subset") throw SchemaError("expected 'subset' section");
    std::vector<int> subset(static_cast<std::size_t>(n_h));
    for (auto& v : subset) {
        if (!(in >> v)) throw SchemaError("truncated subset indices");
    }
    return NestedDesign{SamplingPlan(std::move(levels), n_l, d, seed), std::move(subset)};
}

void save_design_file(const NestedDesign& design, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    save_design(design, out);
}

NestedDesign load_design_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return load_design(in);
}

}  // namespace bifi
