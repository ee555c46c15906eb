#include "bifi/catalogue.hpp"

#include <array>
#include <cmath>

namespace bifi {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double forrester_high(const Point& x) {
    const double t = 6.0 * x[0] - 2.0;
    return t * t * std::sin(12.0 * x[0] - 4.0);
}

double forrester_low(const Point& x) {
    return 0.5 * forrester_high(x) + 10.0 * (x[0] - 0.5) - 5.0;
}

// Analytic continuation used by the low-fidelity average, which shifts
// arguments slightly outside [0,1]^2.
double currin_raw(double x1, double x2) {
    const double damp = x2 == 0.0 ? 1.0 : 1.0 - std::exp(-1.0 / (2.0 * x2));
    const double num = 2300.0 * x1 * x1 * x1 + 1900.0 * x1 * x1 + 2092.0 * x1 + 60.0;
    const double den = 100.0 * x1 * x1 * x1 + 500.0 * x1 * x1 + 4.0 * x1 + 20.0;
    return damp * num / den;
}

double currin_high(const Point& x) { return currin_raw(x[0], x[1]); }

double currin_low(const Point& x) {
    const double a = x[0] + 0.05;
    const double b = x[0] - 0.05;
    const double up = x[1] + 0.05;
    const double down = std::max(0.0, x[1] - 0.05);
    return 0.25 * (currin_raw(a, up) + currin_raw(a, down) + currin_raw(b, up) + currin_raw(b, down));
}

double branin_raw(double x1, double x2) {
    const double t = x2 - 5.1 * x1 * x1 / (4.0 * kPi * kPi) + 5.0 * x1 / kPi - 6.0;
    return t * t + 10.0 * (1.0 - 1.0 / (8.0 * kPi)) * std::cos(x1) + 10.0;
}

double branin_high(const Point& x) { return branin_raw(x[0], x[1]); }

double branin_low(const Point& x) {
    return 10.0 * std::sqrt(branin_raw(x[0] - 2.0, x[1] - 2.0)) + 2.0 * (x[0] - 0.5) -
           3.0 * (3.0 * x[1] - 1.0) - 1.0;
}

double booth_raw(double x1, double x2) {
    const double a = x1 + 2.0 * x2 - 7.0;
    const double b = 2.0 * x1 + x2 - 5.0;
    return a * a + b * b;
}

double booth_high(const Point& x) { return booth_raw(x[0], x[1]); }

double booth_low(const Point& x) {
    return booth_raw(0.4 * x[0], 0.4 * x[1]) + 1.7 * x[0] * x[1] - x[0] + 2.0 * x[1];
}

double bohachevsky_raw(double x1, double x2) {
    return x1 * x1 + 2.0 * x2 * x2 - 0.3 * std::cos(3.0 * kPi * x1) - 0.4 * std::cos(4.0 * kPi * x2) +
           0.7;
}

double bohachevsky_high(const Point& x) { return bohachevsky_raw(x[0], x[1]); }

double bohachevsky_low(const Point& x) {
    return bohachevsky_raw(0.7 * x[0], 0.7 * x[1]) + x[0] * x[1] - 12.0;
}

double himmelblau_raw(double x1, double x2) {
    const double a = x1 * x1 + x2 - 11.0;
    const double b = x1 + x2 * x2 - 7.0;
    return a * a + b * b;
}

double himmelblau_high(const Point& x) { return himmelblau_raw(x[0], x[1]); }

double himmelblau_low(const Point& x) {
    const double shifted = himmelblau_raw(0.5 * x[0], 0.5 * x[1]);
    return shifted + x[1] * x[1] * x[1] - (x[0] + 1.0) * (x[0] + 1.0);
}

double sixhump_raw(double x1, double x2) {
    return 4.0 * x1 * x1 - 2.1 * std::pow(x1, 4) + std::pow(x1, 6) / 3.0 + x1 * x2 -
           4.0 * x2 * x2 + 4.0 * std::pow(x2, 4);
}

double sixhump_high(const Point& x) { return sixhump_raw(x[0], x[1]); }

double sixhump_low(const Point& x) {
    return sixhump_raw(0.7 * x[0], 0.7 * x[1]) + x[0] * x[1] - 15.0;
}

double hartmann3(const Point& x, const std::array<double, 4>& alpha) {
    static constexpr double A[4][3] = {
        {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}};
    static constexpr double P[4][3] = {{0.3689, 0.1170, 0.2673},
                                       {0.4699, 0.4387, 0.7470},
                                       {0.1091, 0.8732, 0.5547},
                                       {0.0381, 0.5743, 0.8828}};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double diff = x[j] - P[i][j];
            inner += A[i][j] * diff * diff;
        }
        sum += alpha[i] * std::exp(-inner);
    }
    return -sum;
}

double hartmann3_high(const Point& x) { return hartmann3(x, {1.0, 1.2, 3.0, 3.2}); }

double hartmann3_low(const Point& x) { return hartmann3(x, {0.5, 0.5, 2.0, 4.0}); }

double park1_high(const Point& x) {
    const double tail = (x[0] + 3.0 * x[3]) * std::exp(1.0 + std::sin(x[2]));
    const double inner = (x[1] + x[2] * x[2]) * x[3];
    if (x[0] == 0.0) {
        // Limit of the first term as x1 -> 0.
        return 0.5 * std::sqrt(inner) + tail;
    }
    return 0.5 * x[0] * (std::sqrt(1.0 + inner / (x[0] * x[0])) - 1.0) + tail;
}

double park1_low(const Point& x) {
    return (1.0 + std::sin(x[0]) / 10.0) * park1_high(x) - 2.0 * x[0] + x[1] * x[1] +
           x[2] * x[2] + 0.5;
}

double park2_high(const Point& x) {
    return (2.0 / 3.0) * std::exp(x[0] + x[1]) - x[3] * std::sin(x[2]) + x[2];
}

double park2_low(const Point& x) { return 1.2 * park2_high(x) - 1.0; }

// Inputs: r_w, r, T_u, H_u, T_l, H_l, L, K_w.
double borehole_flow(const Point& x, double front, double offset) {
    const double rw = x[0], r = x[1], tu = x[2], hu = x[3];
    const double tl = x[4], hl = x[5], length = x[6], kw = x[7];
    const double logr = std::log(r / rw);
    const double den = logr * (offset + 2.0 * length * tu / (logr * rw * rw * kw) + tu / tl);
    return front * tu * (hu - hl) / den;
}

double borehole_high(const Point& x) { return borehole_flow(x, 2.0 * kPi, 1.0); }

double borehole_low(const Point& x) { return borehole_flow(x, 5.0, 1.5); }

double friedman5_high(const Point& x) {
    return 10.0 * std::sin(kPi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] +
           5.0 * x[4];
}

double friedman5_low(const Point& x) {
    return 10.0 * std::sin(kPi * x[0] * x[1]) + 8.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] +
           5.0 * x[4] + 3.0 * x[0] - 1.5;
}

double rosenbrock10_high(const Point& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

double rosenbrock10_low(const Point& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = -2.0 - x[i];
        sum += 50.0 * a * a + b * b;
    }
    for (double xi : x) sum -= 0.5 * xi;
    return sum;
}

FunctionPair lit(std::string id, Hypercube domain, ScalarField high, ScalarField low) {
    return FunctionPair(std::move(id), std::move(domain), std::move(high), std::move(low),
                        SourceTag::literature);
}

}  // namespace

std::vector<FunctionPair> literature_pairs() {
    std::vector<FunctionPair> pairs;
    pairs.push_back(lit("forrester", Hypercube({0.0}, {1.0}), forrester_high, forrester_low));
    pairs.push_back(lit("currin", Hypercube::unit(2), currin_high, currin_low));
    pairs.push_back(lit("branin", Hypercube({-5.0, 0.0}, {10.0, 15.0}), branin_high, branin_low));
    pairs.push_back(lit("booth", Hypercube({-10.0, -10.0}, {10.0, 10.0}), booth_high, booth_low));
    pairs.push_back(
        lit("bohachevsky", Hypercube({-5.0, -5.0}, {5.0, 5.0}), bohachevsky_high, bohachevsky_low));
    pairs.push_back(
        lit("himmelblau", Hypercube({-4.0, -4.0}, {4.0, 4.0}), himmelblau_high, himmelblau_low));
    pairs.push_back(lit("sixhump", Hypercube({-2.0, -2.0}, {2.0, 2.0}), sixhump_high, sixhump_low));
    pairs.push_back(lit("hartmann3", Hypercube::unit(3), hartmann3_high, hartmann3_low));
    pairs.push_back(lit("park1", Hypercube::unit(4), park1_high, park1_low));
    pairs.push_back(lit("park2", Hypercube::unit(4), park2_high, park2_low));
    pairs.push_back(lit("borehole",
                        Hypercube({0.05, 100.0, 63070.0, 990.0, 63.1, 700.0, 1120.0, 9855.0},
                                  {0.15, 50000.0, 115600.0, 1110.0, 116.0, 820.0, 1680.0, 12045.0}),
                        borehole_high, borehole_low));
    pairs.push_back(lit("friedman5", Hypercube::unit(5), friedman5_high, friedman5_low));
    pairs.push_back(lit("rosenbrock10", Hypercube(Point(10, -2.0), Point(10, 2.0)),
                        rosenbrock10_high, rosenbrock10_low));
    return pairs;
}

FunctionPair literature_pair(const std::string& id) {
    for (auto& pair : literature_pairs()) {
        if (pair.id() == id) return pair;
    }
    throw SelectionError("unknown literature pair id: " + id);
}

}  // namespace bifi
