#ifndef BIFI_FUNCTION_PAIR_HPP
#define BIFI_FUNCTION_PAIR_HPP

#include <functional>
#include <string>
#include <utility>

#include "bifi/hypercube.hpp"

namespace bifi {

enum class Fidelity { high, low };

enum class SourceTag { literature, disturbance };

/// A deterministic scalar field over a hypercube.
using ScalarField = std::function<double(const Point&)>;

/// Two deterministic objective sources over a shared domain: the expensive
/// ground truth and a cheap approximation of it. Immutable once built, so a
/// pair may be evaluated from many threads at once.
class FunctionPair {
public:
    FunctionPair(std::string id, Hypercube domain, ScalarField high, ScalarField low,
                 SourceTag tag)
        : id_(std::move(id)),
          domain_(std::move(domain)),
          high_(std::move(high)),
          low_(std::move(low)),
          tag_(tag) {}

    const std::string& id() const { return id_; }
    const Hypercube& domain() const { return domain_; }
    std::size_t dim() const { return domain_.dim(); }
    SourceTag source_tag() const { return tag_; }

    /// Evaluates one source at x. Throws DomainError for points outside the
    /// domain; otherwise deterministic (same x, same bits).
    double evaluate(Fidelity fidelity, const Point& x) const {
        domain_.require_inside(x);
        return fidelity == Fidelity::high ? high_(x) : low_(x);
    }

    double high(const Point& x) const { return evaluate(Fidelity::high, x); }
    double low(const Point& x) const { return evaluate(Fidelity::low, x); }

private:
    std::string id_;
    Hypercube domain_;
    ScalarField high_;
    ScalarField low_;
    SourceTag tag_;
};

inline const char* to_string(SourceTag tag) {
    return tag == SourceTag::literature ? "literature" : "disturbance";
}

}  // namespace bifi

#endif
