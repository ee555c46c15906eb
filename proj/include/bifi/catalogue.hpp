#ifndef BIFI_CATALOGUE_HPP
#define BIFI_CATALOGUE_HPP

#include <string>
#include <vector>

#include "bifi/function_pair.hpp"

namespace bifi {

/// Fixed catalogue of literature function pairs. Ids and formulas are
/// versioned: entries are only ever appended, never changed.
///
/// Sources, by pair id:
///   forrester            Forrester, Sobester & Keane (2007)
///   currin               Currin et al. (1991); low fidelity of Xiong et al. (2013)
///   branin               Branin (1972); low fidelity of Perdikaris et al. (2017)
///   booth, bohachevsky,
///   himmelblau, sixhump  low-fidelity companions of Dong et al. (2015)
///   park1, park2         Park (1991); low fidelity of Xiong et al. (2013)
///   borehole             Harper & Gupta (1983); low fidelity of Xiong et al. (2013)
///   hartmann3            Hartmann function; low fidelity dampens the alpha weights
///   friedman5            Friedman (1991); low fidelity flattens the quadratic bump
///                        and adds linear drift
///   rosenbrock10         Rosenbrock valley; low fidelity halves the valley
///                        curvature, reflects the linear term and adds drift
std::vector<FunctionPair> literature_pairs();

/// Looks a pair up by id. Throws SelectionError for unknown ids.
FunctionPair literature_pair(const std::string& id);

/// Catalogue schema version, recorded in run manifests.
constexpr int kCatalogueVersion = 1;

}  // namespace bifi

#endif
