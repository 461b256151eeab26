#pragma once

#include "complag/expression.hpp"

#include <random>
#include <string>
#include <vector>

namespace complag {

struct RandomTreeOptions {
    int max_depth = 4;
    int dof = 1;
    std::vector<std::string> parameters{"m", "g"};
    bool functions = true;
    bool conjugation = true;
    /// Allow exponents 1/2 and -1/2 besides small integers.
    bool half_powers = true;
    /// Allow raw quotient and negation nodes (parsed-form trees).
    bool raw_nodes = true;
};

/// Random tree over z/zb/zd/zbd of indices 1..dof, t, the given parameters,
/// small rationals and I.  Deterministic for a given engine state.
Expression random_expression(std::mt19937_64& rng, const RandomTreeOptions& options = {});

/// Canonical form of a random tree, redrawing trees that divide by an exact zero.
Expression random_canonical_expression(std::mt19937_64& rng, const RandomTreeOptions& options = {});

}  // namespace complag
