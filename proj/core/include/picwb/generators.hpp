#pragma once
#include <random>

#include "picwb/automaton.hpp"
#include "picwb/logic.hpp"
#include "picwb/normalize.hpp"
#include "picwb/tiling.hpp"

namespace picwb {

// Letters a, b, ...; colors g0, g1, ...; each tile kept with probability `density`.
// The corner tile (#,#) is always present so that d >= 2 systems are not trivially empty.
TilingSystem random_tiling_system(std::mt19937_64& rng, int d, int gamma, int sigma, double density = 0.6);

// States s0..s{k-1}, the first `sigma` of them are letters; each transition target kept with probability 1/3.
CellularAutomaton random_automaton(std::mt19937_64& rng, int d, int k, int sigma);

// ESO(forall^2, arity 2) sentence over words on {a, b}: one binary R, `atoms` atoms drawn from
// R(x,y) R(y,x) R(suc x,y) R(x,suc y) Q(x) Q(y) x=y x<y min max, joined by random connectives.
EsoSentence random_word_sentence(std::mt19937_64& rng, int atoms);

// Boolean combination of `count` thresholds (k <= max_k) over random quantifier-free psi(x),
// pixel signature of dimension d over {0, 1}.
CardinalitySentence random_cardinality(std::mt19937_64& rng, int d, int count, int max_k = 3);

}  // namespace picwb
