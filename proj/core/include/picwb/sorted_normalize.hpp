#pragma once
#include <optional>
#include <random>
#include <vector>

#include "picwb/logic.hpp"
#include "picwb/perm.hpp"

namespace picwb {

// All stages take a coordinate sentence in prenex universal form; d is the prefix length.
EsoSentence flatten_atoms(const EsoSentence& s);
EsoSentence decompose_successors(const EsoSentence& s);
EsoSentence fold_relations(const EsoSentence& s);
EsoSentence eliminate_comparisons(const EsoSentence& s);
EsoSentence simulate_input_relations(const EsoSentence& s);

inline constexpr int kMaxPipelineDim = 4;
// Pads the prefix to k+1 variables, runs the five stages and checks the result is sorted.
EsoSentence sort_pipeline(const EsoSentence& s, int max_d = kMaxPipelineDim);

// A d-ary relation on [1,n] as one flag per tuple in cell_rank order.
using TupleSet = std::vector<char>;

bool nondecreasing(const Cell& x);
// Families are indexed like all_permutations(d).
std::vector<TupleSet> family_from_relation(const TupleSet& r, int d, int n);
bool family_generated(const std::vector<TupleSet>& fam, int d, int n, TupleSet* witness = nullptr);
bool family_coherent(const std::vector<TupleSet>& fam, int d, int n);
bool family_transposition_coherent(const std::vector<TupleSet>& fam, int d, int n);

struct DSimulation {
  int d = 2, n = 1;
  std::vector<TupleSet> t, q;  // indexed like all_permutations(d)
};
// Solves the F-formulas by equality propagation; unconstrained classes get random values.
// Empty when the constraints are contradictory.
std::optional<DSimulation> build_d_simulation(const TupleSet& q, int d, int n, std::mt19937_64& rng);
std::size_t simulation_axiom_violations(const DSimulation& sim, const TupleSet& q);
std::size_t simulation_conclusion_violations(const DSimulation& sim, const TupleSet& q);

}  // namespace picwb
