#pragma once
#include <optional>
#include <string>
#include <vector>

#include "picwb/logic.hpp"

namespace picwb {

// ∃U ∀x ⋀_i [min_i(x) → m[i] ∧ max_i(x) → M[i] ∧ ¬max_i(x) → psi[i]] on a pixel signature.
struct LocalizedSentence {
  EsoSentence sentence;
  std::string var;
  std::vector<FormulaPtr> m, M, psi;  // index i-1 for dimension i
};
// Recognizes the three-guard shape; atoms of m/M must be P(x), atoms of psi[i] P(x) or P(suc_i(x)).
std::optional<LocalizedSentence> as_localized(const EsoSentence& s);
EsoSentence localized_sentence(const LocalizedSentence& l);
LocalizedSentence localize_pixel_sentence(const EsoSentence& s);

struct Threshold {
  std::string var;
  FormulaPtr psi;  // quantifier-free, single free variable var
  int k = 1;
};
// Boolean combination whose atoms are 0-ary symbols "#<index>" naming thresholds.
struct CardinalitySentence {
  Signature sig;
  std::vector<Threshold> thresholds;
  FormulaPtr combination;
};
// Syntax: a boolean combination (and, or, not, implies, iff, xor, true, false) of (atleast k x psi).
CardinalitySentence parse_cardinality(const std::string& text, const Signature& sig);
std::string render_cardinality(const CardinalitySentence& c);
bool eval_cardinality(const CardinalitySentence& c, const Picture& p);

inline constexpr int kMaxThreshold = 64;
EsoSentence cardinality_to_monadic(const CardinalitySentence& c, int max_k = kMaxThreshold);

// d defaults to the number of distinct variable names in the body.
EsoSentence skolemize_universal(const EsoSentence& s, int d = 0);
EsoSentence reduce_arities(const EsoSentence& s);

}  // namespace picwb
