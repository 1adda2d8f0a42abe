#pragma once
#include "picwb/automaton.hpp"
#include "picwb/logic.hpp"
#include "picwb/normalize.hpp"
#include "picwb/symbolic_automaton.hpp"
#include "picwb/tiling.hpp"

namespace picwb {

// Pixel sentence in localized shape; guessed C<i> marks the cell color gamma[i].
EsoSentence tiling_to_sentence(const TilingSystem& ts);

inline constexpr int kMaxTilingGuesses = 8;
// Colors are (input letter, guessed bits); the sentence is localized first.
TilingSystem sentence_to_tiling(const EsoSentence& s, int max_guesses = kMaxTilingGuesses);

// Coordinate sentence with guessed R<i> of arity d+1 (last argument is the time step),
// true exactly on the pictures accepted in real time n+1.
EsoSentence automaton_to_sentence(const CellularAutomaton& a);

struct CompiledAutomaton {
  SymbolicAutomaton automaton;
  int c = 2, c2 = 1;  // acceptance checked at time c*n + c2
};
inline constexpr int kMaxAutomatonWidth = 512;
// Input must be sorted with prefix length d+1 over d-pictures.
CompiledAutomaton sentence_to_automaton(const EsoSentence& s, int max_width = kMaxAutomatonWidth);

}  // namespace picwb
