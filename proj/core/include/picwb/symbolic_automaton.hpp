#pragma once
#include <cstdint>
#include <vector>

#include "picwb/automaton.hpp"
#include "picwb/circuit.hpp"

namespace picwb {

// A cellular automaton whose states are bit-vectors of a fixed width and whose
// transition relation and accepting set are Boolean circuits.
//
// delta inputs: current state [0, W); for neighbor i the border flag at nbr(i)
// followed by W state bits; the next state at next_offset().
// accept inputs: the state bits [0, W).
struct SymbolicAutomaton {
  int d = 1;
  Alphabet sigma;
  int width = 1;
  std::vector<std::vector<std::uint8_t>> letter_code;
  Circuit circuit;
  Lit delta = kFalse;
  Lit accept = kFalse;

  int nbr(int i) const { return width + i * (width + 1); }
  int next_offset() const { return width + d * (width + 1); }
  int delta_inputs() const { return next_offset() + width; }
};

bool symbolic_accepts_in_time(const SymbolicAutomaton& a, const Picture& p, int T);
bool symbolic_accepts_linear(const SymbolicAutomaton& a, const Picture& p, int c, int c2);

// Binary state encoding of an explicit automaton.
SymbolicAutomaton to_symbolic(const CellularAutomaton& a);

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 16;
// Reachable-state closure from the letter states; throws CapExceeded beyond the cap.
CellularAutomaton to_explicit(const SymbolicAutomaton& a, std::size_t state_cap = kDefaultStateCap,
                              std::size_t work_cap = std::size_t{1} << 22);

}  // namespace picwb
