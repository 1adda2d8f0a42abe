#pragma once
#include <map>
#include <set>
#include <string>
#include <vector>

#include "picwb/picture.hpp"

namespace picwb {

struct CellularAutomaton {
  int d = 1;
  Alphabet sigma, gamma;
  std::set<std::string> accepting;
  // key: (state, neighbor 1, ..., neighbor d), neighbors may be "#"; missing keys block
  std::map<std::vector<std::string>, std::set<std::string>> delta;
};

void validate(const CellularAutomaton& a);

inline constexpr std::size_t kDefaultConfigCap = std::size_t{1} << 20;

std::vector<Picture> step_successors(const CellularAutomaton& a, const Picture& c,
                                     std::size_t cap = kDefaultConfigCap);
bool accepts_in_time(const CellularAutomaton& a, const Picture& p, int T, std::size_t cap = kDefaultConfigCap);
bool accepts_linear(const CellularAutomaton& a, const Picture& p, int c, int c2, std::size_t cap = kDefaultConfigCap);

std::string automaton_to_json(const CellularAutomaton& a);
CellularAutomaton automaton_from_json(const std::string& text);

}  // namespace picwb
