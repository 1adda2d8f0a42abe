#pragma once
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "picwb/automaton.hpp"
#include "picwb/circuit.hpp"
#include "picwb/logic.hpp"
#include "picwb/picture.hpp"
#include "picwb/symbolic_automaton.hpp"
#include "picwb/tiling.hpp"

namespace picwb {

using Env = std::map<std::string, int>;
using Interpretation = std::map<std::string, Relation>;

// Grounds formulas over a finite structure into a circuit. Guessed symbols become
// circuit inputs; input index = first + lexicographic rank of the tuple.
class Grounder {
 public:
  Grounder(const FiniteStructure& s, Circuit& c);
  void declare(const std::string& name, int arity, int first_input);
  Lit ground(const FormulaPtr& f, const Env& env = {});

 private:
  struct Guessed {
    int arity, first;
  };
  int term_value(const Term& t);
  Lit go(const Formula& f);
  const std::vector<int>& function(int dim);
  const Relation& relation(const std::string& name);

  const FiniteStructure& s_;
  Circuit& c_;
  std::map<std::string, Guessed> guessed_;
  std::map<std::string, const Relation*> rel_cache_;
  std::map<int, const std::vector<int>*> fun_cache_;
  std::vector<std::pair<std::string, int>> env_;
  std::vector<int> tuple_;
};

bool eval_fo(const FiniteStructure& s, const FormulaPtr& f, const Env& env = {});

struct CheckOptions {
  std::size_t cap = 24;  // bound on the sum of m^r over guessed symbols (brute force only)
  int jobs = 1;
};

// Brute force over relation bit-vectors in increasing numeric order.
bool check_eso(const FiniteStructure& s, const EsoSentence& phi, const CheckOptions& opt = {});
std::optional<Interpretation> eso_witness(const FiniteStructure& s, const EsoSentence& phi, const CheckOptions& opt = {});
// Same semantics through grounding and the SAT solver; no cap.
bool check_eso_sat(const FiniteStructure& s, const EsoSentence& phi);
std::optional<Interpretation> eso_witness_sat(const FiniteStructure& s, const EsoSentence& phi);

FiniteStructure sentence_structure(const Picture& p, const EsoSentence& phi);

bool mirror_member(const Picture& p);
bool sym_member(const Picture& p);

enum class EsoEngine { Brute, Sat };

struct AutomatonDef {
  CellularAutomaton automaton;
  int c = 1, c2 = 1;
};
struct SymbolicAutomatonDef {
  SymbolicAutomaton automaton;
  int c = 1, c2 = 1;
};
struct SentenceDef {
  EsoSentence sentence;
  Encoding encoding = Encoding::Coordinate;
  EsoEngine engine = EsoEngine::Sat;
};
struct OracleDef {
  std::string name;  // "mirror" or "sym"
};
struct PictureListDef {
  std::vector<Picture> pictures;
};
using LanguageDef = std::variant<TilingSystem, AutomatonDef, SymbolicAutomatonDef, SentenceDef, OracleDef, PictureListDef>;

bool member(const LanguageDef& def, const Picture& p);
std::string describe(const LanguageDef& def);

struct Counterexample {
  Picture picture;
  bool verdict_a = false, verdict_b = false;
};

struct EquivOptions {
  std::size_t cap = std::size_t{1} << 20;  // pictures per side
  int jobs = 1;
};

std::optional<Counterexample> equivalent_up_to(const LanguageDef& a, const LanguageDef& b, int d, const Alphabet& sigma,
                                               int max_n, const EquivOptions& opt = {});

}  // namespace picwb
