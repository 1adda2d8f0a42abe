#pragma once
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "picwb/picture.hpp"

namespace picwb {

// A variable under a chain of successors; sucs[0] is applied first.
// Pixel signatures use dimension indices 1..d, coordinate signatures use 0.
struct Term {
  std::string var;
  std::vector<int> sucs;
  bool operator==(const Term&) const = default;
  bool operator<(const Term& o) const { return std::tie(var, sucs) < std::tie(o.var, o.sucs); }
};
Term tvar(const std::string& v);
Term tsuc(Term t, int dim = 0);

enum class Op { True, False, Atom, Eq, Lt, Not, And, Or, Implies, Iff, Xor, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op;
  std::string sym;                // Atom
  std::vector<Term> args;         // Atom, Eq, Lt
  std::vector<FormulaPtr> kids;   // connectives and quantifiers
  std::vector<std::string> vars;  // quantifiers
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);
bool is_atomic(const Formula& f);

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_bool(bool v);
FormulaPtr atom(const std::string& sym, std::vector<Term> args);
FormulaPtr f_eq(Term a, Term b);
FormulaPtr f_lt(Term a, Term b);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(std::vector<FormulaPtr> fs);
FormulaPtr f_or(std::vector<FormulaPtr> fs);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_xor(FormulaPtr a, FormulaPtr b);
FormulaPtr f_forall(std::vector<std::string> vars, FormulaPtr f);
FormulaPtr f_exists(std::vector<std::string> vars, FormulaPtr f);

struct Signature {
  Encoding kind = Encoding::Coordinate;
  int d = 1;
  Alphabet alphabet;
};

struct GuessedSymbol {
  std::string name;
  int arity;
  bool operator==(const GuessedSymbol&) const = default;
};

struct EsoSentence {
  Signature sig;
  std::vector<GuessedSymbol> guessed;
  FormulaPtr body;
};

bool structurally_equal(const EsoSentence& a, const EsoSentence& b);

// Built-in symbol classification for a signature.
bool is_input_symbol(const std::string& sym);  // Q_s
std::string input_letter(const std::string& sym);
bool is_builtin_atom(const Signature& sig, const std::string& sym, int* arity = nullptr);

EsoSentence parse_sentence(const std::string& text, const Signature& sig);
FormulaPtr parse_formula(const std::string& text, const Signature& sig,
                         const std::vector<GuessedSymbol>& guessed = {});
std::string render_term(const Term& t, const Signature& sig);
std::string render_formula(const FormulaPtr& f, const Signature& sig);
std::string render_sentence(const EsoSentence& s);
// Throws with a description when the sentence mentions undeclared symbols or has free variables.
void validate_sentence(const EsoSentence& s);

struct FragmentDescriptor {
  int var_count = 0;
  bool prenex_universal = false;
  int prefix_length = 0;
  int max_arity = 0;
  bool sorted = false;
};
FragmentDescriptor classify_fragment(const EsoSentence& s);
bool is_sorted(const EsoSentence& s, int k, int d);

// Prenex universal decomposition: variables in order and the matrix.
std::optional<std::pair<std::vector<std::string>, FormulaPtr>> split_universal(const FormulaPtr& body);
bool quantifier_free(const FormulaPtr& f);
std::set<std::string> free_vars(const FormulaPtr& f);
std::vector<std::string> bound_vars(const FormulaPtr& f);
// Rebuilds f with every atomic subformula (Atom, Eq, Lt) replaced by fn's result.
FormulaPtr map_atoms(const FormulaPtr& f, const std::function<FormulaPtr(const Formula&)>& fn);
void visit_atoms(const FormulaPtr& f, const std::function<void(const Formula&)>& fn);
std::size_t formula_size(const FormulaPtr& f);
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);
std::set<std::string> symbol_names(const EsoSentence& s);

}  // namespace picwb
