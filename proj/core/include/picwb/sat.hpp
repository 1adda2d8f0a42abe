#pragma once
#include <cstdint>
#include <vector>

#include "picwb/circuit.hpp"

namespace picwb {

// CDCL solver. Literals are 2*var + sign (sign 1 = negated).
class SatSolver {
 public:
  enum class Result { Sat, Unsat, Unknown };

  int new_var();
  int num_vars() const { return static_cast<int>(assign_.size()); }
  bool add_clause(std::vector<int> lits);
  Result solve(const std::vector<int>& assumptions = {}, long conflict_budget = -1);
  bool model_value(int var) const { return model_[var] == 1; }
  long conflicts() const { return conflicts_; }

 private:
  struct Clause {
    std::vector<int> lits;
    bool learnt = false;
    bool deleted = false;
    int lbd = 0;
    double activity = 0;
  };
  struct Watch {
    int cref;
    int blocker;
  };

  int value(int lit) const {
    std::int8_t a = assign_[lit >> 1];
    return a < 0 ? -1 : (a ^ (lit & 1));
  }
  int level() const { return static_cast<int>(trail_lim_.size()); }
  void enqueue(int lit, int reason);
  int propagate();
  void analyze(int confl, std::vector<int>& out, int& bt_level, int& lbd);
  bool redundant(int lit);
  void backtrack(int lvl);
  int pick_branch();
  void bump_var(int v);
  void bump_clause(Clause& c);
  void attach(int cref);
  void reduce_db();
  void heap_insert(int v);
  void heap_up(int i);
  void heap_down(int i);
  int heap_pop();

  std::vector<Clause> clauses_;
  std::vector<std::vector<Watch>> watches_;
  std::vector<std::int8_t> assign_, phase_, model_;
  std::vector<int> level_, reason_, trail_, trail_lim_;
  std::vector<double> activity_;
  std::vector<int> heap_, heap_pos_;
  std::vector<std::uint8_t> seen_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1, cla_inc_ = 1;
  long conflicts_ = 0;
  bool unsat_ = false;
  int learnts_ = 0;
};

// Tseitin translation of circuit cones into a solver.
class CircuitEncoder {
 public:
  CircuitEncoder(const Circuit& c, SatSolver& s) : c_(c), s_(s) {}
  int encode(Lit root);  // solver literal equivalent to root
  void assert_true(Lit root);
  // Solver variable of circuit input i, or -1 if the input never reached the solver.
  int input_var(int index) const;
  bool input_value(int index) const;

 private:
  const Circuit& c_;
  SatSolver& s_;
  std::vector<int> var_of_node_;
  int true_var_ = -1;
};

}  // namespace picwb
