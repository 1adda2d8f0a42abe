#pragma once
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace picwb {

// Literal over circuit nodes: 2*node + negation bit. Node 0 is the constant true.
using Lit = int;
inline constexpr Lit kTrue = 0;
inline constexpr Lit kFalse = 1;
inline Lit lnot(Lit l) { return l ^ 1; }
inline Lit lcond(Lit l, bool positive) { return positive ? l : lnot(l); }

class Circuit {
 public:
  enum class Kind : std::uint8_t { Const, Input, And, Xor };
  struct Node {
    Kind kind;
    int a = 0, b = 0;  // literals for And/Xor, input index for Input
  };

  Circuit();
  Lit input(int index);
  Lit fresh_input() { return input(num_inputs_); }
  int num_inputs() const { return num_inputs_; }
  Lit constant(bool v) const { return v ? kTrue : kFalse; }

  Lit mk_and(Lit a, Lit b);
  Lit mk_or(Lit a, Lit b) { return lnot(mk_and(lnot(a), lnot(b))); }
  Lit mk_xor(Lit a, Lit b);
  Lit mk_iff(Lit a, Lit b) { return lnot(mk_xor(a, b)); }
  Lit mk_implies(Lit a, Lit b) { return mk_or(lnot(a), b); }
  Lit mk_ite(Lit c, Lit t, Lit e) { return mk_or(mk_and(c, t), mk_and(lnot(c), e)); }
  Lit mk_and(const std::vector<Lit>& xs);
  Lit mk_or(const std::vector<Lit>& xs);
  Lit mk_xor(const std::vector<Lit>& xs);
  Lit mk_exactly_one(const std::vector<Lit>& xs);

  const Node& node(int i) const { return nodes_[i]; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int input_node(int index) const;

  bool eval(Lit root, const std::vector<std::uint8_t>& inputs) const;
  // Evaluates many roots over shared work; values indexed like roots.
  std::vector<std::uint8_t> eval(const std::vector<Lit>& roots, const std::vector<std::uint8_t>& inputs) const;
  // Bit-parallel evaluation: 64 assignments per word.
  std::vector<std::uint64_t> eval64(const std::vector<Lit>& roots, const std::vector<std::uint64_t>& inputs) const;
  std::vector<int> support(Lit root) const;  // input indices in the cone of root, ascending
  // Copies the cone of root from another circuit, mapping its input i to input_map[i].
  Lit import(const Circuit& other, Lit root, const std::vector<Lit>& input_map);
  std::vector<Lit> import(const Circuit& other, const std::vector<Lit>& roots, const std::vector<Lit>& input_map);

 private:
  Lit make(Kind k, int a, int b);
  std::vector<Node> nodes_;
  std::vector<int> input_nodes_;
  int num_inputs_ = 0;
  std::unordered_map<std::uint64_t, int> table_;
};

}  // namespace picwb
