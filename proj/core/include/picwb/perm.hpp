#pragma once
#include <string>
#include <vector>

namespace picwb {

// alpha(i) = img[i-1]; products compose right to left: (alpha beta)(i) = alpha(beta(i)).
struct Permutation {
  std::vector<int> img;

  static Permutation identity(int d);
  static Permutation transposition(int d, int i, int j);
  static Permutation parse(const std::string& digits);
  int d() const { return static_cast<int>(img.size()); }
  int operator()(int i) const { return img[i - 1]; }
  Permutation operator*(const Permutation& o) const;
  Permutation inverse() const;
  Permutation swap_positions(int i, int j) const;  // alpha o (i j)
  bool is_identity() const;
  std::string str() const;
  bool operator==(const Permutation&) const = default;
  bool operator<(const Permutation& o) const { return img < o.img; }
};

std::vector<Permutation> all_permutations(int d);

// x_alpha = (x_alpha(1), ..., x_alpha(d))
template <class T>
std::vector<T> apply_permutation(const std::vector<T>& x, const Permutation& a);

struct PermTree {
  struct Node {
    Permutation perm;
    int parent = -1;
    int u = 0, v = 0;  // child = parent o (u v); u is the position of d in the parent
    std::vector<int> children;
  };
  int d = 1;
  std::vector<Node> nodes;  // nodes[0] is the identity

  int find(const Permutation& p) const;
  std::vector<int> dfs_order() const;
  std::vector<int> path(int node) const;  // edges from the root, as node indices excluding the root
};

inline constexpr int kMaxPermTreeDim = 6;
PermTree build_perm_tree(int d, int max_d = kMaxPermTreeDim);
std::string dump_perm_tree(const PermTree& t);
// Checks the alternation conditions on the root path of every node.
bool path_is_alternated(const PermTree& t, int node);

}  // namespace picwb

#include "picwb/picture.hpp"

namespace picwb {
template <class T>
std::vector<T> apply_permutation(const std::vector<T>& x, const Permutation& a) {
  if (x.size() != a.img.size()) throw Error("tuple length differs from the permutation size");
  std::vector<T> out;
  out.reserve(x.size());
  for (int i : a.img) out.push_back(x[i - 1]);
  return out;
}
}  // namespace picwb
