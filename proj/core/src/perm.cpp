#include "picwb/perm.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace picwb {

Permutation Permutation::identity(int d) {
  Permutation p;
  p.img.resize(d);
  std::iota(p.img.begin(), p.img.end(), 1);
  return p;
}

Permutation Permutation::transposition(int d, int i, int j) { return identity(d).swap_positions(i, j); }

Permutation Permutation::parse(const std::string& digits) {
  Permutation p;
  for (char c : digits) {
    if (c < '1' || c > '9') throw Error("permutation images must be digits 1..9");
    p.img.push_back(c - '0');
  }
  std::vector<int> s = p.img;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != static_cast<int>(i) + 1) throw Error("'" + digits + "' is not a permutation");
  return p;
}

Permutation Permutation::operator*(const Permutation& o) const {
  if (d() != o.d()) throw Error("permutation sizes differ");
  Permutation r;
  for (int i : o.img) r.img.push_back(img[i - 1]);
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.img.resize(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) r.img[img[i] - 1] = static_cast<int>(i) + 1;
  return r;
}

Permutation Permutation::swap_positions(int i, int j) const {
  Permutation r = *this;
  std::swap(r.img[i - 1], r.img[j - 1]);
  return r;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < img.size(); ++i)
    if (img[i] != static_cast<int>(i) + 1) return false;
  return true;
}

std::string Permutation::str() const {
  std::string s;
  for (int i : img) s += std::to_string(i);
  return s;
}

std::vector<Permutation> all_permutations(int d) {
  std::vector<Permutation> out;
  Permutation p = Permutation::identity(d);
  do out.push_back(p);
  while (std::next_permutation(p.img.begin(), p.img.end()));
  return out;
}

int PermTree::find(const Permutation& p) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].perm == p) return static_cast<int>(i);
  return -1;
}

std::vector<int> PermTree::dfs_order() const {
  std::vector<int> out;
  std::function<void(int)> go = [&](int i) {
    out.push_back(i);
    for (int c : nodes[i].children) go(c);
  };
  if (!nodes.empty()) go(0);
  return out;
}

std::vector<int> PermTree::path(int node) const {
  std::vector<int> out;
  for (int i = node; i > 0; i = nodes[i].parent) out.push_back(i);
  std::reverse(out.begin(), out.end());
  return out;
}

static int position_of(const Permutation& p, int value) {
  return static_cast<int>(std::find(p.img.begin(), p.img.end(), value) - p.img.begin()) + 1;
}

PermTree build_perm_tree(int d, int max_d) {
  if (d < 1 || d > max_d) throw Error("perm tree dimension must lie in [1, " + std::to_string(max_d) + "]");
  PermTree t;
  t.d = 1;
  t.nodes.push_back({Permutation::identity(1), -1, 0, 0, {}});
  for (int k = 2; k <= d; ++k) {
    PermTree n;
    n.d = k;
    // (a)/(b) lift: rename values by +1 and put 1 in front
    for (auto& nd : t.nodes) {
      Permutation p;
      p.img.push_back(1);
      for (int v : nd.perm.img) p.img.push_back(v + 1);
      n.nodes.push_back({p, nd.parent, nd.u ? nd.u + 1 : 0, nd.v ? nd.v + 1 : 0, nd.children});
    }
    std::size_t lifted = n.nodes.size();
    for (std::size_t b = 0; b < lifted; ++b) {
      // (c) beta -> beta with values 1 and k exchanged
      const Permutation beta = n.nodes[b].perm;
      int u = position_of(beta, k), v = position_of(beta, 1);
      int c = static_cast<int>(n.nodes.size());
      n.nodes.push_back({beta.swap_positions(u, v), static_cast<int>(b), u, v, {}});
      n.nodes[b].children.push_back(c);
      // (d) then values k and i exchanged, i = 2..k-1
      const Permutation gamma = n.nodes[c].perm;
      for (int i = 2; i <= k - 1; ++i) {
        int gu = position_of(gamma, k), gv = position_of(gamma, i);
        int e = static_cast<int>(n.nodes.size());
        n.nodes.push_back({gamma.swap_positions(gu, gv), c, gu, gv, {}});
        n.nodes[c].children.push_back(e);
      }
    }
    t = std::move(n);
  }
  return t;
}

std::string dump_perm_tree(const PermTree& t) {
  std::string out;
  for (int i : t.dfs_order()) {
    const auto& nd = t.nodes[i];
    out += "perm " + nd.perm.str() + " parent ";
    if (nd.parent < 0)
      out += "- edge -\n";
    else
      out += t.nodes[nd.parent].perm.str() + " edge (" + std::to_string(nd.u) + "," + std::to_string(nd.v) + ")\n";
  }
  return out;
}

bool path_is_alternated(const PermTree& t, int node) {
  auto p = t.path(node);
  Permutation cur = Permutation::identity(t.d);
  int prev_u = 0, prev_v = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& nd = t.nodes[p[k]];
    if (nd.u == nd.v) return false;
    if (k == 0 && nd.u != t.d && nd.v != t.d) return false;
    if (k > 0) {
      bool share_u = nd.u == prev_u || nd.u == prev_v, share_v = nd.v == prev_u || nd.v == prev_v;
      if (share_u == share_v) return false;  // exactly one common element
      if (nd.u != prev_v) return false;      // chained as (.. u_i)(u_i u_{i+1})
    }
    cur = cur.swap_positions(nd.u, nd.v);
    if (!(cur == nd.perm)) return false;
    prev_u = nd.u;
    prev_v = nd.v;
  }
  return true;
}

}  // namespace picwb
