#include "picwb/circuit.hpp"

#include <algorithm>

#include "picwb/picture.hpp"

namespace picwb {

Circuit::Circuit() { nodes_.push_back({Kind::Const, 0, 0}); }

Lit Circuit::input(int index) {
  while (static_cast<int>(input_nodes_.size()) <= index) {
    nodes_.push_back({Kind::Input, static_cast<int>(input_nodes_.size()), 0});
    input_nodes_.push_back(static_cast<int>(nodes_.size()) - 1);
  }
  num_inputs_ = std::max(num_inputs_, index + 1);
  return 2 * input_nodes_[index];
}

int Circuit::input_node(int index) const {
  return index < static_cast<int>(input_nodes_.size()) ? input_nodes_[index] : -1;
}

Lit Circuit::make(Kind k, int a, int b) {
  std::uint64_t key = (static_cast<std::uint64_t>(k == Kind::Xor) << 63) |
                      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 31) | static_cast<std::uint32_t>(b);
  auto [it, fresh] = table_.try_emplace(key, static_cast<int>(nodes_.size()));
  if (fresh) nodes_.push_back({k, a, b});
  return 2 * it->second;
}

Lit Circuit::mk_and(Lit a, Lit b) {
  if (a == kFalse || b == kFalse) return kFalse;
  if (a == kTrue) return b;
  if (b == kTrue) return a;
  if (a == b) return a;
  if (a == lnot(b)) return kFalse;
  if (a > b) std::swap(a, b);
  return make(Kind::And, a, b);
}

Lit Circuit::mk_xor(Lit a, Lit b) {
  bool flip = (a & 1) ^ (b & 1);
  a &= ~1;
  b &= ~1;
  Lit r;
  if (a == b)
    r = kFalse;
  else if (a == kTrue)
    r = lnot(b);
  else if (b == kTrue)
    r = lnot(a);
  else {
    if (a > b) std::swap(a, b);
    r = make(Kind::Xor, a, b);
  }
  return flip ? lnot(r) : r;
}

Lit Circuit::mk_and(const std::vector<Lit>& xs) {
  std::vector<Lit> v;
  for (Lit x : xs) {
    if (x == kFalse) return kFalse;
    if (x != kTrue) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i + 1] == lnot(v[i])) return kFalse;
  if (v.empty()) return kTrue;
  while (v.size() > 1) {
    std::vector<Lit> w;
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) w.push_back(mk_and(v[i], v[i + 1]));
    if (v.size() % 2) w.push_back(v.back());
    v.swap(w);
  }
  return v[0];
}

Lit Circuit::mk_or(const std::vector<Lit>& xs) {
  std::vector<Lit> n;
  n.reserve(xs.size());
  for (Lit x : xs) n.push_back(lnot(x));
  return lnot(mk_and(n));
}

Lit Circuit::mk_xor(const std::vector<Lit>& xs) {
  Lit r = kFalse;
  for (Lit x : xs) r = mk_xor(r, x);
  return r;
}

Lit Circuit::mk_exactly_one(const std::vector<Lit>& xs) {
  // running "at least one" and "at most one" over a prefix
  Lit some = kFalse, bad = kFalse;
  for (Lit x : xs) {
    bad = mk_or(bad, mk_and(some, x));
    some = mk_or(some, x);
  }
  return mk_and(some, lnot(bad));
}

bool Circuit::eval(Lit root, const std::vector<std::uint8_t>& inputs) const { return eval(std::vector<Lit>{root}, inputs)[0]; }

std::vector<std::uint8_t> Circuit::eval(const std::vector<Lit>& roots, const std::vector<std::uint8_t>& inputs) const {
  int top = 0;
  for (Lit r : roots) top = std::max(top, r >> 1);
  std::vector<std::uint8_t> val(top + 1, 0);
  for (int i = 0; i <= top; ++i) {
    const Node& nd = nodes_[i];
    switch (nd.kind) {
      case Kind::Const: val[i] = 1; break;
      case Kind::Input:
        if (nd.a >= static_cast<int>(inputs.size())) throw Error("circuit input out of range");
        val[i] = inputs[nd.a] & 1;
        break;
      case Kind::And: val[i] = (val[nd.a >> 1] ^ (nd.a & 1)) & (val[nd.b >> 1] ^ (nd.b & 1)); break;
      case Kind::Xor: val[i] = (val[nd.a >> 1] ^ (nd.a & 1)) ^ (val[nd.b >> 1] ^ (nd.b & 1)); break;
    }
  }
  std::vector<std::uint8_t> out;
  out.reserve(roots.size());
  for (Lit r : roots) out.push_back(val[r >> 1] ^ (r & 1));
  return out;
}

std::vector<std::uint64_t> Circuit::eval64(const std::vector<Lit>& roots, const std::vector<std::uint64_t>& inputs) const {
  int top = 0;
  for (Lit r : roots) top = std::max(top, r >> 1);
  std::vector<std::uint64_t> val(top + 1, 0);
  auto get = [&](Lit l) { return val[l >> 1] ^ (l & 1 ? ~std::uint64_t{0} : 0); };
  for (int i = 0; i <= top; ++i) {
    const Node& nd = nodes_[i];
    switch (nd.kind) {
      case Kind::Const: val[i] = ~std::uint64_t{0}; break;
      case Kind::Input: val[i] = nd.a < static_cast<int>(inputs.size()) ? inputs[nd.a] : 0; break;
      case Kind::And: val[i] = get(nd.a) & get(nd.b); break;
      case Kind::Xor: val[i] = get(nd.a) ^ get(nd.b); break;
    }
  }
  std::vector<std::uint64_t> out;
  for (Lit r : roots) out.push_back(get(r));
  return out;
}

std::vector<int> Circuit::support(Lit root) const {
  int top = root >> 1;
  std::vector<std::uint8_t> need(top + 1, 0);
  need[top] = 1;
  std::vector<int> out;
  for (int i = top; i > 0; --i) {
    if (!need[i]) continue;
    const Node& nd = nodes_[i];
    if (nd.kind == Kind::Input) out.push_back(nd.a);
    if (nd.kind == Kind::And || nd.kind == Kind::Xor) need[nd.a >> 1] = need[nd.b >> 1] = 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

Lit Circuit::import(const Circuit& other, Lit root, const std::vector<Lit>& input_map) {
  return import(other, std::vector<Lit>{root}, input_map)[0];
}

std::vector<Lit> Circuit::import(const Circuit& other, const std::vector<Lit>& roots, const std::vector<Lit>& input_map) {
  int top = 0;
  for (Lit r : roots) top = std::max(top, r >> 1);
  std::vector<std::uint8_t> need(top + 1, 0);
  for (Lit r : roots) need[r >> 1] = 1;
  for (int i = top; i > 0; --i) {
    if (!need[i]) continue;
    const Node& nd = other.nodes_[i];
    if (nd.kind == Kind::And || nd.kind == Kind::Xor) need[nd.a >> 1] = need[nd.b >> 1] = 1;
  }
  std::vector<Lit> map(top + 1, kTrue);
  for (int i = 1; i <= top; ++i) {
    if (!need[i]) continue;
    const Node& nd = other.nodes_[i];
    auto m = [&](Lit l) { return map[l >> 1] ^ (l & 1); };
    switch (nd.kind) {
      case Kind::Const: break;
      case Kind::Input:
        if (nd.a >= static_cast<int>(input_map.size())) throw Error("import: unmapped circuit input");
        map[i] = input_map[nd.a];
        break;
      case Kind::And: map[i] = mk_and(m(nd.a), m(nd.b)); break;
      case Kind::Xor: map[i] = mk_xor(m(nd.a), m(nd.b)); break;
    }
  }
  std::vector<Lit> out;
  for (Lit r : roots) out.push_back(map[r >> 1] ^ (r & 1));
  return out;
}

}  // namespace picwb
