#include "picwb/generators.hpp"

#include <functional>
#include <string>

namespace picwb {

TilingSystem random_tiling_system(std::mt19937_64& rng, int d, int gamma, int sigma, double density) {
  std::bernoulli_distribution keep(density);
  TilingSystem ts;
  for (int i = 0; i < sigma; ++i) ts.sigma.push_back(std::string(1, static_cast<char>('a' + i)));
  for (int i = 0; i < gamma; ++i) {
    ts.gamma.push_back("g" + std::to_string(i));
    ts.pi[ts.gamma.back()] = ts.sigma[i < sigma ? i : rng() % sigma];
  }
  Alphabet ext = ts.gamma;
  ext.push_back("#");
  for (int j = 1; j <= d; ++j) {
    TileSet t{j, {{"#", "#"}}};
    for (auto& u : ext)
      for (auto& v : ext)
        if (!(u == "#" && v == "#") && keep(rng)) t.tiles.insert({u, v});
    ts.deltas.push_back(std::move(t));
  }
  return ts;
}

CellularAutomaton random_automaton(std::mt19937_64& rng, int d, int k, int sigma) {
  CellularAutomaton a;
  a.d = d;
  for (int i = 0; i < k; ++i) a.gamma.push_back("s" + std::to_string(i));
  for (int i = 0; i < sigma; ++i) a.sigma.push_back(a.gamma[i]);
  for (auto& g : a.gamma)
    if (rng() % 2) a.accepting.insert(g);
  Alphabet ext = a.gamma;
  ext.push_back("#");
  std::vector<std::string> key(d + 1);
  std::function<void(int)> rec = [&](int i) {
    if (i > d) {
      std::set<std::string> res;
      for (auto& g : a.gamma)
        if (rng() % 3 == 0) res.insert(g);
      if (!res.empty()) a.delta[key] = res;
      return;
    }
    for (auto& s : (i == 0 ? a.gamma : ext)) {
      key[i] = s;
      rec(i + 1);
    }
  };
  rec(0);
  return a;
}

namespace {

std::string combine(std::mt19937_64& rng, std::vector<std::string> parts) {
  static const char* ops[] = {"and", "or", "implies", "iff", "xor"};
  std::uniform_int_distribution<int> op(0, 4);
  while (parts.size() > 1) {
    std::string a = parts.back();
    parts.pop_back();
    std::string b = parts.back();
    parts.pop_back();
    std::string f = std::string("(") + ops[op(rng)] + " " + a + " " + b + ")";
    if (rng() % 4 == 0) f = "(not " + f + ")";
    parts.insert(parts.begin(), f);
  }
  return parts[0];
}

}  // namespace

EsoSentence random_word_sentence(std::mt19937_64& rng, int atoms) {
  static const std::vector<std::string> pool{"(R x y)", "(R y x)", "(R (suc x) y)", "(R x (suc y))", "(Q_a x)",
                                             "(Q_a y)", "(Q_b x)", "(= x y)",       "(< x y)",       "(min x)",
                                             "(max y)", "(min y)", "(max x)"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<std::string> parts;
  for (int i = 0; i < atoms; ++i) parts.push_back(pool[pick(rng)]);
  return parse_sentence("(exists-rel ((R 2)) (forall (x y) " + combine(rng, parts) + "))",
                        Signature{Encoding::Coordinate, 1, {"a", "b"}});
}

CardinalitySentence random_cardinality(std::mt19937_64& rng, int d, int count, int max_k) {
  std::vector<std::string> thresholds;
  for (int t = 0; t < count; ++t) {
    std::vector<std::string> atoms;
    int natoms = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < natoms; ++i) {
      int dim = 1 + static_cast<int>(rng() % d);
      std::string x = "x";
      if (rng() % 3 == 0) x = "(suc_" + std::to_string(dim) + " x)";
      switch (rng() % 4) {
        case 0: atoms.push_back("(min_" + std::to_string(dim) + " " + x + ")"); break;
        case 1: atoms.push_back("(max_" + std::to_string(dim) + " " + x + ")"); break;
        default: atoms.push_back(std::string("(Q_") + (rng() % 2 ? "1" : "0") + " " + x + ")");
      }
    }
    int k = 1 + static_cast<int>(rng() % max_k);
    thresholds.push_back("(atleast " + std::to_string(k) + " x " + combine(rng, atoms) + ")");
  }
  return parse_cardinality(combine(rng, thresholds), Signature{Encoding::Pixel, d, {"0", "1"}});
}

}  // namespace picwb
