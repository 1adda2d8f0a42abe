#include "picwb/automaton.hpp"

#include <algorithm>
#include <unordered_set>

#include "json.hpp"

namespace picwb {

void validate(const CellularAutomaton& a) {
  if (a.d < 1) throw Error("automaton dimension must be positive");
  validate_alphabet(a.sigma);
  validate_alphabet(a.gamma);
  std::set<std::string> g(a.gamma.begin(), a.gamma.end());
  for (auto& s : a.sigma)
    if (!g.count(s)) throw Error("input symbol '" + s + "' is not a state");
  for (auto& f : a.accepting)
    if (!g.count(f)) throw Error("accepting state '" + f + "' is not a state");
  for (auto& [key, res] : a.delta) {
    if (static_cast<int>(key.size()) != a.d + 1) throw Error("transition key has the wrong length");
    if (!g.count(key[0])) throw Error("transition from unknown state '" + key[0] + "'");
    for (std::size_t i = 1; i < key.size(); ++i)
      if (key[i] != kBorder && !g.count(key[i])) throw Error("transition reads unknown state '" + key[i] + "'");
    for (auto& r : res)
      if (!g.count(r)) throw Error("transition to unknown state '" + r + "'");
  }
}

namespace {

// Integer transition table: index = state*(k+1)^d + sum nbr_i*(k+1)^(d-1-i), border code k.
struct Table {
  int k, d;
  std::vector<std::vector<std::uint8_t>> next;
  explicit Table(const CellularAutomaton& a) : k(static_cast<int>(a.gamma.size())), d(a.d) {
    if (k > 255) throw Error("automata with more than 255 states are not supported explicitly");
    next.assign(static_cast<std::size_t>(k) * ipow(k + 1, d), {});
    auto code = [&](const std::string& s) {
      if (s == kBorder) return k;
      return static_cast<int>(std::find(a.gamma.begin(), a.gamma.end(), s) - a.gamma.begin());
    };
    for (auto& [key, res] : a.delta) {
      std::size_t idx = code(key[0]);
      for (int i = 1; i <= d; ++i) idx = idx * (k + 1) + code(key[i]);
      for (auto& r : res) next[idx].push_back(static_cast<std::uint8_t>(code(r)));
      std::sort(next[idx].begin(), next[idx].end());
    }
  }
};

using Config = std::string;  // one byte per cell, state codes

template <class F>
bool for_each_successor(const Table& t, int n, const Config& c, std::size_t& budget, F&& emit) {
  std::size_t cells = c.size();
  std::vector<const std::vector<std::uint8_t>*> opts(cells);
  std::vector<std::size_t> stride(t.d);
  for (int i = t.d - 1, s = 1; i >= 0; --i, s *= n) stride[i] = s;
  for (std::size_t r = 0; r < cells; ++r) {
    Cell a = cell_of_rank(r, t.d, n);
    std::size_t idx = static_cast<std::uint8_t>(c[r]);
    for (int i = 0; i < t.d; ++i) {
      int nb = a[i] < n ? static_cast<std::uint8_t>(c[r + stride[i]]) : t.k;
      idx = idx * (t.k + 1) + nb;
    }
    opts[r] = &t.next[idx];
    if (opts[r]->empty()) return true;
  }
  std::vector<std::size_t> pick(cells, 0);
  Config out(cells, 0);
  for (std::size_t r = 0; r < cells; ++r) out[r] = static_cast<char>((*opts[r])[0]);
  while (true) {
    if (budget == 0) return false;
    --budget;
    emit(out);
    std::size_t r = cells;
    while (r > 0) {
      --r;
      if (++pick[r] < opts[r]->size()) {
        out[r] = static_cast<char>((*opts[r])[pick[r]]);
        break;
      }
      pick[r] = 0;
      out[r] = static_cast<char>((*opts[r])[0]);
      if (r == 0) return true;
    }
    if (cells == 0) return true;
  }
}

Config initial(const CellularAutomaton& a, const Picture& p) {
  if (p.dim() != a.d) throw Error("picture dimension differs from the automaton");
  Config c(p.size(), 0);
  for (std::size_t r = 0; r < p.size(); ++r) {
    const std::string& s = p.at_rank(r);
    if (std::find(a.sigma.begin(), a.sigma.end(), s) == a.sigma.end())
      throw Error("alphabet mismatch: '" + s + "' is not an input symbol");
    c[r] = static_cast<char>(std::find(a.gamma.begin(), a.gamma.end(), s) - a.gamma.begin());
  }
  return c;
}

}  // namespace

std::vector<Picture> step_successors(const CellularAutomaton& a, const Picture& c, std::size_t cap) {
  validate(a);
  Table t(a);
  Config cfg(c.size(), 0);
  for (std::size_t r = 0; r < c.size(); ++r) {
    auto it = std::find(a.gamma.begin(), a.gamma.end(), c.at_rank(r));
    if (it == a.gamma.end()) throw Error("configuration symbol '" + c.at_rank(r) + "' is not a state");
    cfg[r] = static_cast<char>(it - a.gamma.begin());
  }
  auto alpha = std::make_shared<const Alphabet>(a.gamma);
  std::vector<Picture> out;
  std::size_t budget = cap;
  bool ok = for_each_successor(t, c.side(), cfg, budget, [&](const Config& x) {
    out.push_back(Picture::from_codes(a.d, c.side(), alpha, std::vector<int>(x.begin(), x.end())));
  });
  if (!ok) throw CapExceeded("successor enumeration exceeded the cap of " + std::to_string(cap));
  std::sort(out.begin(), out.end(), [](const Picture& x, const Picture& y) { return x.codes() < y.codes(); });
  return out;
}

bool accepts_in_time(const CellularAutomaton& a, const Picture& p, int T, std::size_t cap) {
  validate(a);
  if (T <= p.side()) throw Error("time bound T must exceed the side n");
  Table t(a);
  std::vector<std::uint8_t> acc(t.k, 0);
  for (int i = 0; i < t.k; ++i) acc[i] = a.accepting.count(a.gamma[i]) > 0;
  bool any_acc = std::any_of(acc.begin(), acc.end(), [](auto v) { return v; });
  if (!any_acc) return false;
  std::unordered_set<Config> layer{initial(a, p)};
  for (int step = 1; step < T; ++step) {
    std::unordered_set<Config> next;
    std::size_t budget = cap * 8;
    for (auto& c : layer) {
      bool ok = for_each_successor(t, p.side(), c, budget, [&](const Config& x) { next.insert(x); });
      if (!ok || next.size() > cap)
        throw CapExceeded("reachable configuration set exceeded the cap of " + std::to_string(cap));
    }
    if (next.empty()) return false;
    layer.swap(next);
  }
  for (auto& c : layer)
    if (acc[static_cast<std::uint8_t>(c[0])]) return true;
  return false;
}

bool accepts_linear(const CellularAutomaton& a, const Picture& p, int c, int c2, std::size_t cap) {
  return accepts_in_time(a, p, c * p.side() + c2, cap);
}

std::string automaton_to_json(const CellularAutomaton& a) {
  nlohmann::ordered_json j;
  j["d"] = a.d;
  j["sigma"] = a.sigma;
  j["gamma"] = a.gamma;
  j["accepting"] = std::vector<std::string>(a.accepting.begin(), a.accepting.end());
  j["delta"] = nlohmann::ordered_json::array();
  for (auto& [key, res] : a.delta) {
    nlohmann::ordered_json e;
    e["state"] = key[0];
    e["neighbors"] = std::vector<std::string>(key.begin() + 1, key.end());
    e["results"] = std::vector<std::string>(res.begin(), res.end());
    j["delta"].push_back(e);
  }
  return j.dump(2) + "\n";
}

CellularAutomaton automaton_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("automaton JSON: ") + e.what());
  }
  CellularAutomaton a;
  try {
    a.sigma = j.at("sigma").get<Alphabet>();
    a.gamma = j.at("gamma").get<Alphabet>();
    auto acc = j.at("accepting").get<std::vector<std::string>>();
    a.accepting.insert(acc.begin(), acc.end());
    a.d = j.contains("d") ? j["d"].get<int>() : 0;
    for (auto& e : j.at("delta")) {
      std::vector<std::string> key{e.at("state").get<std::string>()};
      auto nb = e.at("neighbors").get<std::vector<std::string>>();
      if (a.d == 0) a.d = static_cast<int>(nb.size());
      key.insert(key.end(), nb.begin(), nb.end());
      auto res = e.at("results").get<std::vector<std::string>>();
      a.delta[key].insert(res.begin(), res.end());
    }
    if (a.d == 0) a.d = 1;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("automaton JSON: ") + e.what());
  }
  validate(a);
  return a;
}

}  // namespace picwb
