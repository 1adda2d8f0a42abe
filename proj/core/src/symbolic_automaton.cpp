#include "picwb/symbolic_automaton.hpp"

#include <algorithm>
#include <map>

#include "picwb/sat.hpp"

namespace picwb {

bool symbolic_accepts_in_time(const SymbolicAutomaton& a, const Picture& p, int T) {
  if (p.dim() != a.d) throw Error("picture dimension differs from the automaton");
  if (T <= p.side()) throw Error("time bound T must exceed the side n");
  const int n = p.side(), W = a.width;
  const std::size_t cells = p.size();
  Circuit c;
  int next_input = 0;
  std::vector<std::vector<Lit>> cur(cells, std::vector<Lit>(W));
  for (std::size_t r = 0; r < cells; ++r) {
    auto it = std::find(a.sigma.begin(), a.sigma.end(), p.at_rank(r));
    if (it == a.sigma.end()) throw Error("alphabet mismatch: '" + p.at_rank(r) + "' is not an input symbol");
    const auto& code = a.letter_code[it - a.sigma.begin()];
    for (int b = 0; b < W; ++b) cur[r][b] = c.constant(code[b]);
  }
  std::vector<std::size_t> stride(a.d);
  for (int i = a.d - 1, s = 1; i >= 0; --i, s *= n) stride[i] = s;
  std::vector<Lit> constraints;
  std::vector<Lit> map(a.delta_inputs());
  for (int t = 1; t < T; ++t) {
    std::vector<std::vector<Lit>> nxt(cells, std::vector<Lit>(W));
    for (auto& v : nxt)
      for (auto& l : v) l = c.input(next_input++);
    for (std::size_t r = 0; r < cells; ++r) {
      Cell x = cell_of_rank(r, a.d, n);
      for (int b = 0; b < W; ++b) map[b] = cur[r][b];
      for (int i = 0; i < a.d; ++i) {
        bool border = x[i] == n;
        map[a.nbr(i)] = c.constant(border);
        for (int b = 0; b < W; ++b) map[a.nbr(i) + 1 + b] = border ? kFalse : cur[r + stride[i]][b];
      }
      for (int b = 0; b < W; ++b) map[a.next_offset() + b] = nxt[r][b];
      Lit step = c.import(a.circuit, a.delta, map);
      if (step == kFalse) return false;
      constraints.push_back(step);
    }
    cur.swap(nxt);
  }
  std::vector<Lit> amap(cur[0].begin(), cur[0].end());
  Lit acc = c.import(a.circuit, a.accept, amap);
  if (acc == kFalse) return false;
  constraints.push_back(acc);
  Lit root = c.mk_and(constraints);
  if (root == kTrue || root == kFalse) return root == kTrue;
  SatSolver s;
  CircuitEncoder enc(c, s);
  enc.assert_true(root);
  return s.solve() == SatSolver::Result::Sat;
}

bool symbolic_accepts_linear(const SymbolicAutomaton& a, const Picture& p, int c, int c2) {
  return symbolic_accepts_in_time(a, p, c * p.side() + c2);
}

static std::vector<Lit> bits_equal(Circuit& c, int offset, int width, int value) {
  std::vector<Lit> out;
  for (int b = 0; b < width; ++b) out.push_back(lcond(c.input(offset + b), (value >> b) & 1));
  return out;
}

SymbolicAutomaton to_symbolic(const CellularAutomaton& a) {
  validate(a);
  SymbolicAutomaton s;
  s.d = a.d;
  s.sigma = a.sigma;
  int k = static_cast<int>(a.gamma.size());
  s.width = 1;
  while ((1 << s.width) < k) ++s.width;
  auto code = [&](const std::string& x) { return static_cast<int>(std::find(a.gamma.begin(), a.gamma.end(), x) - a.gamma.begin()); };
  for (auto& l : a.sigma) {
    std::vector<std::uint8_t> v(s.width);
    for (int b = 0; b < s.width; ++b) v[b] = (code(l) >> b) & 1;
    s.letter_code.push_back(v);
  }
  Circuit& c = s.circuit;
  for (int i = 0; i < s.delta_inputs(); ++i) c.input(i);
  std::vector<Lit> options;
  for (auto& [key, res] : a.delta) {
    if (res.empty()) continue;
    std::vector<Lit> guard = bits_equal(c, 0, s.width, code(key[0]));
    for (int i = 0; i < a.d; ++i) {
      if (key[i + 1] == kBorder) {
        guard.push_back(c.input(s.nbr(i)));
      } else {
        guard.push_back(lnot(c.input(s.nbr(i))));
        auto eq = bits_equal(c, s.nbr(i) + 1, s.width, code(key[i + 1]));
        guard.insert(guard.end(), eq.begin(), eq.end());
      }
    }
    std::vector<Lit> targets;
    for (auto& r : res) targets.push_back(c.mk_and(bits_equal(c, s.next_offset(), s.width, code(r))));
    guard.push_back(c.mk_or(targets));
    options.push_back(c.mk_and(guard));
  }
  s.delta = c.mk_or(options);
  std::vector<Lit> acc;
  for (auto& f : a.accepting) acc.push_back(c.mk_and(bits_equal(c, 0, s.width, code(f))));
  s.accept = c.mk_or(acc);
  return s;
}

CellularAutomaton to_explicit(const SymbolicAutomaton& a, std::size_t state_cap, std::size_t work_cap) {
  const int W = a.width, D = a.d;
  SatSolver solver;
  CircuitEncoder enc(a.circuit, solver);
  int root = enc.encode(a.delta);
  solver.add_clause({root});
  auto var = [&](int input) {
    int v = enc.input_var(input);
    if (v < 0) {
      v = solver.new_var();
    }
    return v;
  };
  std::vector<int> vars(a.delta_inputs());
  for (int i = 0; i < a.delta_inputs(); ++i) vars[i] = var(i);

  using Bits = std::vector<std::uint8_t>;
  std::map<Bits, int> index;
  std::vector<Bits> states;
  auto intern = [&](const Bits& b) {
    auto [it, fresh] = index.emplace(b, static_cast<int>(states.size()));
    if (fresh) {
      states.push_back(b);
      if (states.size() > state_cap)
        throw CapExceeded("explicit automaton exceeds the state cap of " + std::to_string(state_cap));
    }
    return it->second;
  };
  for (auto& l : a.letter_code) intern(l);
  if (states.size() != a.letter_code.size()) throw Error("letters must have distinct state codes");

  std::map<std::pair<int, std::vector<int>>, std::set<int>> table;
  std::size_t work = 0;
  // Re-scan until no new states appear; each pass covers neighborhoods over the states known so far.
  std::set<std::pair<int, std::vector<int>>> visited;
  while (true) {
    std::size_t known = states.size();
    bool grew = false;
    for (int s = 0; s < static_cast<int>(known); ++s) {
      std::vector<int> nb(D, -1);
      while (true) {
        auto key = std::make_pair(s, nb);
        if (!visited.count(key)) {
          visited.insert(key);
          if (++work > work_cap) throw CapExceeded("explicit automaton construction exceeds the work cap");
          std::vector<int> assume;
          for (int b = 0; b < W; ++b) assume.push_back(2 * vars[b] + (states[s][b] ? 0 : 1));
          for (int i = 0; i < D; ++i) {
            assume.push_back(2 * vars[a.nbr(i)] + (nb[i] < 0 ? 0 : 1));
            for (int b = 0; b < W; ++b)
              assume.push_back(2 * vars[a.nbr(i) + 1 + b] + (nb[i] >= 0 && states[nb[i]][b] ? 0 : 1));
          }
          int act = solver.new_var();
          assume.push_back(2 * act);
          auto& targets = table[key];
          while (solver.solve(assume) == SatSolver::Result::Sat) {
            Bits nxt(W);
            std::vector<int> block{2 * act + 1};
            for (int b = 0; b < W; ++b) {
              nxt[b] = solver.model_value(vars[a.next_offset() + b]);
              block.push_back(2 * vars[a.next_offset() + b] + (nxt[b] ? 1 : 0));
            }
            solver.add_clause(block);
            std::size_t before = states.size();
            targets.insert(intern(nxt));
            grew |= states.size() > before;
            if (++work > work_cap) throw CapExceeded("explicit automaton construction exceeds the work cap");
          }
          solver.add_clause({2 * act + 1});
          if (targets.empty()) table.erase(key);
        }
        int i = D - 1;
        while (i >= 0) {
          if (++nb[i] < static_cast<int>(known)) break;
          nb[i] = -1;
          --i;
        }
        if (i < 0) break;
      }
    }
    if (!grew && states.size() == known) break;
  }

  CellularAutomaton out;
  out.d = D;
  out.sigma = a.sigma;
  std::vector<std::string> name(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) name[i] = i < a.sigma.size() ? a.sigma[i] : "s" + std::to_string(i);
  out.gamma = name;
  for (std::size_t i = 0; i < states.size(); ++i)
  {
    Bits in = states[i];
    in.resize(std::max(a.circuit.num_inputs(), W), 0);
    if (a.circuit.eval(a.accept, in)) out.accepting.insert(name[i]);
  }
  for (auto& [key, tg] : table) {
    std::vector<std::string> k{name[key.first]};
    for (int x : key.second) k.push_back(x < 0 ? kBorder : name[x]);
    for (int t : tg) out.delta[k].insert(name[t]);
  }
  return out;
}

}  // namespace picwb
