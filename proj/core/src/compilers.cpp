#include "picwb/compilers.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace picwb {

namespace {

FormulaPtr any_of(std::vector<FormulaPtr> fs) { return fs.empty() ? f_false() : f_or(std::move(fs)); }
FormulaPtr all_of(std::vector<FormulaPtr> fs) { return fs.empty() ? f_true() : f_and(std::move(fs)); }

FormulaPtr xor_of(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_false();
  FormulaPtr acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = f_xor(acc, fs[i]);
  return acc;
}

Lit to_circuit(Circuit& c, const FormulaPtr& f, const std::function<Lit(const Formula&)>& atom_lit) {
  auto kids = [&] {
    std::vector<Lit> out;
    for (auto& k : f->kids) out.push_back(to_circuit(c, k, atom_lit));
    return out;
  };
  switch (f->op) {
    case Op::True: return kTrue;
    case Op::False: return kFalse;
    case Op::Atom: return atom_lit(*f);
    case Op::Not: return lnot(to_circuit(c, f->kids[0], atom_lit));
    case Op::And: return c.mk_and(kids());
    case Op::Or: return c.mk_or(kids());
    case Op::Xor: return c.mk_xor(kids());
    case Op::Implies: {
      auto k = kids();
      return c.mk_implies(k[0], k[1]);
    }
    case Op::Iff: {
      auto k = kids();
      return c.mk_iff(k[0], k[1]);
    }
    default: throw Error("expected a quantifier-free formula without = or <");
  }
}

std::size_t index_in(const Alphabet& a, const std::string& s) {
  auto it = std::find(a.begin(), a.end(), s);
  return it == a.end() ? a.size() : static_cast<std::size_t>(it - a.begin());
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Tiling systems and monadic pixel sentences

EsoSentence tiling_to_sentence(const TilingSystem& ts) {
  validate(ts);
  const int d = ts.dim();
  EsoSentence s{Signature{Encoding::Pixel, d, ts.sigma}, {}, nullptr};
  std::map<std::string, std::string> color;
  for (std::size_t i = 0; i < ts.gamma.size(); ++i) {
    color[ts.gamma[i]] = "C" + std::to_string(i);
    s.guessed.push_back({color[ts.gamma[i]], 1});
  }
  auto at = [&](const std::string& g) { return atom(color.at(g), {tvar("x")}); };
  auto at_suc = [&](const std::string& g, int j) { return atom(color.at(g), {tsuc(tvar("x"), j)}); };
  LocalizedSentence l{s, "x", {}, {}, {}};
  bool corners = true;
  for (int j = 1; j <= d; ++j) {
    std::vector<FormulaPtr> first, last, inner;
    for (auto& [u, v] : ts.deltas[j - 1].tiles) {
      if (u == "#" && v == "#") continue;
      if (u == "#") first.push_back(at(v));
      else if (v == "#") last.push_back(at(u));
      else inner.push_back(f_and(at(u), at_suc(v, j)));
    }
    if (d >= 2 && !ts.deltas[j - 1].tiles.count({"#", "#"})) corners = false;
    l.m.push_back(any_of(first));
    l.M.push_back(any_of(last));
    l.psi.push_back(any_of(inner));
  }
  if (!corners) l.m[0] = f_false();
  std::vector<FormulaPtr> cell;
  std::vector<FormulaPtr> some;
  for (std::size_t i = 0; i < ts.gamma.size(); ++i) {
    const std::string& g = ts.gamma[i];
    some.push_back(at(g));
    cell.push_back(f_implies(at(g), atom("Q_" + ts.pi.at(g), {tvar("x")})));
    for (std::size_t k = i + 1; k < ts.gamma.size(); ++k) cell.push_back(f_not(f_and(at(g), at(ts.gamma[k]))));
  }
  cell.push_back(any_of(some));
  FormulaPtr local = all_of(cell);
  l.M[0] = f_and(l.M[0], local);
  l.psi[0] = f_and(l.psi[0], local);
  return localized_sentence(l);
}

TilingSystem sentence_to_tiling(const EsoSentence& s, int max_guesses) {
  LocalizedSentence l = localize_pixel_sentence(s);
  const int d = s.sig.d;
  const Alphabet& sigma = s.sig.alphabet;
  const auto& guessed = l.sentence.guessed;
  const int g = static_cast<int>(guessed.size());
  if (g > max_guesses)
    throw CapExceeded("sentence_to_tiling: " + std::to_string(g) + " guessed symbols exceed the cap of " +
                      std::to_string(max_guesses));
  std::map<std::string, int> slot;
  for (int i = 0; i < g; ++i) slot[guessed[i].name] = i;

  TilingSystem ts;
  ts.sigma = sigma;
  struct Color {
    std::size_t letter;
    unsigned bits;
  };
  std::vector<Color> colors;
  for (std::size_t a = 0; a < sigma.size(); ++a)
    for (unsigned b = 0; b < (1u << g); ++b) {
      std::string name = sigma[a];
      if (g > 0) {
        name += ".";
        for (int i = 0; i < g; ++i) name += (b >> i & 1) ? '1' : '0';
      }
      colors.push_back({a, b});
      ts.gamma.push_back(name);
      ts.pi[name] = sigma[a];
    }
  if (std::set<std::string>(ts.gamma.begin(), ts.gamma.end()).size() != ts.gamma.size())
    throw Error("sentence_to_tiling: color names collide for this alphabet");

  Circuit c;
  auto value = [&](const FormulaPtr& f, const Color& here, const Color* next, int dim) {
    return to_circuit(c, f, [&](const Formula& a) -> Lit {
      if (a.args.size() != 1) throw Error("sentence_to_tiling: unexpected atom " + a.sym);
      const Color& col = a.args[0].sucs.empty() ? here : *next;
      if (!a.args[0].sucs.empty() && (next == nullptr || a.args[0].sucs != std::vector<int>{dim}))
        throw Error("sentence_to_tiling: unexpected successor term");
      if (is_input_symbol(a.sym)) return c.constant(sigma[col.letter] == input_letter(a.sym));
      auto it = slot.find(a.sym);
      if (it == slot.end()) throw Error("sentence_to_tiling: unknown symbol " + a.sym);
      return c.constant(col.bits >> it->second & 1);
    }) == kTrue;
  };
  for (int j = 1; j <= d; ++j) {
    TileSet t{j, {{"#", "#"}}};
    for (std::size_t u = 0; u < colors.size(); ++u) {
      if (value(l.m[j - 1], colors[u], nullptr, j)) t.tiles.insert({"#", ts.gamma[u]});
      if (value(l.M[j - 1], colors[u], nullptr, j)) t.tiles.insert({ts.gamma[u], "#"});
      for (std::size_t v = 0; v < colors.size(); ++v)
        if (value(l.psi[j - 1], colors[u], &colors[v], j)) t.tiles.insert({ts.gamma[u], ts.gamma[v]});
    }
    ts.deltas.push_back(std::move(t));
  }
  return ts;
}

// ---------------------------------------------------------------------------------------------
// Cellular automata and coordinate sentences

EsoSentence automaton_to_sentence(const CellularAutomaton& a) {
  validate(a);
  const int d = a.d;
  EsoSentence s{Signature{Encoding::Coordinate, d, a.sigma}, {}, nullptr};
  std::vector<std::string> vars;
  for (int i = 1; i <= d; ++i) vars.push_back("x" + std::to_string(i));
  vars.push_back("t");
  std::map<std::string, std::string> rel;
  for (std::size_t i = 0; i < a.gamma.size(); ++i) {
    rel[a.gamma[i]] = "R" + std::to_string(i);
    s.guessed.push_back({rel[a.gamma[i]], d + 1});
  }
  auto here = [&] {
    std::vector<Term> xs;
    for (auto& v : vars) xs.push_back(tvar(v));
    return xs;
  };
  auto state_at = [&](const std::string& st, int shift_dim) {  // shift_dim in [0,d]: 0 = none
    auto xs = here();
    if (shift_dim > 0) xs[shift_dim - 1] = tsuc(xs[shift_dim - 1]);
    return atom(rel.at(st), xs);
  };
  auto un = [&](const char* b, int i) { return atom(b, {tvar(vars[i])}); };
  const int tpos = d;

  std::vector<FormulaPtr> parts;
  for (std::size_t i = 0; i < a.gamma.size(); ++i)
    for (std::size_t k = i + 1; k < a.gamma.size(); ++k)
      parts.push_back(f_not(f_and(state_at(a.gamma[i], 0), state_at(a.gamma[k], 0))));

  std::vector<FormulaPtr> init;
  std::vector<Term> space = here();
  space.pop_back();
  for (auto& sym : a.sigma) init.push_back(f_and(atom("Q_" + sym, space), state_at(sym, 0)));
  parts.push_back(f_implies(un("min", tpos), xor_of(init)));

  std::vector<std::string> options(a.gamma.begin(), a.gamma.end());
  options.push_back("#");
  std::vector<FormulaPtr> final_moves;
  std::vector<std::size_t> pick(d, 0);
  for (auto& self : a.gamma) {
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<std::string> key{self};
      std::vector<FormulaPtr> desc{state_at(self, 0)};
      for (int i = 0; i < d; ++i) {
        const std::string& nb = options[pick[i]];
        key.push_back(nb);
        if (nb == "#") desc.push_back(un("max", i));
        else desc.push_back(f_and(f_not(un("max", i)), state_at(nb, i + 1)));
      }
      FormulaPtr nu = f_and(desc);
      auto it = a.delta.find(key);
      if (it == a.delta.end() || it->second.empty()) {
        parts.push_back(f_not(nu));
      } else {
        std::vector<FormulaPtr> next;
        bool accepting = false;
        for (auto& st : it->second) {
          next.push_back(state_at(st, tpos + 1));
          accepting |= a.accepting.count(st) > 0;
        }
        parts.push_back(f_implies(f_and(f_not(un("max", tpos)), nu), xor_of(next)));
        if (accepting) final_moves.push_back(nu);
      }
      int i = 0;
      while (i < d && ++pick[i] == options.size()) pick[i++] = 0;
      if (i == d) break;
    }
  }
  std::vector<FormulaPtr> corner{un("max", tpos)};
  for (int i = 0; i < d; ++i) corner.push_back(un("min", i));
  parts.push_back(f_implies(f_and(corner), any_of(final_moves)));
  s.body = f_forall(vars, f_and(parts));
  return s;
}

namespace {

// R(x^(i)) only matters below max(x_i); at max it reads a copy W constant along x_i.
EsoSentence unwrap_successors(const EsoSentence& in) {
  auto sp = split_universal(in.body);
  const auto& xs = sp->first;
  const int D = static_cast<int>(xs.size());
  EsoSentence s = in;
  std::set<std::string> guessed, taken = symbol_names(in);
  for (auto& g : in.guessed) guessed.insert(g.name);
  std::map<std::pair<std::string, int>, std::string> wraps;
  std::vector<FormulaPtr> extra;
  auto plain = [&](const std::string& r, int slot) {
    std::vector<Term> args;
    for (int i = 0; i < D; ++i) args.push_back(i == slot ? tsuc(tvar(xs[i])) : tvar(xs[i]));
    return atom(r, args);
  };
  auto unary = [&](const char* b, int i) { return atom(b, {tvar(xs[i])}); };
  FormulaPtr m = map_atoms(sp->second, [&](const Formula& a) -> FormulaPtr {
    auto same = std::make_shared<Formula>(a);
    if (a.op != Op::Atom || !guessed.count(a.sym)) return same;
    int slot = -1;
    for (int i = 0; i < D; ++i)
      if (!a.args[i].sucs.empty()) slot = i;
    if (slot < 0) return same;
    auto key = std::make_pair(a.sym, slot);
    auto it = wraps.find(key);
    if (it == wraps.end()) {
      std::string w = fresh_name(a.sym + "_w" + std::to_string(slot + 1), taken);
      taken.insert(w);
      s.guessed.push_back({w, D});
      it = wraps.emplace(key, w).first;
      extra.push_back(f_implies(unary("min", slot), f_iff(plain(w, -1), plain(a.sym, -1))));
      extra.push_back(f_implies(f_not(unary("max", slot)), f_iff(plain(w, slot), plain(w, -1))));
    }
    return f_or(f_and(unary("max", slot), plain(it->second, -1)), f_and(f_not(unary("max", slot)), same));
  });
  extra.insert(extra.begin(), m);
  s.body = f_forall(xs, f_and(extra));
  return s;
}

enum Phase { kLetter = 0, kWait = 1, kAct = 2, kFin = 3 };

struct Layout {
  int lb = 0, k = 1, g = 0;
  int v() const { return g + 2; }  // guessed bits, then D, then M
  int letter() const { return 2; }
  int mins() const { return 2 + lb; }
  int vec_a() const { return mins() + k; }
  int vec_b() const { return vec_a() + v(); }
  int width() const { return vec_b() + v(); }
  int dbit() const { return g; }
  int mbit() const { return g + 1; }
};

}  // namespace

CompiledAutomaton sentence_to_automaton(const EsoSentence& in, int max_width) {
  if (in.sig.kind != Encoding::Coordinate) throw Error("sentence_to_automaton: coordinate signature required");
  const int k = in.sig.d;
  if (!is_sorted(in, k, k + 1)) throw Error("sentence_to_automaton: sentence is not sorted (run sort_pipeline first)");
  EsoSentence s = unwrap_successors(in);
  auto sp = split_universal(s.body);
  const auto& xs = sp->first;
  std::map<std::string, int> var;
  for (int i = 0; i <= k; ++i) var[xs[i]] = i;
  std::map<std::string, int> gslot;
  for (std::size_t i = 0; i < s.guessed.size(); ++i) gslot[s.guessed[i].name] = static_cast<int>(i);
  const Alphabet& sigma = s.sig.alphabet;

  Layout L;
  L.k = k;
  L.g = static_cast<int>(s.guessed.size());
  while ((std::size_t{1} << L.lb) < sigma.size()) ++L.lb;
  if (L.width() > max_width)
    throw CapExceeded("sentence_to_automaton: state width " + std::to_string(L.width()) + " bits exceeds the cap of " +
                      std::to_string(max_width));

  CompiledAutomaton out;
  SymbolicAutomaton& A = out.automaton;
  A.d = k;
  A.sigma = sigma;
  A.width = L.width();
  for (std::size_t a = 0; a < sigma.size(); ++a) {
    std::vector<std::uint8_t> code(A.width, 0);
    for (int b = 0; b < L.lb; ++b) code[L.letter() + b] = a >> b & 1;
    A.letter_code.push_back(code);
  }
  Circuit& c = A.circuit;
  const int cur = 0, nxt = A.next_offset();
  auto bit = [&](int base, int i) { return c.input(base + i); };
  auto nb = [&](int i) { return A.nbr(i) + 1; };
  auto border = [&](int i) { return c.input(A.nbr(i)); };
  auto phase_is = [&](int base, int p) {
    return c.mk_and(lcond(bit(base, 0), p & 1), lcond(bit(base, 1), p & 2));
  };
  auto same = [&](int b1, int b2, int off, int len) {
    std::vector<Lit> eq;
    for (int i = 0; i < len; ++i) eq.push_back(c.mk_iff(bit(b1, off + i), bit(b2, off + i)));
    return c.mk_and(eq);
  };
  auto zero = [&](int base, int off, int len) {
    std::vector<Lit> z;
    for (int i = 0; i < len; ++i) z.push_back(lnot(bit(base, off + i)));
    return c.mk_and(z);
  };
  auto letter_is = [&](std::size_t a) {
    std::vector<Lit> eq;
    for (int b = 0; b < L.lb; ++b) eq.push_back(lcond(bit(cur, L.letter() + b), a >> b & 1));
    return c.mk_and(eq);
  };

  std::vector<Lit> all_act, no_fin;
  for (int i = 0; i < k; ++i) {
    all_act.push_back(c.mk_or(border(i), phase_is(nb(i), kAct)));
    no_fin.push_back(c.mk_or(border(i), lnot(phase_is(nb(i), kFin))));
  }
  Lit allact = c.mk_and(all_act), nofin = c.mk_and(no_fin);
  Lit stay = same(cur, nxt, 0, A.width);

  const int own = L.vec_b();
  auto process = [&](bool first) {
    std::vector<Lit> req{phase_is(nxt, kAct), same(cur, nxt, L.letter(), L.lb + k)};
    for (int i = 0; i < L.v(); ++i) req.push_back(c.mk_iff(bit(nxt, L.vec_a() + i), bit(cur, own + i)));
    Lit matrix = to_circuit(c, sp->second, [&](const Formula& a) -> Lit {
      if (a.sym == "min" || a.sym == "max") {
        int j = var.at(a.args[0].var);
        if (a.sym == "min") return j < k ? bit(cur, L.mins() + j) : c.constant(first);
        return j < k ? border(j) : bit(cur, own + L.mbit());
      }
      if (is_input_symbol(a.sym)) {
        std::size_t idx = index_in(sigma, input_letter(a.sym));
        return idx == sigma.size() ? kFalse : letter_is(idx);
      }
      int r = gslot.at(a.sym);
      int slot = -1;
      for (int i = 0; i <= k; ++i)
        if (!a.args[i].sucs.empty()) slot = i;
      if (slot < 0) return bit(cur, own + r);
      if (slot == k) return bit(nxt, L.vec_b() + r);
      return c.mk_and(lnot(border(slot)), bit(nb(slot), L.vec_a() + r));
    });
    req.push_back(matrix);
    Lit D = bit(cur, own + L.dbit()), M = bit(cur, own + L.mbit());
    Lit min1 = bit(cur, L.mins());
    if (first) req.push_back(c.mk_iff(D, min1));
    else req.push_back(c.mk_implies(min1, lnot(D)));
    req.push_back(c.mk_implies(c.mk_and(lnot(border(0)), lnot(M)), c.mk_iff(bit(nb(0), L.vec_b() + L.dbit()), D)));
    req.push_back(c.mk_implies(border(0), c.mk_iff(M, D)));
    req.push_back(c.mk_implies(lnot(border(0)), c.mk_iff(M, bit(nb(0), L.vec_a() + L.mbit()))));
    if (first)
      for (int i = 0; i < k; ++i) {
        req.push_back(c.mk_implies(lnot(border(i)), lnot(bit(nb(i), L.mins() + i))));
        for (int j = 0; j < k; ++j)
          if (j != i)
            req.push_back(c.mk_implies(lnot(border(j)), c.mk_iff(bit(nb(j), L.mins() + i), bit(cur, L.mins() + i))));
      }
    return c.mk_and(req);
  };

  std::vector<Lit> cases;
  cases.push_back(c.mk_and({phase_is(cur, kLetter), phase_is(nxt, kWait), same(cur, nxt, L.letter(), L.lb),
                            zero(nxt, L.vec_a(), L.v())}));
  cases.push_back(c.mk_and({phase_is(cur, kWait), nofin,
                            c.mk_or(c.mk_and(lnot(allact), stay), c.mk_and(allact, process(true)))}));
  Lit done = bit(cur, L.vec_a() + L.mbit());
  Lit to_fin = c.mk_and({phase_is(nxt, kFin), same(cur, nxt, L.mins(), k), zero(nxt, L.letter(), L.lb),
                         zero(nxt, L.vec_a(), 2 * L.v())});
  cases.push_back(c.mk_and(phase_is(cur, kAct),
                           c.mk_or(c.mk_and(done, to_fin), c.mk_and({lnot(done), allact, process(false)}))));
  cases.push_back(c.mk_and(phase_is(cur, kFin), stay));
  A.delta = c.mk_or(cases);

  std::vector<Lit> mins;
  for (int i = 0; i < k; ++i) mins.push_back(bit(cur, L.mins() + i));
  Lit all_min = c.mk_and(mins);
  A.accept = c.mk_and(all_min, c.mk_or(c.mk_and(phase_is(cur, kAct), done), phase_is(cur, kFin)));
  out.c = k + 1;
  out.c2 = 2 - k;
  return out;
}

}  // namespace picwb
