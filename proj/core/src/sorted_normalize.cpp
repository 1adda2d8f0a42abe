#include "picwb/sorted_normalize.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace picwb {

namespace {

Term shifted(const std::string& v, int c) { return Term{v, std::vector<int>(c, 0)}; }

int offset(const Term& t) { return static_cast<int>(t.sucs.size()); }

// Working state shared by the stages: prefix variables, matrix, extra clauses and symbols.
struct Work {
  EsoSentence s;
  std::vector<std::string> xs;
  FormulaPtr matrix;
  std::vector<FormulaPtr> clauses;
  std::set<std::string> taken;
  std::map<std::string, int> arity;

  explicit Work(const EsoSentence& in, const char* stage) : s(in) {
    if (s.sig.kind != Encoding::Coordinate) throw Error(std::string(stage) + ": coordinate signature required");
    auto sp = split_universal(s.body);
    if (!sp) throw Error(std::string(stage) + ": fragment violation, body is not prenex universal");
    xs = sp->first;
    matrix = sp->second;
    for (auto& g : s.guessed) {
      taken.insert(g.name);
      arity[g.name] = g.arity;
    }
  }
  int d() const { return static_cast<int>(xs.size()); }
  int pos(const std::string& v) const {
    auto it = std::find(xs.begin(), xs.end(), v);
    if (it == xs.end()) throw Error("variable " + v + " is not in the universal prefix");
    return static_cast<int>(it - xs.begin());
  }
  bool guessed(const std::string& sym) const { return arity.count(sym) > 0; }
  std::string fresh(const std::string& base, int ar) {
    std::string n = fresh_name(base, taken);
    taken.insert(n);
    arity[n] = ar;
    s.guessed.push_back({n, ar});
    return n;
  }
  std::vector<Term> ys() const {
    std::vector<Term> out;
    for (auto& v : xs) out.push_back(tvar(v));
    return out;
  }
  std::vector<Term> ys_suc(int i) const {  // 0-based slot
    auto out = ys();
    out[i] = tsuc(out[i]);
    return out;
  }
  FormulaPtr y_atom(const std::string& sym) const { return atom(sym, ys()); }
  FormulaPtr y_atom_suc(const std::string& sym, int i) const { return atom(sym, ys_suc(i)); }
  FormulaPtr min(int i) const { return atom("min", {tvar(xs[i])}); }
  FormulaPtr max(int i) const { return atom("max", {tvar(xs[i])}); }
  EsoSentence finish() {
    std::vector<FormulaPtr> all{matrix};
    all.insert(all.end(), clauses.begin(), clauses.end());
    EsoSentence out = s;
    out.body = f_forall(xs, f_and(all));
    return out;
  }
};

Permutation perm_of_slots(const Work& w, const std::vector<Term>& args) {
  Permutation p;
  for (auto& t : args) p.img.push_back(w.pos(t.var) + 1);
  return p;
}

}  // namespace

EsoSentence flatten_atoms(const EsoSentence& in) {
  Work w(in, "flatten_atoms");
  int d = w.d();
  for (auto& g : in.guessed)
    if (g.arity > d) throw Error("flatten_atoms: fragment violation, " + g.name + " has arity above " + std::to_string(d));
  std::map<std::pair<std::string, std::vector<Term>>, std::string> defs;
  auto define = [&](const Formula& a) -> FormulaPtr {
    int p = static_cast<int>(a.args.size());
    if (p > d) throw Error("flatten_atoms: fragment violation, atom " + a.sym + " has more slots than variables");
    auto key = std::make_pair(a.sym, a.args);
    std::vector<std::string> zs;
    std::map<std::string, int> rep;  // variable -> representative slot (least offset)
    for (int s = 0; s < p; ++s) {
      const std::string& v = a.args[s].var;
      if (!rep.count(v)) {
        zs.push_back(v);
        rep[v] = s;
      } else if (offset(a.args[s]) < offset(a.args[rep[v]])) {
        rep[v] = s;
      }
    }
    std::vector<Term> new_args;
    for (auto& z : zs) new_args.push_back(a.args[rep[z]]);
    auto it = defs.find(key);
    if (it != defs.end()) return atom(it->second, new_args);
    std::string base = is_input_symbol(a.sym) ? "F" + input_letter(a.sym) : a.sym + "_f";
    std::string name = w.fresh(base, static_cast<int>(zs.size()));
    defs[key] = name;
    std::vector<FormulaPtr> guard;
    std::vector<Term> rep_terms;
    for (auto& z : zs) rep_terms.push_back(tvar(w.xs[rep[z]]));
    std::vector<Term> slot_terms;
    for (int s = 0; s < p; ++s) {
      slot_terms.push_back(tvar(w.xs[s]));
      int r = rep[a.args[s].var];
      if (r != s) guard.push_back(f_eq(tvar(w.xs[s]), shifted(w.xs[r], offset(a.args[s]) - offset(a.args[r]))));
    }
    w.clauses.push_back(f_implies(f_and(guard), f_iff(atom(name, rep_terms), atom(a.sym, slot_terms))));
    return atom(name, new_args);
  };
  w.matrix = map_atoms(w.matrix, [&](const Formula& a) -> FormulaPtr {
    if (a.op != Op::Atom) return std::make_shared<Formula>(a);
    bool guessed = w.guessed(a.sym);
    bool input = is_input_symbol(a.sym);
    if (!guessed && !input) return std::make_shared<Formula>(a);
    std::set<std::string> vars;
    bool plain = true;
    for (auto& t : a.args) {
      vars.insert(t.var);
      plain &= t.sucs.empty();
    }
    bool distinct = vars.size() == a.args.size();
    if (distinct && (guessed || plain)) return std::make_shared<Formula>(a);
    return define(a);
  });
  // Part (b): lift every guessed symbol to arity d with dummy slots.
  std::map<std::string, int> old_arity;
  for (auto& g : w.s.guessed) old_arity[g.name] = g.arity;
  auto pad = [&](const FormulaPtr& f) {
    return map_atoms(f, [&](const Formula& a) -> FormulaPtr {
      if (a.op != Op::Atom || !old_arity.count(a.sym) || old_arity[a.sym] == d) return std::make_shared<Formula>(a);
      std::vector<Term> args = a.args;
      std::set<std::string> used;
      for (auto& t : args) used.insert(t.var);
      for (auto& v : w.xs)
        if (static_cast<int>(args.size()) < d && !used.count(v)) args.push_back(tvar(v));
      return atom(a.sym, args);
    });
  };
  w.matrix = pad(w.matrix);
  for (auto& c : w.clauses) c = pad(c);
  for (auto& g : w.s.guessed) {
    if (g.arity == d) continue;
    for (int i = g.arity; i < d; ++i) w.clauses.push_back(f_iff(w.y_atom(g.name), w.y_atom_suc(g.name, i)));
    g.arity = d;
    w.arity[g.name] = d;
  }
  return w.finish();
}

EsoSentence decompose_successors(const EsoSentence& in) {
  Work w(in, "decompose_successors");
  int d = w.d();
  for (auto& g : in.guessed)
    if (g.arity != d) throw Error("decompose_successors: fragment violation, " + g.name + " is not " + std::to_string(d) + "-ary");
  std::map<std::pair<std::string, std::vector<int>>, std::string> shifts;
  std::function<std::string(const std::string&, const std::vector<int>&)> shift =
      [&](const std::string& r, const std::vector<int>& c) -> std::string {
    if (std::all_of(c.begin(), c.end(), [](int v) { return v == 0; })) return r;
    auto key = std::make_pair(r, c);
    if (auto it = shifts.find(key); it != shifts.end()) return it->second;
    int i = d - 1;
    while (c[i] == 0) --i;
    auto prev_c = c;
    --prev_c[i];
    std::string prev = shift(r, prev_c);
    std::string base = r + "_s";
    for (int k = 0; k < d; ++k) base += (k ? "_" : "") + std::to_string(c[k]);
    std::string name = w.fresh(base, d);
    shifts[key] = name;
    w.clauses.push_back(f_iff(w.y_atom(name), w.y_atom_suc(prev, i)));
    return name;
  };
  std::map<std::string, std::string> builtin_copies;
  auto copy_of = [&](const std::string& key, const std::string& base, const FormulaPtr& def) {
    if (auto it = builtin_copies.find(key); it != builtin_copies.end()) return it->second;
    std::string name = w.fresh(base, d);
    builtin_copies[key] = name;
    w.clauses.push_back(f_iff(w.y_atom(name), def));
    return name;
  };
  auto cmp = [](Op op, Term a, Term b) { return op == Op::Eq ? f_eq(a, b) : f_lt(a, b); };
  std::map<std::string, std::string> diagonals;
  w.matrix = map_atoms(w.matrix, [&](const Formula& a) -> FormulaPtr {
    if (a.op == Op::Atom && w.guessed(a.sym)) {
      std::vector<int> c;
      std::set<std::string> vars;
      for (auto& t : a.args) {
        c.push_back(offset(t));
        vars.insert(t.var);
      }
      if (static_cast<int>(vars.size()) != d) throw Error("decompose_successors: atom " + a.sym + " is not flat");
      Permutation b = perm_of_slots(w, a.args);
      int total = std::accumulate(c.begin(), c.end(), 0);
      if (total == 0 || (total == 1 && b.is_identity())) return std::make_shared<Formula>(a);
      std::vector<Term> args;
      for (auto& t : a.args) args.push_back(tvar(t.var));
      return atom(shift(a.sym, c), args);
    }
    if (a.op == Op::Atom && (a.sym == "min" || a.sym == "max")) {
      int c = offset(a.args[0]);
      if (c == 0) return std::make_shared<Formula>(a);
      int j = w.pos(a.args[0].var);
      std::string base = a.sym + "_c" + std::to_string(j + 1);
      std::string m = copy_of(base, base, atom(a.sym, {tvar(w.xs[j])}));
      std::vector<int> cv(d, 0);
      cv[j] = c;
      return w.y_atom(shift(m, cv));
    }
    if (a.op == Op::Atom) {
      if (is_input_symbol(a.sym)) {
        for (auto& t : a.args)
          if (!t.sucs.empty()) throw Error("decompose_successors: input atom " + a.sym + " is not flat");
      }
      return std::make_shared<Formula>(a);
    }
    // Eq / Lt
    int oa = offset(a.args[0]), ob = offset(a.args[1]);
    int i = w.pos(a.args[0].var), j = w.pos(a.args[1].var);
    if (i == j && oa == ob) return f_bool(a.op == Op::Eq);
    if (oa == 0 && ob == 0) return std::make_shared<Formula>(a);
    std::string opname = a.op == Op::Eq ? "eq" : "lt";
    if (i != j) {
      std::string base = opname + std::to_string(i + 1) + std::to_string(j + 1);
      std::string cpy = copy_of(base, base, cmp(a.op, tvar(w.xs[i]), tvar(w.xs[j])));
      std::vector<int> cv(d, 0);
      cv[i] = oa;
      cv[j] = ob;
      return w.y_atom(shift(cpy, cv));
    }
    if (d < 2) throw Error("decompose_successors: same-variable comparison needs two variables");
    int k = i == 0 ? 1 : 0;
    std::string base = opname + std::to_string(i + 1) + std::to_string(k + 1);
    std::string cpy = copy_of(base, base, cmp(a.op, tvar(w.xs[i]), tvar(w.xs[k])));
    std::vector<int> cv(d, 0);
    cv[i] = oa;
    cv[k] = ob;
    std::string sh = shift(cpy, cv);
    std::string dkey = sh + "/" + std::to_string(k);
    auto it = diagonals.find(dkey);
    if (it == diagonals.end()) {
      std::string dg = w.fresh(opname + "_diag", d);
      w.clauses.push_back(f_implies(f_eq(tvar(w.xs[i]), tvar(w.xs[k])), f_iff(w.y_atom(dg), w.y_atom(sh))));
      w.clauses.push_back(f_iff(w.y_atom(dg), w.y_atom_suc(dg, k)));
      it = diagonals.emplace(dkey, dg).first;
    }
    return w.y_atom(it->second);
  });
  // Unwrap: R(x^(i)) becomes (max(x_i) & W(x)) | (!max(x_i) & R(x^(i))), W(x) = R(x with x_i := 1).
  std::map<std::pair<std::string, int>, std::string> wraps;
  std::vector<std::tuple<std::string, std::string, int>> pending;
  auto unwrap = [&](const FormulaPtr& f) {
    return map_atoms(f, [&](const Formula& a) -> FormulaPtr {
      if (a.op != Op::Atom || !w.guessed(a.sym)) return std::make_shared<Formula>(a);
      int slot = -1;
      for (int s = 0; s < d; ++s)
        if (!a.args[s].sucs.empty()) slot = s;
      if (slot < 0) return std::make_shared<Formula>(a);
      auto key = std::make_pair(a.sym, slot);
      auto it = wraps.find(key);
      if (it == wraps.end()) {
        std::string name = w.fresh(a.sym + "_w" + std::to_string(slot + 1), d);
        it = wraps.emplace(key, name).first;
        pending.emplace_back(name, a.sym, slot);
      }
      return f_or(f_and(w.max(slot), w.y_atom(it->second)),
                  f_and(f_not(w.max(slot)), std::make_shared<Formula>(a)));
    });
  };
  w.matrix = unwrap(w.matrix);
  for (auto& c : w.clauses) c = unwrap(c);
  for (auto& [name, r, slot] : pending) {
    w.clauses.push_back(f_implies(w.min(slot), f_iff(w.y_atom(name), w.y_atom(r))));
    w.clauses.push_back(f_implies(f_not(w.max(slot)), f_iff(w.y_atom_suc(name, slot), w.y_atom(name))));
  }
  return w.finish();
}

EsoSentence fold_relations(const EsoSentence& in) {
  Work w(in, "fold_relations");
  int d = w.d();
  auto perms = all_permutations(d);
  std::vector<GuessedSymbol> originals = w.s.guessed;
  for (auto& g : originals)
    if (g.arity != d) throw Error("fold_relations: fragment violation, " + g.name + " is not " + std::to_string(d) + "-ary");
  w.s.guessed.clear();
  std::map<std::pair<std::string, Permutation>, std::string> fam;
  for (auto& g : originals)
    for (auto& a : perms) fam[{g.name, a}] = w.fresh(g.name + "_" + a.str(), d);
  auto y = [&](int i) { return tvar(w.xs[i - 1]); };  // 1-based
  std::vector<FormulaPtr> sorted_parts;
  for (int i = 1; i < d; ++i) sorted_parts.push_back(f_or(f_lt(y(i), y(i + 1)), f_eq(y(i), y(i + 1))));
  FormulaPtr sorted = f_and(sorted_parts);
  std::vector<FormulaPtr> out;
  for (auto& a : perms) {
    Permutation ainv = a.inverse();
    auto sub = [&](const Term& t) {
      Term r = t;
      r.var = w.xs[ainv(w.pos(t.var) + 1) - 1];
      return r;
    };
    FormulaPtr phi = map_atoms(w.matrix, [&](const Formula& at) -> FormulaPtr {
      bool guessed = at.op == Op::Atom && fam.count({at.sym, a});
      if (!guessed) {
        for (auto& t : at.args)
          if (!t.sucs.empty()) throw Error("fold_relations: fragment violation, successor term in " + (at.sym.empty() ? std::string("comparison") : at.sym));
        Formula c = at;
        for (auto& t : c.args) t = sub(t);
        return std::make_shared<Formula>(c);
      }
      int slot = -1, sucs = 0;
      for (int s = 0; s < d; ++s)
        if (!at.args[s].sucs.empty()) {
          slot = s;
          sucs += offset(at.args[s]);
        }
      Permutation b = perm_of_slots(w, at.args);
      if (slot < 0) return w.y_atom(fam[{at.sym, b.inverse() * a}]);
      if (sucs != 1 || !b.is_identity())
        throw Error("fold_relations: fragment violation, atom " + at.sym + " is neither R(x_b) nor R(x^(i))");
      int j = ainv(slot + 1);
      std::vector<FormulaPtr> cases;
      for (int k = j; k <= d; ++k) {
        std::vector<FormulaPtr> cs;
        if (k != j) cs.push_back(f_eq(y(j), y(k)));
        if (k < d) cs.push_back(f_lt(y(k), y(k + 1)));
        cs.push_back(w.y_atom_suc(fam[{at.sym, a.swap_positions(j, k)}], k - 1));
        cases.push_back(f_and(cs));
      }
      return f_or(cases);
    });
    out.push_back(f_implies(sorted, phi));
  }
  for (auto& g : originals)
    for (auto& a : perms) {
      const std::string& ra = fam[{g.name, a}];
      out.push_back(f_implies(w.y_atom(ra), sorted));
      for (int i = 1; i <= d; ++i)
        for (int j = i + 1; j <= d; ++j) {
          Permutation at = a.swap_positions(i, j);
          if (at < a) continue;
          out.push_back(f_implies(f_eq(y(i), y(j)), f_iff(w.y_atom(ra), w.y_atom(fam[{g.name, at}]))));
        }
    }
  w.matrix = f_and(out);
  return w.finish();
}

EsoSentence eliminate_comparisons(const EsoSentence& in) {
  Work w(in, "eliminate_comparisons");
  int d = w.d();
  struct Pair {
    std::string lt, gt, eq, e;
  };
  std::map<std::pair<int, int>, Pair> pairs;
  auto pair_for = [&](int p, int q) -> Pair& {
    auto key = std::make_pair(p, q);
    auto it = pairs.find(key);
    if (it != pairs.end()) return it->second;
    std::string tag = std::to_string(p + 1) + std::to_string(q + 1);
    Pair s{w.fresh("LT" + tag, d), w.fresh("GT" + tag, d), w.fresh("EQ" + tag, d), w.fresh("EQS" + tag, d)};
    auto lt = w.y_atom(s.lt), gt = w.y_atom(s.gt), eq = w.y_atom(s.eq);
    w.clauses.push_back(f_implies(f_and(f_or(eq, lt), f_not(w.max(q))), w.y_atom_suc(s.lt, q)));
    w.clauses.push_back(f_implies(f_and(f_or(eq, gt), f_not(w.max(p))), w.y_atom_suc(s.gt, p)));
    w.clauses.push_back(f_implies(lt, f_and(f_not(gt), f_not(eq))));
    w.clauses.push_back(f_implies(gt, f_not(eq)));
    w.clauses.push_back(f_implies(w.min(p), f_iff(w.min(q), eq)));
    w.clauses.push_back(f_implies(w.min(q), f_iff(w.min(p), eq)));
    w.clauses.push_back(f_implies(f_and(f_not(w.max(p)), f_not(w.max(q))), f_iff(eq, w.y_atom_suc(s.e, p))));
    w.clauses.push_back(f_iff(w.y_atom(s.e), w.y_atom_suc(s.eq, q)));
    return pairs.emplace(key, s).first->second;
  };
  w.matrix = map_atoms(w.matrix, [&](const Formula& a) -> FormulaPtr {
    if (a.op == Op::Atom) return std::make_shared<Formula>(a);
    if (!a.args[0].sucs.empty() || !a.args[1].sucs.empty())
      throw Error("eliminate_comparisons: fragment violation, comparison under successor");
    int i = w.pos(a.args[0].var), j = w.pos(a.args[1].var);
    if (i == j) return f_bool(a.op == Op::Eq);
    Pair& s = pair_for(std::min(i, j), std::max(i, j));
    if (a.op == Op::Eq) return w.y_atom(s.eq);
    return w.y_atom(i < j ? s.lt : s.gt);
  });
  return w.finish();
}

EsoSentence simulate_input_relations(const EsoSentence& in) {
  Work w(in, "simulate_input_relations");
  int d = w.d(), k = in.sig.d;
  if (k != d - 1) throw Error("simulate_input_relations: input arity must be one less than the number of variables");
  PermTree tree = build_perm_tree(d);
  std::map<std::string, std::map<Permutation, std::string>> qfam;
  auto family = [&](const std::string& sym) -> std::map<Permutation, std::string>& {
    auto it = qfam.find(sym);
    if (it != qfam.end()) return it->second;
    const Alphabet& al = in.sig.alphabet;
    std::string letter = input_letter(sym);
    auto li = std::find(al.begin(), al.end(), letter);
    std::string tag = li == al.end() ? letter : std::to_string(li - al.begin());
    std::map<Permutation, std::string> t, q;
    for (auto& nd : tree.nodes) {
      t[nd.perm] = w.fresh("TP" + tag + "_" + nd.perm.str(), d);
      if (nd.parent >= 0) q[nd.perm] = w.fresh("QP" + tag + "_" + nd.perm.str(), d);
    }
    std::vector<Term> hd = w.ys();
    hd.resize(k);
    FormulaPtr qx = atom(sym, hd);
    w.clauses.push_back(f_implies(w.min(d - 1), f_iff(w.y_atom(t[tree.nodes[0].perm]), qx)));
    for (auto& nd : tree.nodes) {
      if (nd.parent < 0) continue;
      const Permutation& g = nd.perm;
      const Permutation& par = tree.nodes[nd.parent].perm;
      int u = nd.u - 1, v = nd.v - 1;
      w.clauses.push_back(f_implies(f_and(f_not(w.max(u)), f_not(w.max(v))),
                                    f_iff(w.y_atom_suc(t[g], u), w.y_atom_suc(t[g], v))));
      w.clauses.push_back(f_implies(w.min(u), f_iff(w.y_atom(t[par]), w.y_atom(t[g]))));
      w.clauses.push_back(f_implies(w.min(v), f_iff(w.y_atom(q[g]), w.y_atom(t[g]))));
      w.clauses.push_back(f_iff(w.y_atom(q[g]), w.y_atom_suc(q[g], v)));
    }
    return qfam.emplace(sym, q).first->second;
  };
  w.matrix = map_atoms(w.matrix, [&](const Formula& a) -> FormulaPtr {
    if (a.op != Op::Atom || !is_input_symbol(a.sym)) return std::make_shared<Formula>(a);
    if (static_cast<int>(a.args.size()) != k) throw Error("simulate_input_relations: arity mismatch on " + a.sym);
    Permutation b;
    std::vector<bool> used(d, false);
    for (auto& t : a.args) {
      if (!t.sucs.empty()) throw Error("simulate_input_relations: input atom " + a.sym + " is not an injection");
      int p = w.pos(t.var);
      if (used[p]) throw Error("simulate_input_relations: input atom " + a.sym + " repeats a variable");
      used[p] = true;
      b.img.push_back(p + 1);
    }
    for (int p = 0; p < d; ++p)
      if (!used[p]) b.img.push_back(p + 1);
    if (b.is_identity()) return std::make_shared<Formula>(a);
    return w.y_atom(family(a.sym)[b.inverse()]);
  });
  return w.finish();
}

EsoSentence sort_pipeline(const EsoSentence& in, int max_d) {
  if (in.sig.kind != Encoding::Coordinate) throw Error("sort_pipeline: coordinate signature required");
  int d = in.sig.d + 1;
  if (d > max_d) throw Error("sort_pipeline: d=" + std::to_string(d) + " exceeds the bound " + std::to_string(max_d));
  auto sp = split_universal(in.body);
  if (!sp) throw Error("sort_pipeline: fragment violation, body is not prenex universal");
  auto xs = sp->first;
  if (static_cast<int>(xs.size()) > d)
    throw Error("sort_pipeline: fragment violation, more than " + std::to_string(d) + " universal variables");
  std::set<std::string> names(xs.begin(), xs.end());
  for (int i = 1; static_cast<int>(xs.size()) < d; ++i) {
    std::string v = "x" + std::to_string(i);
    if (names.insert(v).second) xs.push_back(v);
  }
  EsoSentence s = in;
  s.body = f_forall(xs, sp->second);
  s = simulate_input_relations(eliminate_comparisons(fold_relations(decompose_successors(flatten_atoms(s)))));
  if (!is_sorted(s, in.sig.d, d)) throw Error("sort_pipeline: internal error, output is not sorted");
  return s;
}

// ---------------------------------------------------------------------------------------------
// Relation families and d-simulations

bool nondecreasing(const Cell& x) { return std::is_sorted(x.begin(), x.end()); }

namespace {
template <class F>
void for_each_tuple(int d, int n, F&& fn) {
  std::size_t total = ipow(n, d);
  for (std::size_t r = 0; r < total; ++r) fn(cell_of_rank(r, d, n), r);
}
std::size_t rank_of(const Cell& x, int n) { return cell_rank(x, n); }
}  // namespace

std::vector<TupleSet> family_from_relation(const TupleSet& r, int d, int n) {
  auto perms = all_permutations(d);
  std::vector<TupleSet> fam(perms.size(), TupleSet(ipow(n, d), 0));
  for (std::size_t a = 0; a < perms.size(); ++a) {
    Permutation inv = perms[a].inverse();
    for_each_tuple(d, n, [&](const Cell& x, std::size_t rk) {
      if (nondecreasing(x)) fam[a][rk] = r[rank_of(apply_permutation(x, inv), n)];
    });
  }
  return fam;
}

bool family_generated(const std::vector<TupleSet>& fam, int d, int n, TupleSet* witness) {
  auto perms = all_permutations(d);
  std::size_t total = ipow(n, d);
  std::vector<int> r(total, -1);
  for (std::size_t a = 0; a < perms.size(); ++a) {
    Permutation inv = perms[a].inverse();
    bool ok = true;
    for_each_tuple(d, n, [&](const Cell& x, std::size_t rk) {
      if (!nondecreasing(x)) {
        ok &= !fam[a][rk];
        return;
      }
      int& v = r[rank_of(apply_permutation(x, inv), n)];
      int want = fam[a][rk] ? 1 : 0;
      if (v >= 0 && v != want) ok = false;
      v = want;
    });
    if (!ok) return false;
  }
  TupleSet rel(total, 0);
  for (std::size_t i = 0; i < total; ++i) rel[i] = r[i] == 1;
  if (family_from_relation(rel, d, n) != fam) return false;
  if (witness) *witness = rel;
  return true;
}

bool family_coherent(const std::vector<TupleSet>& fam, int d, int n) {
  auto perms = all_permutations(d);
  bool ok = true;
  for_each_tuple(d, n, [&](const Cell& x, std::size_t) {
    for (std::size_t a = 0; a < perms.size() && ok; ++a) {
      Cell xa = apply_permutation(x, perms[a]);
      for (std::size_t b = 0; b < perms.size() && ok; ++b) {
        Cell xb = apply_permutation(x, perms[b]);
        if (xa == xb && fam[a][rank_of(xa, n)] != fam[b][rank_of(xb, n)]) ok = false;
      }
    }
  });
  return ok;
}

bool family_transposition_coherent(const std::vector<TupleSet>& fam, int d, int n) {
  auto perms = all_permutations(d);
  auto index = [&](const Permutation& p) {
    return static_cast<std::size_t>(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
  };
  bool ok = true;
  for_each_tuple(d, n, [&](const Cell& x, std::size_t rk) {
    for (int i = 1; i <= d; ++i)
      for (int j = i + 1; j <= d; ++j) {
        if (x[i - 1] != x[j - 1]) continue;
        for (std::size_t a = 0; a < perms.size(); ++a)
          if (fam[a][rk] != fam[index(perms[a].swap_positions(i, j))][rk]) ok = false;
      }
  });
  return ok;
}

namespace {
struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

Cell bump(Cell x, int i, int n) {  // cyclic successor on slot i (1-based)
  x[i - 1] = x[i - 1] == n ? 1 : x[i - 1] + 1;
  return x;
}
Cell head(const Cell& x) { return Cell(x.begin(), x.end() - 1); }
}  // namespace

std::optional<DSimulation> build_d_simulation(const TupleSet& q, int d, int n, std::mt19937_64& rng) {
  auto perms = all_permutations(d);
  PermTree tree = build_perm_tree(d);
  std::size_t total = ipow(n, d), np = perms.size();
  auto pidx = [&](const Permutation& p) {
    return static_cast<std::size_t>(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
  };
  // Variables: T_a(x), Q_a(x), then the two constants.
  auto tv = [&](std::size_t a, const Cell& x) { return static_cast<int>(a * total + rank_of(x, n)); };
  auto qv = [&](std::size_t a, const Cell& x) { return static_cast<int>((np + a) * total + rank_of(x, n)); };
  const int kT = static_cast<int>(2 * np * total), kF = kT + 1;
  UnionFind uf(2 * np * total + 2);
  auto qval = [&](const Cell& x) { return q[rank_of(head(x), n)] ? kT : kF; };
  std::size_t id = pidx(Permutation::identity(d));
  for_each_tuple(d, n, [&](const Cell& x, std::size_t) {
    if (x[d - 1] == 1) uf.unite(tv(id, x), qval(x));  // F1
    uf.unite(qv(id, x), qval(x));                     // F4
    for (auto& nd : tree.nodes) {
      if (nd.parent < 0) continue;
      std::size_t g = pidx(nd.perm), a = pidx(tree.nodes[nd.parent].perm);
      int u = nd.u, v = nd.v;
      if (x[u - 1] < n && x[v - 1] < n) uf.unite(tv(g, bump(x, u, n)), tv(g, bump(x, v, n)));  // F2
      if (x[u - 1] == 1) uf.unite(tv(a, x), tv(g, x));                                      // F3
      if (x[v - 1] == 1) uf.unite(qv(g, x), tv(g, x));                                      // F5
      uf.unite(qv(g, x), qv(g, bump(x, v, n)));                                             // F6
    }
  });
  if (uf.find(kT) == uf.find(kF)) return std::nullopt;
  std::map<int, char> value{{uf.find(kT), 1}, {uf.find(kF), 0}};
  std::bernoulli_distribution coin(0.5);
  auto get = [&](int var) {
    int r = uf.find(var);
    auto it = value.find(r);
    if (it == value.end()) it = value.emplace(r, coin(rng) ? 1 : 0).first;
    return it->second;
  };
  DSimulation sim{d, n, std::vector<TupleSet>(np, TupleSet(total)), std::vector<TupleSet>(np, TupleSet(total))};
  for (std::size_t a = 0; a < np; ++a)
    for_each_tuple(d, n, [&](const Cell& x, std::size_t rk) {
      sim.t[a][rk] = get(tv(a, x));
      sim.q[a][rk] = get(qv(a, x));
    });
  return sim;
}

std::size_t simulation_axiom_violations(const DSimulation& sim, const TupleSet& q) {
  int d = sim.d, n = sim.n;
  auto perms = all_permutations(d);
  PermTree tree = build_perm_tree(d);
  auto pidx = [&](const Permutation& p) {
    return static_cast<std::size_t>(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
  };
  std::size_t id = pidx(Permutation::identity(d)), bad = 0;
  for_each_tuple(d, n, [&](const Cell& x, std::size_t rk) {
    bool qx = q[rank_of(head(x), n)];
    if (x[d - 1] == 1 && bool(sim.t[id][rk]) != qx) ++bad;  // A1
    if (bool(sim.q[id][rk]) != qx) ++bad;                   // A4
    for (auto& nd : tree.nodes) {
      if (nd.parent < 0) continue;
      std::size_t g = pidx(nd.perm), a = pidx(tree.nodes[nd.parent].perm);
      int i = nd.u, j = nd.v;
      Cell sw = x;
      std::swap(sw[i - 1], sw[j - 1]);
      if (sim.t[g][rk] != sim.t[g][rank_of(sw, n)]) ++bad;             // A2
      if (x[i - 1] == 1 && sim.t[a][rk] != sim.t[g][rk]) ++bad;        // A3
      if (x[j - 1] == 1 && sim.q[g][rk] != sim.t[g][rk]) ++bad;        // A5
      for (int c = 1; c <= n; ++c) {                                    // A6
        Cell y = x;
        y[j - 1] = c;
        if (sim.q[g][rk] != sim.q[g][rank_of(y, n)]) ++bad;
      }
    }
  });
  return bad;
}

std::size_t simulation_conclusion_violations(const DSimulation& sim, const TupleSet& q) {
  auto perms = all_permutations(sim.d);
  std::size_t bad = 0;
  for_each_tuple(sim.d, sim.n, [&](const Cell& x, std::size_t) {
    bool qx = q[rank_of(head(x), sim.n)];
    for (std::size_t a = 0; a < perms.size(); ++a)
      if (bool(sim.q[a][rank_of(apply_permutation(x, perms[a]), sim.n)]) != qx) ++bad;
  });
  return bad;
}

}  // namespace picwb
