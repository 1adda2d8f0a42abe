#include "picwb/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "picwb/model_check.hpp"

namespace picwb {

namespace {

bool is_dim_atom(const std::string& sym, const std::string& base, int* dim) {
  if (sym.rfind(base + "_", 0) != 0) return false;
  std::string rest = sym.substr(base.size() + 1);
  if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit)) return false;
  *dim = std::stoi(rest);
  return true;
}

std::vector<FormulaPtr> conjuncts(const FormulaPtr& f) {
  if (f->op != Op::And) return {f};
  std::vector<FormulaPtr> out;
  for (auto& k : f->kids) {
    auto sub = conjuncts(k);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Localization

std::optional<LocalizedSentence> as_localized(const EsoSentence& s) {
  if (s.sig.kind != Encoding::Pixel) return std::nullopt;
  for (auto& g : s.guessed)
    if (g.arity != 1) return std::nullopt;
  auto sp = split_universal(s.body);
  if (!sp || sp->first.size() != 1) return std::nullopt;
  int d = s.sig.d;
  LocalizedSentence l{s, sp->first[0], std::vector<FormulaPtr>(d), std::vector<FormulaPtr>(d), std::vector<FormulaPtr>(d)};
  std::vector<std::vector<FormulaPtr>> m(d), M(d), psi(d);
  const std::string& x = l.var;
  auto unary = [&](const Formula& a, int allowed_dim) {
    if (a.op != Op::Atom || a.args.size() != 1 || a.args[0].var != x) return false;
    int dim;
    if (is_dim_atom(a.sym, "min", &dim) || is_dim_atom(a.sym, "max", &dim)) return false;
    const auto& sucs = a.args[0].sucs;
    return sucs.empty() || (allowed_dim > 0 && sucs.size() == 1 && sucs[0] == allowed_dim);
  };
  auto body_ok = [&](const FormulaPtr& f, int dim) {
    bool ok = true;
    visit_atoms(f, [&](const Formula& a) { ok &= unary(a, dim); });
    return ok;
  };
  for (auto& c : conjuncts(sp->second)) {
    if (c->op == Op::True) continue;
    if (c->op != Op::Implies) return std::nullopt;
    const Formula& g = *c->kids[0];
    const FormulaPtr& b = c->kids[1];
    int dim;
    bool neg = g.op == Op::Not;
    const Formula& ga = neg ? *g.kids[0] : g;
    if (ga.op != Op::Atom || ga.args.size() != 1 || !ga.args[0].sucs.empty() || ga.args[0].var != x) return std::nullopt;
    if (is_dim_atom(ga.sym, "min", &dim) && !neg && dim >= 1 && dim <= d) {
      if (!body_ok(b, 0)) return std::nullopt;
      m[dim - 1].push_back(b);
    } else if (is_dim_atom(ga.sym, "max", &dim) && dim >= 1 && dim <= d) {
      if (!body_ok(b, neg ? dim : 0)) return std::nullopt;
      (neg ? psi : M)[dim - 1].push_back(b);
    } else {
      return std::nullopt;
    }
  }
  for (int i = 0; i < d; ++i) {
    l.m[i] = f_and(m[i]);
    l.M[i] = f_and(M[i]);
    l.psi[i] = f_and(psi[i]);
  }
  return l;
}

EsoSentence localized_sentence(const LocalizedSentence& l) {
  EsoSentence s = l.sentence;
  std::vector<FormulaPtr> parts;
  for (int i = 1; i <= static_cast<int>(l.m.size()); ++i) {
    auto g = [&](const std::string& b) { return atom(b + "_" + std::to_string(i), {tvar(l.var)}); };
    parts.push_back(f_implies(g("min"), l.m[i - 1]));
    parts.push_back(f_implies(g("max"), l.M[i - 1]));
    parts.push_back(f_implies(f_not(g("max")), l.psi[i - 1]));
  }
  s.body = f_forall({l.var}, f_and(parts));
  return s;
}

LocalizedSentence localize_pixel_sentence(const EsoSentence& in) {
  if (in.sig.kind != Encoding::Pixel) throw Error("localize: pixel signature required");
  if (auto l = as_localized(in)) return *l;
  auto sp = split_universal(in.body);
  if (!sp || sp->first.size() > 1) throw Error("localize: body is not of the form forall x with one variable");
  const int d = in.sig.d;
  std::string x = sp->first.empty() ? "x" : sp->first[0];
  FormulaPtr matrix = sp->second;
  EsoSentence s = in;
  std::set<std::string> taken;
  for (auto& g : s.guessed) {
    if (g.arity > 1) throw Error("localize: guessed symbol " + g.name + " is not monadic");
    taken.insert(g.name);
  }
  std::vector<std::vector<FormulaPtr>> m(d), M(d), psi(d);
  auto X = [&] { return tvar(x); };
  auto at = [&](const std::string& p) { return atom(p, {X()}); };
  auto at_suc = [&](const std::string& p, int i) { return atom(p, {tsuc(X(), i)}); };
  auto fresh = [&](const std::string& base) {
    std::string n = fresh_name(base, taken);
    taken.insert(n);
    s.guessed.push_back({n, 1});
    return n;
  };
  // 0-ary guessed symbols become unary symbols constant over the grid.
  std::set<std::string> nullary;
  for (auto& g : s.guessed)
    if (g.arity == 0) {
      g.arity = 1;
      nullary.insert(g.name);
      for (int i = 1; i <= d; ++i) psi[i - 1].push_back(f_iff(at(g.name), at_suc(g.name, i)));
    }
  // Successor-free boundary flags.
  std::map<std::string, std::string> flags;
  auto flag = [&](const std::string& kind, int i) {
    std::string key = kind + "_" + std::to_string(i);
    if (auto it = flags.find(key); it != flags.end()) return it->second;
    std::string b = fresh("B" + kind + std::to_string(i));
    flags[key] = b;
    if (kind == "min") {
      m[i - 1].push_back(at(b));
      psi[i - 1].push_back(f_not(at_suc(b, i)));
    } else {
      M[i - 1].push_back(at(b));
      psi[i - 1].push_back(f_not(at(b)));
    }
    return b;
  };
  std::map<std::pair<std::string, int>, std::string> wraps;
  auto wrap = [&](const std::string& p, int i) {  // W(x) = P(x with x_i := 1)
    auto key = std::make_pair(p, i);
    if (auto it = wraps.find(key); it != wraps.end()) return it->second;
    std::string w = fresh((is_input_symbol(p) ? "Q" + p.substr(2) : p) + "_w" + std::to_string(i));
    wraps[key] = w;
    m[i - 1].push_back(f_iff(at(w), at(p)));
    psi[i - 1].push_back(f_iff(at(w), at_suc(w, i)));
    return w;
  };
  std::map<std::pair<std::string, std::vector<int>>, std::string> shifts;
  std::function<std::string(const std::string&, const std::vector<int>&)> shift =
      [&](const std::string& p, const std::vector<int>& c) -> std::string {
    if (std::all_of(c.begin(), c.end(), [](int v) { return v == 0; })) return p;
    auto key = std::make_pair(p, c);
    if (auto it = shifts.find(key); it != shifts.end()) return it->second;
    int i = d;
    while (c[i - 1] == 0) --i;
    auto prev_c = c;
    --prev_c[i - 1];
    std::string prev = shift(p, prev_c);
    std::string base = (is_input_symbol(p) ? "Q" + p.substr(2) : p) + "_s";
    for (int k = 0; k < d; ++k) base += (k ? "_" : "") + std::to_string(c[k]);
    std::string name = fresh(base);
    shifts[key] = name;
    psi[i - 1].push_back(f_iff(at(name), at_suc(prev, i)));
    M[i - 1].push_back(f_iff(at(name), at(wrap(prev, i))));
    return name;
  };
  auto offsets = [&](const Term& t) {
    std::vector<int> c(d, 0);
    for (int dim : t.sucs) {
      if (dim < 1 || dim > d) throw Error("localize: unsupported term shape");
      ++c[dim - 1];
    }
    return c;
  };
  FormulaPtr body = map_atoms(matrix, [&](const Formula& a) -> FormulaPtr {
    if (a.op == Op::Eq) {
      if (offsets(a.args[0]) == offsets(a.args[1])) return f_true();
      throw Error("localize: unsupported term shape, equality between distinct successor terms");
    }
    if (a.op != Op::Atom) throw Error("localize: unsupported atom");
    if (a.args.empty()) {
      if (!nullary.count(a.sym)) throw Error("localize: unsupported atom " + a.sym);
      return at(a.sym);
    }
    std::string p = a.sym;
    int dim;
    if (is_dim_atom(a.sym, "min", &dim)) p = flag("min", dim);
    else if (is_dim_atom(a.sym, "max", &dim)) p = flag("max", dim);
    return at(shift(p, offsets(a.args[0])));
  });
  M[0].push_back(body);
  psi[0].push_back(body);
  LocalizedSentence l{s, x, {}, {}, {}};
  for (int i = 0; i < d; ++i) {
    l.m.push_back(f_and(m[i]));
    l.M.push_back(f_and(M[i]));
    l.psi.push_back(f_and(psi[i]));
  }
  l.sentence = localized_sentence(l);
  return l;
}

// ---------------------------------------------------------------------------------------------
// Cardinality sentences

namespace {

struct SNode {
  bool list = false;
  std::string tok;
  std::vector<SNode> items;
  std::size_t begin = 0, end = 0;
  int line = 1;
};

struct MiniReader {
  const std::string& t;
  std::size_t i = 0;
  int line = 1;
  void skip() {
    while (i < t.size()) {
      if (t[i] == '\n') ++line;
      if (std::isspace(static_cast<unsigned char>(t[i]))) ++i;
      else if (t[i] == ';')
        while (i < t.size() && t[i] != '\n') ++i;
      else break;
    }
  }
  SNode read() {
    skip();
    SNode n;
    n.line = line;
    n.begin = i;
    if (i >= t.size()) throw Error("parse error at line " + std::to_string(line) + ": unexpected end of input");
    if (t[i] == ')') throw Error("parse error at line " + std::to_string(line) + ": unexpected ')'");
    if (t[i] == '(') {
      ++i;
      n.list = true;
      while (true) {
        skip();
        if (i >= t.size()) throw Error("parse error at line " + std::to_string(n.line) + ": unclosed '('");
        if (t[i] == ')') {
          ++i;
          break;
        }
        n.items.push_back(read());
      }
    } else {
      while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i])) && t[i] != '(' && t[i] != ')') n.tok += t[i++];
    }
    n.end = i;
    return n;
  }
};

}  // namespace

CardinalitySentence parse_cardinality(const std::string& text, const Signature& sig) {
  if (sig.kind != Encoding::Pixel) throw Error("cardinality sentences use a pixel signature");
  MiniReader rd{text};
  SNode root = rd.read();
  rd.skip();
  if (rd.i != text.size()) throw Error("parse error at line " + std::to_string(rd.line) + ": trailing input");
  CardinalitySentence c{sig, {}, nullptr};
  auto fail = [](const SNode& n, const std::string& msg) {
    throw Error("parse error at line " + std::to_string(n.line) + ": " + msg);
  };
  std::function<FormulaPtr(const SNode&)> go = [&](const SNode& n) -> FormulaPtr {
    if (!n.list) {
      if (n.tok == "true") return f_true();
      if (n.tok == "false") return f_false();
      fail(n, "expected a threshold formula, got '" + n.tok + "'");
    }
    if (n.items.empty() || n.items[0].list) fail(n, "expected a keyword");
    const std::string& h = n.items[0].tok;
    std::vector<FormulaPtr> kids;
    if (h == "atleast") {
      if (n.items.size() != 4 || n.items[1].list || n.items[2].list) fail(n, "expected (atleast k var formula)");
      int k = 0;
      try {
        k = std::stoi(n.items[1].tok);
      } catch (...) {
        fail(n.items[1], "threshold must be an integer");
      }
      if (k < 1) fail(n.items[1], "threshold must be at least 1");
      const std::string& v = n.items[2].tok;
      std::string sub = text.substr(n.items[3].begin, n.items[3].end - n.items[3].begin);
      FormulaPtr f;
      try {
        f = parse_formula("(forall (" + v + ") " + sub + ")", sig);
      } catch (const Error& e) {
        fail(n, std::string("in threshold formula: ") + e.what());
      }
      f = f->kids[0];
      if (!quantifier_free(f)) fail(n, "threshold formula must be quantifier-free");
      c.thresholds.push_back({v, f, k});
      return atom("#" + std::to_string(c.thresholds.size() - 1), {});
    }
    for (std::size_t i = 1; i < n.items.size(); ++i) kids.push_back(go(n.items[i]));
    if (h == "and") return f_and(kids);
    if (h == "or") return f_or(kids);
    if (h == "not" && kids.size() == 1) return f_not(kids[0]);
    if (kids.size() == 2) {
      if (h == "implies") return f_implies(kids[0], kids[1]);
      if (h == "iff") return f_iff(kids[0], kids[1]);
      if (h == "xor") return f_xor(kids[0], kids[1]);
    }
    fail(n, "unknown or malformed connective '" + h + "'");
    return nullptr;
  };
  c.combination = go(root);
  return c;
}

std::string render_cardinality(const CardinalitySentence& c) {
  std::function<std::string(const FormulaPtr&)> go = [&](const FormulaPtr& f) -> std::string {
    switch (f->op) {
      case Op::True: return "true";
      case Op::False: return "false";
      case Op::Atom: {
        const Threshold& t = c.thresholds.at(std::stoul(f->sym.substr(1)));
        return "(atleast " + std::to_string(t.k) + " " + t.var + " " + render_formula(t.psi, c.sig) + ")";
      }
      default: break;
    }
    std::string head = f->op == Op::And ? "and" : f->op == Op::Or ? "or" : f->op == Op::Not ? "not"
                     : f->op == Op::Implies ? "implies" : f->op == Op::Iff ? "iff" : "xor";
    std::string out = "(" + head;
    for (auto& k : f->kids) out += " " + go(k);
    return out + ")";
  };
  return go(c.combination);
}

bool eval_cardinality(const CardinalitySentence& c, const Picture& p) {
  EsoSentence carrier{c.sig, {}, f_true()};
  FiniteStructure s = sentence_structure(p, carrier);
  std::vector<bool> val;
  for (auto& t : c.thresholds) {
    int count = 0;
    for (int e = 1; e <= s.m; ++e) count += eval_fo(s, t.psi, {{t.var, e}});
    val.push_back(count >= t.k);
  }
  std::function<bool(const FormulaPtr&)> go = [&](const FormulaPtr& f) -> bool {
    switch (f->op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Atom: return val.at(std::stoul(f->sym.substr(1)));
      case Op::Not: return !go(f->kids[0]);
      case Op::And: return std::all_of(f->kids.begin(), f->kids.end(), go);
      case Op::Or: return std::any_of(f->kids.begin(), f->kids.end(), go);
      case Op::Implies: return !go(f->kids[0]) || go(f->kids[1]);
      case Op::Iff: return go(f->kids[0]) == go(f->kids[1]);
      case Op::Xor: return go(f->kids[0]) != go(f->kids[1]);
      default: throw Error("malformed cardinality combination");
    }
  };
  return go(c.combination);
}

namespace {

FormulaPtr substitute(const FormulaPtr& f, const std::string& v, const Term& by) {
  return map_atoms(f, [&](const Formula& a) -> FormulaPtr {
    Formula c = a;
    for (auto& t : c.args)
      if (t.var == v) {
        Term n = by;
        n.sucs.insert(n.sucs.end(), t.sucs.begin(), t.sucs.end());
        t = n;
      }
    return std::make_shared<Formula>(c);
  });
}

}  // namespace

EsoSentence cardinality_to_monadic(const CardinalitySentence& c, int max_k) {
  if (c.sig.kind != Encoding::Pixel) throw Error("cardinality_to_monadic: pixel signature required");
  const int d = c.sig.d;
  const std::string x = "x";
  EsoSentence s{c.sig, {}, nullptr};
  std::set<std::string> taken;
  auto fresh = [&](const std::string& base) {
    std::string n = fresh_name(base, taken);
    taken.insert(n);
    s.guessed.push_back({n, 1});
    return n;
  };
  auto X = [&] { return tvar(x); };
  auto bnd = [&](const char* b, int i) { return atom(std::string(b) + "_" + std::to_string(i), {X()}); };
  std::vector<FormulaPtr> max_all_v;
  for (int i = 1; i <= d; ++i) max_all_v.push_back(bnd("max", i));
  std::vector<FormulaPtr> min_all_v;
  for (int i = 1; i <= d; ++i) min_all_v.push_back(bnd("min", i));
  FormulaPtr max_lex = f_and(max_all_v), min_lex = f_and(min_all_v);
  // Lexicographic successor: (¬max_i ∧ ⋀_{j>i} max_j) selects suc_i ∘ … ∘ suc_d.
  auto with_suc_lex = [&](const std::function<FormulaPtr(const Term&)>& phi) {
    std::vector<FormulaPtr> parts;
    for (int i = 1; i <= d; ++i) {
      std::vector<FormulaPtr> g{f_not(bnd("max", i))};
      for (int j = i + 1; j <= d; ++j) g.push_back(bnd("max", j));
      Term t = X();
      for (int j = d; j >= i; --j) t = tsuc(t, j);
      parts.push_back(f_implies(f_and(g), phi(t)));
    }
    return f_and(parts);
  };
  std::vector<FormulaPtr> clauses;
  std::map<std::string, FormulaPtr> at_max;
  for (std::size_t ti = 0; ti < c.thresholds.size(); ++ti) {
    const Threshold& th = c.thresholds[ti];
    if (th.k > max_k) throw Error("cardinality_to_monadic: threshold " + std::to_string(th.k) + " exceeds the bound " + std::to_string(max_k));
    FormulaPtr psi = substitute(th.psi, th.var, X());
    std::vector<std::string> u;
    std::string tag = "U" + std::to_string(ti);
    for (int j = 0; j < th.k; ++j) u.push_back(fresh(tag + "eq" + std::to_string(j)));
    u.push_back(fresh(tag + "ge" + std::to_string(th.k)));  // u[j] for j < k, u[k] = at least k
    const int k = th.k;
    auto U = [&](int j, const Term& t) { return atom(u[std::min(j, k)], {t}); };
    for (int i = 0; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) clauses.push_back(f_or(f_not(U(i, X())), f_not(U(j, X()))));
    clauses.push_back(f_implies(f_and(min_lex, f_not(psi)), U(0, X())));
    clauses.push_back(f_implies(f_and(min_lex, psi), U(1, X())));
    clauses.push_back(with_suc_lex([&](const Term& t) {
      FormulaPtr psi_next = substitute(th.psi, th.var, t);
      std::vector<FormulaPtr> steps;
      for (int i = 0; i < k; ++i) {
        steps.push_back(f_implies(f_and(U(i, X()), f_not(psi_next)), U(i, t)));
        steps.push_back(f_implies(f_and(U(i, X()), psi_next), U(i + 1, t)));
      }
      steps.push_back(f_implies(U(k, X()), U(k, t)));
      return f_and(steps);
    }));
    at_max["#" + std::to_string(ti)] = atom(u[k], {X()});
  }
  FormulaPtr verdict = map_atoms(c.combination, [&](const Formula& a) -> FormulaPtr { return at_max.at(a.sym); });
  clauses.push_back(f_implies(max_lex, verdict));
  s.body = f_forall({x}, f_and(clauses));
  return s;
}

// ---------------------------------------------------------------------------------------------
// Skolemization

EsoSentence skolemize_universal(const EsoSentence& in, int d) {
  if (in.sig.kind != Encoding::Coordinate) throw Error("skolemize_universal: coordinate signature required");
  auto names = bound_vars(in.body);
  std::set<std::string> vars(names.begin(), names.end());
  int used = static_cast<int>(vars.size());
  if (d <= 0) d = std::max(1, used);
  if (used > d) throw Error("skolemize_universal: " + std::to_string(used) + " variables exceed d=" + std::to_string(d));
  if (auto sp = split_universal(in.body)) {
    EsoSentence out = in;
    return out;
  }
  std::vector<std::string> order(vars.begin(), vars.end());
  for (int i = 1; static_cast<int>(order.size()) < d; ++i) {
    std::string v = "v" + std::to_string(i);
    if (!vars.count(v)) {
      vars.insert(v);
      order.push_back(v);
    }
  }
  EsoSentence s = in;
  std::set<std::string> taken;
  for (auto& g : s.guessed) taken.insert(g.name);
  auto fresh = [&](const std::string& base, int ar) {
    std::string n = fresh_name(base, taken);
    taken.insert(n);
    s.guessed.push_back({n, ar});
    return n;
  };
  std::vector<FormulaPtr> universal;                     // closed under ∀ of all variables
  std::vector<std::pair<std::string, FormulaPtr>> exist;  // ∀(others) ∃z θ
  auto sorted_free = [&](const FormulaPtr& f) {
    auto fv = free_vars(f);
    std::vector<std::string> out;
    for (auto& v : order)
      if (fv.count(v)) out.push_back(v);
    return out;
  };
  int counter = 0;
  std::function<FormulaPtr(const FormulaPtr&)> go = [&](const FormulaPtr& f) -> FormulaPtr {
    if (is_atomic(*f) || f->op == Op::True || f->op == Op::False) return f;
    if (f->op == Op::Forall || f->op == Op::Exists) {
      FormulaPtr body = go(f->kids[0]);
      // Peel variables innermost first so each definition quantifies a single variable.
      for (auto it = f->vars.rbegin(); it != f->vars.rend(); ++it) {
        const std::string& z = *it;
        FormulaPtr q = f->op == Op::Forall ? f_forall({z}, body) : f_exists({z}, body);
        auto fv = sorted_free(q);
        std::vector<Term> args;
        for (auto& v : fv) args.push_back(tvar(v));
        std::string r = fresh("S" + std::to_string(++counter), static_cast<int>(fv.size()));
        FormulaPtr ra = atom(r, args);
        if (f->op == Op::Forall) {
          universal.push_back(f_implies(ra, body));
          exist.emplace_back(z, f_or(ra, f_not(body)));
        } else {
          universal.push_back(f_implies(body, ra));
          exist.emplace_back(z, f_or(f_not(ra), body));
        }
        body = ra;
      }
      return body;
    }
    std::vector<FormulaPtr> kids;
    for (auto& k : f->kids) kids.push_back(go(k));
    return std::make_shared<Formula>(Formula{f->op, f->sym, f->args, kids, f->vars});
  };
  universal.push_back(go(in.body));
  for (auto& [z, theta] : exist) {
    auto fv = sorted_free(f_exists({z}, theta));
    std::vector<Term> args;
    for (auto& v : fv) args.push_back(tvar(v));
    args.push_back(tvar(z));
    std::string w = fresh("W" + std::to_string(++counter), static_cast<int>(args.size()));
    auto next = args;
    next.back() = tsuc(next.back());
    FormulaPtr mn = atom("min", {tvar(z)}), mx = atom("max", {tvar(z)});
    universal.push_back(f_implies(mn, f_iff(atom(w, args), theta)));
    universal.push_back(
        f_implies(f_not(mx), f_iff(atom(w, next), f_or(substitute(theta, z, tsuc(tvar(z))), atom(w, args)))));
    universal.push_back(f_implies(mx, atom(w, args)));
  }
  s.body = f_forall(order, f_and(universal));
  return s;
}

// ---------------------------------------------------------------------------------------------
// Arity reduction

EsoSentence reduce_arities(const EsoSentence& in) {
  if (in.sig.kind != Encoding::Coordinate) throw Error("reduce_arities: coordinate signature required");
  auto sp = split_universal(in.body);
  if (!sp) throw Error("reduce_arities: matrix is not quantifier-free under a universal prefix");
  const auto& xs = sp->first;
  const int d = static_cast<int>(xs.size());
  std::map<std::string, int> big;
  for (auto& g : in.guessed)
    if (g.arity > d) big[g.name] = g.arity;
  if (big.empty()) return in;
  EsoSentence s = in;
  s.guessed.erase(std::remove_if(s.guessed.begin(), s.guessed.end(), [&](const GuessedSymbol& g) { return big.count(g.name); }),
                  s.guessed.end());
  std::set<std::string> taken;
  for (auto& g : in.guessed) taken.insert(g.name);
  std::map<std::string, std::vector<std::pair<std::vector<Term>, std::string>>> occ;
  auto ident = [&] {
    std::vector<Term> out;
    for (auto& v : xs) out.push_back(tvar(v));
    return out;
  };
  FormulaPtr matrix = map_atoms(sp->second, [&](const Formula& a) -> FormulaPtr {
    if (a.op != Op::Atom || !big.count(a.sym)) return std::make_shared<Formula>(a);
    auto& list = occ[a.sym];
    for (auto& [args, name] : list)
      if (args == a.args) return atom(name, ident());
    std::string name = fresh_name(a.sym + "_" + std::to_string(list.size() + 1), taken);
    taken.insert(name);
    s.guessed.push_back({name, d});
    list.emplace_back(a.args, name);
    return atom(name, ident());
  });
  auto pos = [&](const std::string& v) { return static_cast<int>(std::find(xs.begin(), xs.end(), v) - xs.begin()); };
  std::vector<FormulaPtr> clauses{matrix};
  for (auto& [sym, list] : occ) {
    for (auto& [args, name] : list) {
      std::vector<bool> seen(d, false);
      for (auto& t : args) seen[pos(t.var)] = true;
      for (int i = 0; i < d; ++i)
        if (!seen[i]) {
          auto sh = ident();
          sh[i] = tsuc(sh[i]);
          clauses.push_back(f_iff(atom(name, ident()), atom(name, sh)));
        }
    }
    for (std::size_t p = 0; p < list.size(); ++p)
      for (std::size_t q = p; q < list.size(); ++q) {
        const auto& ta = list[p].first;
        const auto& tb = list[q].first;
        // Nodes 0..d-1: variables of the left copy, d..2d-1: the right copy. Edge weights are offsets.
        std::vector<std::vector<std::pair<int, int>>> adj(2 * d);
        for (std::size_t k = 0; k < ta.size(); ++k) {
          int u = pos(ta[k].var), v = d + pos(tb[k].var);
          int w = static_cast<int>(ta[k].sucs.size()) - static_cast<int>(tb[k].sucs.size());  // val(v) = val(u) + w
          adj[u].push_back({v, w});
          adj[v].push_back({u, -w});
        }
        std::vector<int> comp(2 * d, -1), pot(2 * d, 0);
        std::set<std::pair<int, int>> cycles;  // (component, offset that must vanish modulo n)
        int ncomp = 0;
        for (int st = 0; st < 2 * d; ++st) {
          if (comp[st] >= 0 || adj[st].empty()) continue;
          std::vector<int> stack{st}, members;
          comp[st] = ncomp;
          while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            members.push_back(u);
            for (auto [v, w] : adj[u]) {
              if (comp[v] < 0) {
                comp[v] = ncomp;
                pot[v] = pot[u] + w;
                stack.push_back(v);
              } else if (pot[v] != pot[u] + w) {
                cycles.insert({ncomp, std::abs(pot[v] - pot[u] - w)});
              }
            }
          }
          int lo = pot[members[0]];
          for (int u : members) lo = std::min(lo, pot[u]);
          for (int u : members) pot[u] -= lo;
          ++ncomp;
        }
        if (ncomp > d) throw Error("reduce_arities: internal error, unification needs more than d variables");
        auto term_of = [&](int node) {
          if (comp[node] < 0) return tvar(xs[0]);
          return Term{xs[comp[node]], std::vector<int>(pot[node], 0)};
        };
        std::vector<Term> left, right;
        for (int i = 0; i < d; ++i) {
          left.push_back(term_of(i));
          right.push_back(term_of(d + i));
        }
        std::vector<FormulaPtr> guards;
        for (auto [cpt, delta] : cycles) guards.push_back(f_eq(Term{xs[cpt], std::vector<int>(delta, 0)}, tvar(xs[cpt])));
        FormulaPtr link = f_iff(atom(list[p].second, left), atom(list[q].second, right));
        if (p == q && left == right) continue;
        clauses.push_back(f_implies(f_and(guards), link));
      }
  }
  s.body = f_forall(xs, f_and(clauses));
  return s;
}

}  // namespace picwb
