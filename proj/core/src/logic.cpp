#include "picwb/logic.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace picwb {

Term tvar(const std::string& v) { return Term{v, {}}; }
Term tsuc(Term t, int dim) {
  t.sucs.push_back(dim);
  return t;
}

static FormulaPtr mk(Op op) { return std::make_shared<Formula>(Formula{op, {}, {}, {}, {}}); }

FormulaPtr f_true() {
  static FormulaPtr t = mk(Op::True);
  return t;
}
FormulaPtr f_false() {
  static FormulaPtr f = mk(Op::False);
  return f;
}
FormulaPtr f_bool(bool v) { return v ? f_true() : f_false(); }
FormulaPtr atom(const std::string& sym, std::vector<Term> args) {
  return std::make_shared<Formula>(Formula{Op::Atom, sym, std::move(args), {}, {}});
}
FormulaPtr f_eq(Term a, Term b) { return std::make_shared<Formula>(Formula{Op::Eq, "=", {std::move(a), std::move(b)}, {}, {}}); }
FormulaPtr f_lt(Term a, Term b) { return std::make_shared<Formula>(Formula{Op::Lt, "<", {std::move(a), std::move(b)}, {}, {}}); }
FormulaPtr f_not(FormulaPtr f) { return std::make_shared<Formula>(Formula{Op::Not, {}, {}, {std::move(f)}, {}}); }
FormulaPtr f_and(std::vector<FormulaPtr> fs) {
  if (fs.size() == 1) return fs[0];
  return std::make_shared<Formula>(Formula{Op::And, {}, {}, std::move(fs), {}});
}
FormulaPtr f_or(std::vector<FormulaPtr> fs) {
  if (fs.size() == 1) return fs[0];
  return std::make_shared<Formula>(Formula{Op::Or, {}, {}, std::move(fs), {}});
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return f_and(std::vector<FormulaPtr>{std::move(a), std::move(b)}); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return f_or(std::vector<FormulaPtr>{std::move(a), std::move(b)}); }
static FormulaPtr binary(Op op, FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(Formula{op, {}, {}, {std::move(a), std::move(b)}, {}});
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return binary(Op::Implies, std::move(a), std::move(b)); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return binary(Op::Iff, std::move(a), std::move(b)); }
FormulaPtr f_xor(FormulaPtr a, FormulaPtr b) { return binary(Op::Xor, std::move(a), std::move(b)); }
FormulaPtr f_forall(std::vector<std::string> vars, FormulaPtr f) {
  if (vars.empty()) return f;
  return std::make_shared<Formula>(Formula{Op::Forall, {}, {}, {std::move(f)}, std::move(vars)});
}
FormulaPtr f_exists(std::vector<std::string> vars, FormulaPtr f) {
  if (vars.empty()) return f;
  return std::make_shared<Formula>(Formula{Op::Exists, {}, {}, {std::move(f)}, std::move(vars)});
}

bool is_atomic(const Formula& f) { return f.op == Op::Atom || f.op == Op::Eq || f.op == Op::Lt; }

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (a->op != b->op || a->sym != b->sym || a->args != b->args || a->vars != b->vars || a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

bool structurally_equal(const EsoSentence& a, const EsoSentence& b) {
  return a.sig.kind == b.sig.kind && a.sig.d == b.sig.d && a.sig.alphabet == b.sig.alphabet && a.guessed == b.guessed &&
         equal(a.body, b.body);
}

bool is_input_symbol(const std::string& sym) { return sym.size() > 2 && sym.compare(0, 2, "Q_") == 0; }
std::string input_letter(const std::string& sym) { return sym.substr(2); }

static std::optional<int> indexed(const std::string& sym, const std::string& prefix) {
  if (sym.size() <= prefix.size() || sym.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  int v = 0;
  for (std::size_t i = prefix.size(); i < sym.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(sym[i]))) return std::nullopt;
    v = v * 10 + (sym[i] - '0');
    if (v > 1000) return std::nullopt;
  }
  if (sym[prefix.size()] == '0') return std::nullopt;
  return v;
}

bool is_builtin_atom(const Signature& sig, const std::string& sym, int* arity) {
  int ar = -1;
  if (is_input_symbol(sym)) {
    std::string l = input_letter(sym);
    if (std::find(sig.alphabet.begin(), sig.alphabet.end(), l) != sig.alphabet.end())
      ar = sig.kind == Encoding::Pixel ? 1 : sig.d;
  } else if (sig.kind == Encoding::Coordinate) {
    if (sym == "min" || sym == "max") ar = 1;
  } else {
    for (const char* p : {"min_", "max_"})
      if (auto i = indexed(sym, p); i && *i >= 1 && *i <= sig.d) ar = 1;
  }
  if (arity) *arity = ar;
  return ar >= 0;
}

static bool reserved_name(const std::string& s) {
  static const std::set<std::string> kw{"exists-rel", "forall", "exists", "and", "or", "not", "implies", "iff", "xor",
                                        "true", "false", "suc", "min", "max", "=", "<"};
  return kw.count(s) || is_input_symbol(s) || indexed(s, "suc_") || indexed(s, "min_") || indexed(s, "max_");
}

namespace {

struct SNode {
  bool list = false;
  std::string tok;
  std::vector<SNode> items;
  int line = 1, col = 1;
};

[[noreturn]] void fail_at(int line, int col, const std::string& msg) {
  throw Error("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}
[[noreturn]] void fail_at(const SNode& n, const std::string& msg) { fail_at(n.line, n.col, msg); }

class Reader {
 public:
  explicit Reader(const std::string& t) : t_(t) {}
  SNode read_all() {
    skip();
    if (i_ >= t_.size()) fail_at(line_, col_, "empty input");
    SNode n = read();
    skip();
    if (i_ < t_.size()) fail_at(line_, col_, "trailing input after the sentence");
    return n;
  }

 private:
  void adv() {
    if (t_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(t_[i_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++i_;
  }
  void skip() {
    while (i_ < t_.size()) {
      if (std::isspace(static_cast<unsigned char>(t_[i_])))
        adv();
      else if (t_[i_] == ';')
        while (i_ < t_.size() && t_[i_] != '\n') adv();
      else
        break;
    }
  }
  SNode read() {
    skip();
    SNode n;
    n.line = line_;
    n.col = col_;
    if (i_ >= t_.size()) fail_at(line_, col_, "unexpected end of input");
    if (t_[i_] == ')') fail_at(line_, col_, "unexpected ')'");
    if (t_[i_] == '(') {
      adv();
      n.list = true;
      while (true) {
        skip();
        if (i_ >= t_.size()) fail_at(n, "unclosed '('");
        if (t_[i_] == ')') {
          adv();
          break;
        }
        n.items.push_back(read());
      }
      return n;
    }
    while (i_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[i_])) && t_[i_] != '(' && t_[i_] != ')' &&
           t_[i_] != ';') {
      n.tok += t_[i_];
      adv();
    }
    return n;
  }
  const std::string& t_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

struct Converter {
  Signature sig;
  std::map<std::string, int> guessed;
  bool infer_alpha = false, infer_d = false;
  std::set<std::string> letters;
  int q_arity = -1, max_dim = 0;

  const std::string& head(const SNode& n) {
    if (!n.list || n.items.empty() || n.items[0].list) fail_at(n, "expected a form starting with a keyword or symbol");
    return n.items[0].tok;
  }

  Term term(const SNode& n, const std::set<std::string>& scope) {
    if (!n.list) {
      if (reserved_name(n.tok)) fail_at(n, "expected a variable, got '" + n.tok + "'");
      if (!scope.count(n.tok)) fail_at(n, "unbound variable '" + n.tok + "'");
      return tvar(n.tok);
    }
    const std::string& h = head(n);
    if (n.items.size() != 2) fail_at(n, "successor takes exactly one argument");
    int dim;
    if (h == "suc") {
      if (sig.kind == Encoding::Pixel) fail_at(n, "pixel signatures use suc_i");
      dim = 0;
    } else if (auto i = indexed(h, "suc_")) {
      if (sig.kind != Encoding::Pixel) fail_at(n, "coordinate signatures use suc");
      if (!infer_d && *i > sig.d) fail_at(n, "dimension index out of range in '" + h + "'");
      max_dim = std::max(max_dim, *i);
      dim = *i;
    } else {
      fail_at(n, "unknown function symbol '" + h + "'");
    }
    return tsuc(term(n.items[1], scope), dim);
  }

  FormulaPtr formula(const SNode& n, std::set<std::string>& scope) {
    if (!n.list) {
      if (n.tok == "true") return f_true();
      if (n.tok == "false") return f_false();
      fail_at(n, "expected a formula, got '" + n.tok + "'");
    }
    const std::string& h = head(n);
    auto arity_is = [&](std::size_t k) {
      if (n.items.size() != k + 1) fail_at(n, "'" + h + "' expects " + std::to_string(k) + " arguments");
    };
    if (h == "forall" || h == "exists") {
      arity_is(2);
      const SNode& vs = n.items[1];
      if (!vs.list) fail_at(vs, "expected a variable list");
      std::vector<std::string> vars;
      for (auto& v : vs.items) {
        if (v.list || reserved_name(v.tok)) fail_at(v, "bad variable name");
        if (std::find(vars.begin(), vars.end(), v.tok) != vars.end()) fail_at(v, "variable listed twice");
        vars.push_back(v.tok);
      }
      std::set<std::string> inner = scope;
      inner.insert(vars.begin(), vars.end());
      auto body = formula(n.items[2], inner);
      return h == "forall" ? f_forall(vars, body) : f_exists(vars, body);
    }
    if (h == "and" || h == "or") {
      std::vector<FormulaPtr> kids;
      for (std::size_t i = 1; i < n.items.size(); ++i) kids.push_back(formula(n.items[i], scope));
      Op op = h == "and" ? Op::And : Op::Or;
      return std::make_shared<Formula>(Formula{op, {}, {}, std::move(kids), {}});
    }
    if (h == "not") {
      arity_is(1);
      return f_not(formula(n.items[1], scope));
    }
    if (h == "implies" || h == "iff" || h == "xor") {
      arity_is(2);
      auto a = formula(n.items[1], scope), b = formula(n.items[2], scope);
      return binary(h == "implies" ? Op::Implies : h == "iff" ? Op::Iff : Op::Xor, a, b);
    }
    if (h == "=" || h == "<") {
      if (sig.kind != Encoding::Coordinate) fail_at(n, "'" + h + "' is only available in coordinate signatures");
      arity_is(2);
      auto a = term(n.items[1], scope), b = term(n.items[2], scope);
      return h == "=" ? f_eq(a, b) : f_lt(a, b);
    }
    std::vector<Term> args;
    for (std::size_t i = 1; i < n.items.size(); ++i) args.push_back(term(n.items[i], scope));
    int k = static_cast<int>(args.size());
    if (auto it = guessed.find(h); it != guessed.end()) {
      if (it->second != k)
        fail_at(n, "arity mismatch for '" + h + "': declared " + std::to_string(it->second) + ", used with " +
                       std::to_string(k));
    } else if (is_input_symbol(h) && infer_alpha) {
      letters.insert(input_letter(h));
      if (sig.kind == Encoding::Pixel) {
        if (k != 1) fail_at(n, "arity mismatch for '" + h + "': expected 1");
      } else if (infer_d) {
        if (q_arity >= 0 && q_arity != k) fail_at(n, "arity mismatch for '" + h + "'");
        q_arity = k;
      } else if (k != sig.d) {
        fail_at(n, "arity mismatch for '" + h + "': expected " + std::to_string(sig.d));
      }
    } else if (sig.kind == Encoding::Pixel && infer_d && (indexed(h, "min_") || indexed(h, "max_"))) {
      if (k != 1) fail_at(n, "arity mismatch for '" + h + "': expected 1");
      max_dim = std::max(max_dim, *(indexed(h, "min_") ? indexed(h, "min_") : indexed(h, "max_")));
    } else {
      int ar;
      if (!is_builtin_atom(sig, h, &ar)) fail_at(n, "unknown symbol '" + h + "'");
      if (ar != k) fail_at(n, "arity mismatch for '" + h + "': expected " + std::to_string(ar));
    }
    return atom(h, std::move(args));
  }
};

}  // namespace

static EsoSentence parse_impl(const std::string& text, const Signature& sig, std::vector<GuessedSymbol> pre,
                              bool sentence_form) {
  Reader rd(text);
  SNode root = rd.read_all();
  Converter cv;
  cv.sig = sig;
  cv.infer_alpha = sig.alphabet.empty();
  cv.infer_d = sig.d <= 0;
  if (!cv.infer_alpha) validate_alphabet(sig.alphabet);
  EsoSentence s;
  s.guessed = std::move(pre);
  const SNode* body = &root;
  if (sentence_form && root.list && !root.items.empty() && !root.items[0].list && root.items[0].tok == "exists-rel") {
    if (root.items.size() != 3) fail_at(root, "'exists-rel' expects a declaration list and a formula");
    const SNode& decls = root.items[1];
    if (!decls.list) fail_at(decls, "expected a declaration list");
    for (auto& dcl : decls.items) {
      if (!dcl.list || dcl.items.size() != 2 || dcl.items[0].list || dcl.items[1].list)
        fail_at(dcl, "declaration must be (name arity)");
      const std::string& name = dcl.items[0].tok;
      if (reserved_name(name)) fail_at(dcl, "'" + name + "' clashes with a signature symbol");
      int ar = -1;
      try {
        std::size_t pos;
        ar = std::stoi(dcl.items[1].tok, &pos);
        if (pos != dcl.items[1].tok.size()) ar = -1;
      } catch (...) {
      }
      if (ar < 0) fail_at(dcl.items[1], "arity must be a non-negative integer");
      for (auto& g : s.guessed)
        if (g.name == name) fail_at(dcl, "symbol '" + name + "' declared twice");
      s.guessed.push_back({name, ar});
    }
    body = &root.items[2];
  }
  for (auto& g : s.guessed) cv.guessed[g.name] = g.arity;
  std::set<std::string> scope;
  s.body = cv.formula(*body, scope);
  s.sig = sig;
  if (cv.infer_alpha) s.sig.alphabet.assign(cv.letters.begin(), cv.letters.end());
  if (cv.infer_d) {
    s.sig.d = sig.kind == Encoding::Pixel ? std::max(1, cv.max_dim) : std::max(1, cv.q_arity);
    s.sig.d = std::max(s.sig.d, sig.d > 0 ? sig.d : 1);
  }
  return s;
}

EsoSentence parse_sentence(const std::string& text, const Signature& sig) {
  EsoSentence s = parse_impl(text, sig, {}, true);
  validate_sentence(s);
  return s;
}

FormulaPtr parse_formula(const std::string& text, const Signature& sig, const std::vector<GuessedSymbol>& guessed) {
  return parse_impl(text, sig, guessed, false).body;
}

std::string render_term(const Term& t, const Signature& sig) {
  std::string s = t.var;
  for (int dim : t.sucs) {
    if (sig.kind == Encoding::Pixel || dim > 0)
      s = "(suc_" + std::to_string(dim) + " " + s + ")";
    else
      s = "(suc " + s + ")";
  }
  return s;
}

static void render(const FormulaPtr& f, const Signature& sig, std::string& out) {
  auto list = [&](const char* h, const std::vector<FormulaPtr>& ks) {
    out += "(";
    out += h;
    for (auto& k : ks) {
      out += " ";
      render(k, sig, out);
    }
    out += ")";
  };
  switch (f->op) {
    case Op::True: out += "(and)"; break;
    case Op::False: out += "(or)"; break;
    case Op::Atom:
    case Op::Eq:
    case Op::Lt:
      out += "(" + f->sym;
      for (auto& t : f->args) out += " " + render_term(t, sig);
      out += ")";
      break;
    case Op::Not: list("not", f->kids); break;
    case Op::And: list("and", f->kids); break;
    case Op::Or: list("or", f->kids); break;
    case Op::Implies: list("implies", f->kids); break;
    case Op::Iff: list("iff", f->kids); break;
    case Op::Xor: list("xor", f->kids); break;
    case Op::Forall:
    case Op::Exists: {
      out += f->op == Op::Forall ? "(forall (" : "(exists (";
      for (std::size_t i = 0; i < f->vars.size(); ++i) out += (i ? " " : "") + f->vars[i];
      out += ") ";
      render(f->kids[0], sig, out);
      out += ")";
      break;
    }
  }
}

std::string render_formula(const FormulaPtr& f, const Signature& sig) {
  std::string out;
  render(f, sig, out);
  return out;
}

std::string render_sentence(const EsoSentence& s) {
  std::string body = render_formula(s.body, s.sig);
  if (s.guessed.empty()) return body;
  std::string out = "(exists-rel (";
  for (std::size_t i = 0; i < s.guessed.size(); ++i)
    out += (i ? " (" : "(") + s.guessed[i].name + " " + std::to_string(s.guessed[i].arity) + ")";
  return out + ") " + body + ")";
}

static void check_formula(const FormulaPtr& f, const EsoSentence& s, const std::map<std::string, int>& g,
                          std::set<std::string>& scope) {
  auto check_term = [&](const Term& t) {
    if (!scope.count(t.var)) throw Error("free variable '" + t.var + "'");
    for (int dim : t.sucs) {
      if (s.sig.kind == Encoding::Pixel && (dim < 1 || dim > s.sig.d)) throw Error("bad successor index");
      if (s.sig.kind == Encoding::Coordinate && dim != 0) throw Error("coordinate terms use the single suc");
    }
  };
  switch (f->op) {
    case Op::Atom: {
      int k = static_cast<int>(f->args.size()), ar;
      if (auto it = g.find(f->sym); it != g.end()) {
        if (it->second != k) throw Error("arity mismatch for '" + f->sym + "'");
      } else if (!is_builtin_atom(s.sig, f->sym, &ar)) {
        throw Error("unknown symbol '" + f->sym + "'");
      } else if (ar != k) {
        throw Error("arity mismatch for '" + f->sym + "'");
      }
      for (auto& t : f->args) check_term(t);
      break;
    }
    case Op::Eq:
    case Op::Lt:
      if (s.sig.kind != Encoding::Coordinate) throw Error("'=' and '<' need a coordinate signature");
      for (auto& t : f->args) check_term(t);
      break;
    case Op::Forall:
    case Op::Exists: {
      std::set<std::string> inner = scope;
      inner.insert(f->vars.begin(), f->vars.end());
      check_formula(f->kids[0], s, g, inner);
      break;
    }
    default:
      for (auto& k : f->kids) check_formula(k, s, g, scope);
  }
}

void validate_sentence(const EsoSentence& s) {
  if (s.sig.d < 1) throw Error("signature dimension must be positive");
  validate_alphabet(s.sig.alphabet);
  std::map<std::string, int> g;
  for (auto& sym : s.guessed) {
    if (reserved_name(sym.name)) throw Error("guessed symbol '" + sym.name + "' clashes with the signature");
    if (sym.arity < 0) throw Error("negative arity");
    if (!g.emplace(sym.name, sym.arity).second) throw Error("symbol '" + sym.name + "' declared twice");
  }
  std::set<std::string> scope;
  check_formula(s.body, s, g, scope);
}

bool quantifier_free(const FormulaPtr& f) {
  if (f->op == Op::Forall || f->op == Op::Exists) return false;
  for (auto& k : f->kids)
    if (!quantifier_free(k)) return false;
  return true;
}

std::optional<std::pair<std::vector<std::string>, FormulaPtr>> split_universal(const FormulaPtr& body) {
  std::vector<std::string> vars;
  FormulaPtr f = body;
  while (f->op == Op::Forall) {
    for (auto& v : f->vars) {
      if (std::find(vars.begin(), vars.end(), v) != vars.end()) return std::nullopt;
      vars.push_back(v);
    }
    f = f->kids[0];
  }
  if (!quantifier_free(f)) return std::nullopt;
  return std::make_pair(vars, f);
}

static void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (is_atomic(*f)) {
    for (auto& t : f->args)
      if (!bound.count(t.var)) out.insert(t.var);
    return;
  }
  if (f->op == Op::Forall || f->op == Op::Exists) {
    std::set<std::string> inner = bound;
    inner.insert(f->vars.begin(), f->vars.end());
    collect_free(f->kids[0], inner, out);
    return;
  }
  for (auto& k : f->kids) collect_free(k, bound, out);
}

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> b, out;
  collect_free(f, b, out);
  return out;
}

std::vector<std::string> bound_vars(const FormulaPtr& f) {
  std::vector<std::string> out;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (g->op == Op::Forall || g->op == Op::Exists)
      for (auto& v : g->vars)
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    for (auto& k : g->kids) go(k);
  };
  go(f);
  return out;
}

FormulaPtr map_atoms(const FormulaPtr& f, const std::function<FormulaPtr(const Formula&)>& fn) {
  if (is_atomic(*f)) return fn(*f);
  if (f->kids.empty()) return f;
  std::vector<FormulaPtr> kids;
  bool same = true;
  for (auto& k : f->kids) {
    kids.push_back(map_atoms(k, fn));
    same &= kids.back() == k;
  }
  if (same) return f;
  return std::make_shared<Formula>(Formula{f->op, f->sym, f->args, std::move(kids), f->vars});
}

void visit_atoms(const FormulaPtr& f, const std::function<void(const Formula&)>& fn) {
  if (is_atomic(*f)) {
    fn(*f);
    return;
  }
  for (auto& k : f->kids) visit_atoms(k, fn);
}

std::size_t formula_size(const FormulaPtr& f) {
  std::size_t n = 1;
  for (auto& k : f->kids) n += formula_size(k);
  return n;
}

std::string fresh_name(const std::string& requested, const std::set<std::string>& taken) {
  std::string base = requested;
  while (reserved_name(base + "_1")) base = "r" + base;
  if (!taken.count(base) && !reserved_name(base)) return base;
  for (int i = 1;; ++i) {
    std::string c = base + "_" + std::to_string(i);
    if (!taken.count(c) && !reserved_name(c)) return c;
  }
}

std::set<std::string> symbol_names(const EsoSentence& s) {
  std::set<std::string> out;
  for (auto& g : s.guessed) out.insert(g.name);
  return out;
}

FragmentDescriptor classify_fragment(const EsoSentence& s) {
  FragmentDescriptor fd;
  fd.var_count = static_cast<int>(bound_vars(s.body).size());
  for (auto& g : s.guessed) fd.max_arity = std::max(fd.max_arity, g.arity);
  if (auto sp = split_universal(s.body)) {
    fd.prenex_universal = true;
    fd.prefix_length = static_cast<int>(sp->first.size());
  }
  if (fd.prenex_universal && s.sig.kind == Encoding::Coordinate && fd.prefix_length > 0)
    fd.sorted = is_sorted(s, s.sig.d, fd.prefix_length);
  return fd;
}

bool is_sorted(const EsoSentence& s, int k, int d) {
  if (s.sig.kind != Encoding::Coordinate) throw Error("sortedness is defined for coordinate signatures");
  auto sp = split_universal(s.body);
  if (!sp || static_cast<int>(sp->first.size()) != d) return false;
  const auto& xs = sp->first;
  std::map<std::string, int> g;
  for (auto& sym : s.guessed) {
    if (sym.arity != d) return false;
    g[sym.name] = sym.arity;
  }
  bool ok = true;
  visit_atoms(sp->second, [&](const Formula& a) {
    if (!ok) return;
    if (a.op != Op::Atom) {
      ok = false;
      return;
    }
    if (a.sym == "min" || a.sym == "max") {
      ok = a.args[0].sucs.empty();
      return;
    }
    if (is_input_symbol(a.sym)) {
      if (static_cast<int>(a.args.size()) != k || k > d) {
        ok = false;
        return;
      }
      for (int i = 0; i < k; ++i) ok &= a.args[i] == tvar(xs[i]);
      return;
    }
    if (!g.count(a.sym)) {
      ok = false;
      return;
    }
    int shifted = 0;
    for (int i = 0; i < d; ++i) {
      const Term& t = a.args[i];
      if (t.var != xs[i] || t.sucs.size() > 1) ok = false;
      shifted += static_cast<int>(t.sucs.size());
    }
    ok &= shifted <= 1;
  });
  return ok;
}

}  // namespace picwb
