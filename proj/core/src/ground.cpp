#include <algorithm>

#include "picwb/model_check.hpp"

namespace picwb {

Grounder::Grounder(const FiniteStructure& s, Circuit& c) : s_(s), c_(c) {}

void Grounder::declare(const std::string& name, int arity, int first_input) { guessed_[name] = {arity, first_input}; }

const std::vector<int>& Grounder::function(int dim) {
  auto it = fun_cache_.find(dim);
  if (it != fun_cache_.end()) return *it->second;
  std::string name = dim == 0 ? "suc" : "suc_" + std::to_string(dim);
  auto f = s_.functions.find(name);
  if (f == s_.functions.end()) throw Error("uninterpreted function symbol " + name);
  fun_cache_[dim] = &f->second;
  return f->second;
}

const Relation& Grounder::relation(const std::string& name) {
  auto it = rel_cache_.find(name);
  if (it != rel_cache_.end()) return *it->second;
  auto r = s_.relations.find(name);
  if (r == s_.relations.end()) throw Error("uninterpreted symbol " + name);
  rel_cache_[name] = &r->second;
  return r->second;
}

int Grounder::term_value(const Term& t) {
  int v = -1;
  for (auto it = env_.rbegin(); it != env_.rend(); ++it)
    if (it->first == t.var) {
      v = it->second;
      break;
    }
  if (v < 0) throw Error("unbound variable " + t.var);
  for (int dim : t.sucs) v = function(dim)[v - 1];
  return v;
}

Lit Grounder::ground(const FormulaPtr& f, const Env& env) {
  env_.assign(env.begin(), env.end());
  for (auto& [name, v] : env_)
    if (v < 1 || v > s_.m) throw Error("variable " + name + " assigned outside the domain");
  return go(*f);
}

Lit Grounder::go(const Formula& f) {
  switch (f.op) {
    case Op::True: return kTrue;
    case Op::False: return kFalse;
    case Op::Atom: {
      std::size_t idx = 0;
      for (auto& t : f.args) idx = idx * s_.m + (term_value(t) - 1);
      if (auto g = guessed_.find(f.sym); g != guessed_.end()) {
        if (g->second.arity != static_cast<int>(f.args.size())) throw Error("arity mismatch for " + f.sym);
        return c_.input(g->second.first + static_cast<int>(idx));
      }
      const Relation& r = relation(f.sym);
      if (r.arity != static_cast<int>(f.args.size())) throw Error("arity mismatch for " + f.sym);
      return r.bits[idx] ? kTrue : kFalse;
    }
    case Op::Eq: return term_value(f.args[0]) == term_value(f.args[1]) ? kTrue : kFalse;
    case Op::Lt: {
      const Relation& r = relation("<");
      std::size_t idx = static_cast<std::size_t>(term_value(f.args[0]) - 1) * s_.m + (term_value(f.args[1]) - 1);
      return r.bits[idx] ? kTrue : kFalse;
    }
    case Op::Not: return lnot(go(*f.kids[0]));
    case Op::And:
    case Op::Or: {
      bool conj = f.op == Op::And;
      std::vector<Lit> parts;
      for (auto& k : f.kids) {
        Lit l = go(*k);
        if (l == (conj ? kFalse : kTrue)) return l;
        parts.push_back(l);
      }
      return conj ? c_.mk_and(parts) : c_.mk_or(parts);
    }
    case Op::Implies: {
      Lit a = go(*f.kids[0]);
      if (a == kFalse) return kTrue;
      return c_.mk_implies(a, go(*f.kids[1]));
    }
    case Op::Iff: return c_.mk_iff(go(*f.kids[0]), go(*f.kids[1]));
    case Op::Xor: return c_.mk_xor(go(*f.kids[0]), go(*f.kids[1]));
    case Op::Forall:
    case Op::Exists: {
      bool all = f.op == Op::Forall;
      std::size_t k = f.vars.size(), base = env_.size();
      for (auto& v : f.vars) env_.push_back({v, 1});
      std::vector<Lit> parts;
      Lit result = kTrue;
      bool decided = false;
      while (true) {
        Lit l = go(*f.kids[0]);
        if (l == (all ? kFalse : kTrue)) {
          result = l;
          decided = true;
          break;
        }
        parts.push_back(l);
        std::size_t i = k;
        while (i > 0) {
          if (++env_[base + i - 1].second <= s_.m) break;
          env_[base + i - 1].second = 1;
          --i;
        }
        if (i == 0) break;
      }
      env_.resize(base);
      if (decided) return result;
      return all ? c_.mk_and(parts) : c_.mk_or(parts);
    }
  }
  return kFalse;
}

bool eval_fo(const FiniteStructure& s, const FormulaPtr& f, const Env& env) {
  Circuit c;
  Grounder g(s, c);
  Lit l = g.ground(f, env);
  if (l != kTrue && l != kFalse) throw Error("formula mentions symbols not interpreted in the structure");
  return l == kTrue;
}

}  // namespace picwb
