#include "picwb/sat.hpp"

#include <algorithm>
#include <cmath>

namespace picwb {

int SatSolver::new_var() {
  int v = num_vars();
  assign_.push_back(-1);
  phase_.push_back(1);
  model_.push_back(0);
  level_.push_back(0);
  reason_.push_back(-1);
  activity_.push_back(0);
  seen_.push_back(0);
  heap_pos_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

void SatSolver::heap_insert(int v) {
  if (heap_pos_[v] >= 0) return;
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

void SatSolver::heap_up(int i) {
  int v = heap_[i];
  while (i > 0) {
    int p = (i - 1) / 2;
    if (activity_[heap_[p]] >= activity_[v]) break;
    heap_[i] = heap_[p];
    heap_pos_[heap_[i]] = i;
    i = p;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void SatSolver::heap_down(int i) {
  int v = heap_[i], n = static_cast<int>(heap_.size());
  while (true) {
    int c = 2 * i + 1;
    if (c >= n) break;
    if (c + 1 < n && activity_[heap_[c + 1]] > activity_[heap_[c]]) ++c;
    if (activity_[heap_[c]] <= activity_[v]) break;
    heap_[i] = heap_[c];
    heap_pos_[heap_[i]] = i;
    i = c;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

int SatSolver::heap_pop() {
  int v = heap_[0];
  heap_pos_[v] = -1;
  int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return v;
}

void SatSolver::bump_var(int v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void SatSolver::bump_clause(Clause& c) {
  if ((c.activity += cla_inc_) > 1e20) {
    for (auto& k : clauses_)
      if (k.learnt) k.activity *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void SatSolver::attach(int cref) {
  const auto& l = clauses_[cref].lits;
  watches_[l[0] ^ 1].push_back({cref, l[1]});
  watches_[l[1] ^ 1].push_back({cref, l[0]});
}

bool SatSolver::add_clause(std::vector<int> lits) {
  if (unsat_) return false;
  if (level() > 0) backtrack(0);
  std::sort(lits.begin(), lits.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    int l = lits[i];
    if (i + 1 < lits.size() && lits[i + 1] == (l ^ 1)) return true;
    if (!out.empty() && out.back() == l) continue;
    int v = value(l);
    if (v == 1) return true;
    if (v == 0) continue;
    out.push_back(l);
  }
  if (out.empty()) return !(unsat_ = true);
  if (out.size() == 1) {
    enqueue(out[0], -1);
    if (propagate() >= 0) unsat_ = true;
    return !unsat_;
  }
  clauses_.push_back({std::move(out)});
  attach(static_cast<int>(clauses_.size()) - 1);
  return true;
}

void SatSolver::enqueue(int lit, int reason) {
  int v = lit >> 1;
  assign_[v] = static_cast<std::int8_t>((lit & 1) ^ 1);
  level_[v] = level();
  reason_[v] = reason;
  trail_.push_back(lit);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int p = trail_[qhead_++];
    auto& ws = watches_[p];
    std::size_t i = 0, j = 0;
    int false_lit = p ^ 1;
    while (i < ws.size()) {
      Watch w = ws[i];
      if (value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[w.cref];
      if (c.deleted) {
        ++i;
        continue;
      }
      auto& l = c.lits;
      if (l[0] == false_lit) std::swap(l[0], l[1]);
      ++i;
      if (value(l[0]) == 1) {
        ws[j++] = {w.cref, l[0]};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < l.size(); ++k)
        if (value(l[k]) != 0) {
          std::swap(l[1], l[k]);
          watches_[l[1] ^ 1].push_back({w.cref, l[0]});
          moved = true;
          break;
        }
      if (moved) continue;
      ws[j++] = {w.cref, l[0]};
      if (value(l[0]) == 0) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
      enqueue(l[0], w.cref);
    }
    ws.resize(j);
  }
  return -1;
}

bool SatSolver::redundant(int lit) {
  int r = reason_[lit >> 1];
  if (r < 0) return false;
  for (int q : clauses_[r].lits) {
    int v = q >> 1;
    if (v == (lit >> 1)) continue;
    if (!seen_[v] && level_[v] > 0) return false;
  }
  return true;
}

void SatSolver::analyze(int confl, std::vector<int>& out, int& bt_level, int& lbd) {
  out.assign(1, 0);
  int pending = 0, p = -1;
  std::size_t idx = trail_.size();
  do {
    Clause& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (int q : c.lits) {
      if (p >= 0 && q == p) continue;
      int v = q >> 1;
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump_var(v);
      if (level_[v] >= level())
        ++pending;
      else
        out.push_back(q);
    }
    while (!seen_[trail_[--idx] >> 1]) {
    }
    p = trail_[idx];
    confl = reason_[p >> 1];
    seen_[p >> 1] = 0;
    --pending;
  } while (pending > 0);
  out[0] = p ^ 1;
  std::vector<int> kept{out[0]};
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!redundant(out[i])) kept.push_back(out[i]);
  for (int q : out) seen_[q >> 1] = 0;
  out.swap(kept);
  bt_level = 0;
  if (out.size() > 1) {
    std::size_t mx = 1;
    for (std::size_t i = 2; i < out.size(); ++i)
      if (level_[out[i] >> 1] > level_[out[mx] >> 1]) mx = i;
    std::swap(out[1], out[mx]);
    bt_level = level_[out[1] >> 1];
  }
  std::vector<int> lv;
  for (int q : out) lv.push_back(level_[q >> 1]);
  std::sort(lv.begin(), lv.end());
  lbd = static_cast<int>(std::unique(lv.begin(), lv.end()) - lv.begin());
}

void SatSolver::backtrack(int lvl) {
  if (level() <= lvl) return;
  for (std::size_t i = trail_.size(); i > static_cast<std::size_t>(trail_lim_[lvl]); --i) {
    int v = trail_[i - 1] >> 1;
    phase_[v] = assign_[v];
    assign_[v] = -1;
    reason_[v] = -1;
    heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

int SatSolver::pick_branch() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assign_[v] < 0) return 2 * v + (phase_[v] ? 0 : 1);
  }
  return -1;
}

void SatSolver::reduce_db() {
  std::vector<int> learnt;
  for (int i = 0; i < static_cast<int>(clauses_.size()); ++i)
    if (clauses_[i].learnt && !clauses_[i].deleted && clauses_[i].lbd > 2) learnt.push_back(i);
  std::sort(learnt.begin(), learnt.end(), [&](int a, int b) {
    if (clauses_[a].lbd != clauses_[b].lbd) return clauses_[a].lbd > clauses_[b].lbd;
    return clauses_[a].activity < clauses_[b].activity;
  });
  std::vector<std::uint8_t> locked(clauses_.size(), 0);
  for (int lit : trail_)
    if (reason_[lit >> 1] >= 0) locked[reason_[lit >> 1]] = 1;
  for (std::size_t k = 0; k < learnt.size() / 2; ++k)
    if (!locked[learnt[k]]) {
      clauses_[learnt[k]].deleted = true;
      clauses_[learnt[k]].lits.clear();
      clauses_[learnt[k]].lits.shrink_to_fit();
      --learnts_;
    }
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watch& w) { return clauses_[w.cref].deleted; }), ws.end());
}

static double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

SatSolver::Result SatSolver::solve(const std::vector<int>& assumptions, long budget) {
  if (unsat_) return Result::Unsat;
  backtrack(0);
  if (propagate() >= 0) {
    unsat_ = true;
    return Result::Unsat;
  }
  long start = conflicts_;
  int restarts = 0;
  long next_reduce = 4000 + learnts_;
  std::vector<int> learnt;
  while (true) {
    long limit = static_cast<long>(100 * luby(2, restarts++));
    long local = 0;
    while (true) {
      int confl = propagate();
      if (confl >= 0) {
        ++conflicts_;
        ++local;
        if (level() == 0) {
          unsat_ = true;
          return Result::Unsat;
        }
        int bt, lbd;
        analyze(confl, learnt, bt, lbd);
        backtrack(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          clauses_.push_back({learnt, true, false, lbd, 0});
          int cref = static_cast<int>(clauses_.size()) - 1;
          attach(cref);
          bump_clause(clauses_[cref]);
          ++learnts_;
          enqueue(learnt[0], cref);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        continue;
      }
      if (budget >= 0 && conflicts_ - start > budget) {
        backtrack(0);
        return Result::Unknown;
      }
      if (local >= limit) {
        backtrack(0);
        break;
      }
      if (learnts_ > next_reduce) {
        reduce_db();
        next_reduce += 2000;
      }
      int next = -1;
      while (level() < static_cast<int>(assumptions.size())) {
        int a = assumptions[level()];
        int v = value(a);
        if (v == 1) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (v == 0) {
          backtrack(0);
          return Result::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (next < 0) next = pick_branch();
      if (next < 0) {
        for (int v = 0; v < num_vars(); ++v) model_[v] = assign_[v];
        backtrack(0);
        return Result::Sat;
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(next, -1);
    }
  }
}

int CircuitEncoder::encode(Lit root) {
  int top = root >> 1;
  if (static_cast<int>(var_of_node_.size()) <= top) var_of_node_.resize(c_.size(), -1);
  std::vector<int> stack{top};
  while (!stack.empty()) {
    int i = stack.back();
    if (var_of_node_[i] >= 0) {
      stack.pop_back();
      continue;
    }
    const auto& nd = c_.node(i);
    if (nd.kind == Circuit::Kind::And || nd.kind == Circuit::Kind::Xor) {
      int a = nd.a >> 1, b = nd.b >> 1;
      bool ready = true;
      if (var_of_node_[a] < 0) stack.push_back(a), ready = false;
      if (var_of_node_[b] < 0) stack.push_back(b), ready = false;
      if (!ready) continue;
    }
    stack.pop_back();
    int x = s_.new_var();
    var_of_node_[i] = x;
    int X = 2 * x;
    auto lit = [&](Lit l) { return 2 * var_of_node_[l >> 1] + (l & 1); };
    switch (nd.kind) {
      case Circuit::Kind::Const: s_.add_clause({X}); break;
      case Circuit::Kind::Input: break;
      case Circuit::Kind::And: {
        int a = lit(nd.a), b = lit(nd.b);
        s_.add_clause({X ^ 1, a});
        s_.add_clause({X ^ 1, b});
        s_.add_clause({X, a ^ 1, b ^ 1});
        break;
      }
      case Circuit::Kind::Xor: {
        int a = lit(nd.a), b = lit(nd.b);
        s_.add_clause({X ^ 1, a, b});
        s_.add_clause({X ^ 1, a ^ 1, b ^ 1});
        s_.add_clause({X, a ^ 1, b});
        s_.add_clause({X, a, b ^ 1});
        break;
      }
    }
  }
  return 2 * var_of_node_[top] + (root & 1);
}

void CircuitEncoder::assert_true(Lit root) { s_.add_clause({encode(root)}); }

int CircuitEncoder::input_var(int index) const {
  int nd = c_.input_node(index);
  if (nd < 0 || nd >= static_cast<int>(var_of_node_.size())) return -1;
  return var_of_node_[nd];
}

bool CircuitEncoder::input_value(int index) const {
  int v = input_var(index);
  return v >= 0 && s_.model_value(v);
}

}  // namespace picwb
