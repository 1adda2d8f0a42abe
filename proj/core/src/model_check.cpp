#include "picwb/model_check.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <mutex>
#include <thread>

#include "picwb/sat.hpp"

namespace picwb {

namespace {

struct Grounded {
  Circuit circuit;
  Lit root = kFalse;
  std::vector<int> first;  // first input of each guessed symbol
};

std::unique_ptr<Grounded> ground_sentence(const FiniteStructure& s, const EsoSentence& phi) {
  auto g = std::make_unique<Grounded>();
  Grounder gr(s, g->circuit);
  int next = 0;
  for (auto& sym : phi.guessed) {
    g->first.push_back(next);
    gr.declare(sym.name, sym.arity, next);
    next += static_cast<int>(ipow(s.m, sym.arity));
  }
  g->root = gr.ground(phi.body);
  return g;
}

Interpretation interpretation(const FiniteStructure& s, const EsoSentence& phi, const Grounded& g,
                              const std::function<bool(int)>& value) {
  Interpretation out;
  for (std::size_t i = 0; i < phi.guessed.size(); ++i) {
    Relation r;
    r.arity = phi.guessed[i].arity;
    r.bits.assign(ipow(s.m, r.arity), 0);
    for (std::size_t t = 0; t < r.bits.size(); ++t) r.bits[t] = value(g.first[i] + static_cast<int>(t));
    out[phi.guessed[i].name] = std::move(r);
  }
  return out;
}

void check_cap(const FiniteStructure& s, const EsoSentence& phi, std::size_t cap) {
  double total = 0;
  for (auto& g : phi.guessed) {
    total += std::pow(static_cast<double>(s.m), g.arity);
    if (total > static_cast<double>(cap))
      throw CapExceeded("brute-force cap exceeded at guessed symbol " + g.name + " (arity " + std::to_string(g.arity) +
                        "): " + std::to_string(static_cast<long long>(total)) + " relation bits > " + std::to_string(cap));
  }
}

}  // namespace

std::optional<Interpretation> eso_witness(const FiniteStructure& s, const EsoSentence& phi, const CheckOptions& opt) {
  check_cap(s, phi, opt.cap);
  auto g = ground_sentence(s, phi);
  const Circuit& c = g->circuit;
  if (g->root == kFalse) return std::nullopt;
  std::vector<int> sup = c.support(g->root);
  const int k = static_cast<int>(sup.size());
  const std::uint64_t total = std::uint64_t{1} << k;
  const std::uint64_t words = (total + 63) / 64;
  int inputs = c.num_inputs();

  // Lanes vary the six least significant support bits.
  auto first_in = [&](std::uint64_t w) -> std::optional<std::uint64_t> {
    std::vector<std::uint64_t> in(inputs, 0);
    std::uint64_t base = w * 64;
    for (int j = 0; j < k; ++j) {
      if (j < 6) {
        std::uint64_t mask = 0;
        for (int l = 0; l < 64; ++l)
          if ((l >> j) & 1) mask |= std::uint64_t{1} << l;
        in[sup[j]] = mask;
      } else {
        in[sup[j]] = ((base >> j) & 1) ? ~std::uint64_t{0} : 0;
      }
    }
    std::uint64_t r = c.eval64({g->root}, in)[0];
    if (total < 64) r &= (std::uint64_t{1} << total) - 1;
    if (!r) return std::nullopt;
    return base + __builtin_ctzll(r);
  };

  std::atomic<std::uint64_t> best{total};
  int jobs = std::max(1, opt.jobs);
  const std::uint64_t block = 256;
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&] {
    while (true) {
      std::uint64_t b = next_block.fetch_add(1);
      std::uint64_t w0 = b * block;
      if (w0 >= words || w0 * 64 > best.load()) return;
      for (std::uint64_t w = w0; w < std::min(words, w0 + block); ++w) {
        if (auto u = first_in(w)) {
          std::uint64_t cur = best.load();
          while (*u < cur && !best.compare_exchange_weak(cur, *u)) {
          }
          break;
        }
      }
    }
  };
  if (jobs == 1 || words < block) {
    worker();
  } else {
    std::vector<std::thread> ts;
    for (int i = 0; i < jobs; ++i) ts.emplace_back(worker);
    for (auto& t : ts) t.join();
  }
  if (best.load() == total) return std::nullopt;
  std::uint64_t u = best.load();
  std::vector<std::uint8_t> bits(inputs, 0);
  for (int j = 0; j < k; ++j) bits[sup[j]] = (u >> j) & 1;
  return interpretation(s, phi, *g, [&](int i) { return i < inputs && bits[i]; });
}

bool check_eso(const FiniteStructure& s, const EsoSentence& phi, const CheckOptions& opt) {
  return eso_witness(s, phi, opt).has_value();
}

std::optional<Interpretation> eso_witness_sat(const FiniteStructure& s, const EsoSentence& phi) {
  auto g = ground_sentence(s, phi);
  if (g->root == kFalse) return std::nullopt;
  SatSolver solver;
  CircuitEncoder enc(g->circuit, solver);
  enc.assert_true(g->root);
  if (solver.solve() != SatSolver::Result::Sat) return std::nullopt;
  return interpretation(s, phi, *g, [&](int i) { return enc.input_value(i); });
}

bool check_eso_sat(const FiniteStructure& s, const EsoSentence& phi) { return eso_witness_sat(s, phi).has_value(); }

FiniteStructure sentence_structure(const Picture& p, const EsoSentence& phi) {
  if (p.dim() != phi.sig.d) throw Error("picture dimension differs from the sentence signature");
  FiniteStructure s = encode(p, phi.sig.kind);
  int ar = phi.sig.kind == Encoding::Pixel ? 1 : phi.sig.d;
  for (auto& l : phi.sig.alphabet)
    if (!s.relations.count("Q_" + l)) s.add_relation("Q_" + l, ar);
  return s;
}

bool mirror_member(const Picture& p) {
  if (p.dim() < 2) throw Error("mirror needs dimension at least 2");
  for (std::size_t r = 0; r < p.size(); ++r) {
    Cell a = cell_of_rank(r, p.dim(), p.side());
    std::swap(a[0], a[1]);
    if (p.code_at(a) != p.code(r)) return false;
  }
  return true;
}

bool sym_member(const Picture& p) {
  const int d = p.dim(), n = p.side();
  if (d < 2) throw Error("sym needs dimension at least 2");
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t r = 0; r < p.size(); ++r) {
    Cell a = cell_of_rank(r, d, n);
    for (auto& al : perms) {
      Cell b(d);
      for (int i = 0; i < d; ++i) b[i] = a[al[i]];
      if (p.code_at(b) != p.code(r)) return false;
    }
    for (int i = 0; i < d; ++i) {
      Cell b = a;
      b[i] = n + 1 - a[i];
      if (p.code_at(b) != p.code(r)) return false;
    }
  }
  return true;
}

bool member(const LanguageDef& def, const Picture& p) {
  struct V {
    const Picture& p;
    bool operator()(const TilingSystem& ts) const { return recognizes(ts, p); }
    bool operator()(const AutomatonDef& a) const { return accepts_linear(a.automaton, p, a.c, a.c2); }
    bool operator()(const SymbolicAutomatonDef& a) const { return symbolic_accepts_linear(a.automaton, p, a.c, a.c2); }
    bool operator()(const SentenceDef& s) const {
      if (s.encoding != s.sentence.sig.kind) throw Error("sentence signature does not match the requested encoding");
      FiniteStructure st = sentence_structure(p, s.sentence);
      return s.engine == EsoEngine::Brute ? check_eso(st, s.sentence) : check_eso_sat(st, s.sentence);
    }
    bool operator()(const OracleDef& o) const {
      if (o.name == "mirror") return mirror_member(p);
      if (o.name == "sym") return sym_member(p);
      throw Error("unknown oracle '" + o.name + "'");
    }
    bool operator()(const PictureListDef& l) const {
      return std::find(l.pictures.begin(), l.pictures.end(), p) != l.pictures.end();
    }
  };
  return std::visit(V{p}, def);
}

std::string describe(const LanguageDef& def) {
  static const char* names[] = {"tiling system", "cellular automaton", "symbolic cellular automaton", "sentence", "oracle",
                                "picture list"};
  return names[def.index()];
}

std::optional<Counterexample> equivalent_up_to(const LanguageDef& a, const LanguageDef& b, int d, const Alphabet& sigma,
                                               int max_n, const EquivOptions& opt) {
  validate_alphabet(sigma);
  if (sigma.empty()) throw Error("empty alphabet");
  auto alpha = std::make_shared<const Alphabet>(sigma);
  const std::uint64_t k = sigma.size();
  for (int n = 1; n <= max_n; ++n) {
    std::size_t cells = ipow(n, d);
    double count_d = std::pow(static_cast<double>(k), static_cast<double>(cells));
    if (count_d > static_cast<double>(opt.cap))
      throw CapExceeded("equivalence cap exceeded: " + std::to_string(count_d) + " pictures of side " + std::to_string(n));
    std::uint64_t count = static_cast<std::uint64_t>(count_d + 0.5);
    auto picture = [&](std::uint64_t idx) {
      std::vector<int> codes(cells);
      for (std::size_t i = cells; i > 0; --i) {
        codes[i - 1] = static_cast<int>(idx % k);
        idx /= k;
      }
      return Picture::from_codes(d, n, alpha, std::move(codes));
    };
    std::atomic<std::uint64_t> best{count};
    std::atomic<std::uint64_t> next_block{0};
    const std::uint64_t block = 16;
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
      try {
        while (true) {
          std::uint64_t i0 = next_block.fetch_add(1) * block;
          if (i0 >= count || i0 > best.load()) return;
          for (std::uint64_t i = i0; i < std::min(count, i0 + block); ++i) {
            Picture p = picture(i);
            if (member(a, p) != member(b, p)) {
              std::uint64_t cur = best.load();
              while (i < cur && !best.compare_exchange_weak(cur, i)) {
              }
              break;
            }
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        best.store(0);
      }
    };
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> ts;
      for (int j = 0; j < jobs; ++j) ts.emplace_back(worker);
      for (auto& t : ts) t.join();
    }
    if (err) std::rethrow_exception(err);
    if (best.load() < count) {
      Picture p = picture(best.load());
      return Counterexample{p, member(a, p), member(b, p)};
    }
  }
  return std::nullopt;
}

}  // namespace picwb
