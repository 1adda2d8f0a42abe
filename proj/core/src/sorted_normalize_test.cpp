#include <doctest.h>

#include <random>

#include "picwb/model_check.hpp"
#include "picwb/sorted_normalize.hpp"

using namespace picwb;

namespace {

Signature words() { return Signature{Encoding::Coordinate, 1, {"a", "b"}}; }

EsoSentence parse_w(const std::string& text) { return parse_sentence(text, words()); }

void check_equivalent(const EsoSentence& a, const EsoSentence& b, int max_n = 4) {
  auto cex = equivalent_up_to(SentenceDef{a}, SentenceDef{b}, 1, {"a", "b"}, max_n);
  if (cex) FAIL_CHECK("disagreement on " << picture_inline(cex->picture) << ": " << render_sentence(b));
}

bool has_symbol(const EsoSentence& s, const std::string& name, int arity) {
  for (auto& g : s.guessed)
    if (g.name == name && g.arity == arity) return true;
  return false;
}

std::string random_word_sentence(std::mt19937_64& rng, int atoms) {
  static const std::vector<std::string> pool{"(R x y)", "(R y x)",   "(R (suc x) y)", "(R x (suc y))",
                                             "(Q_a x)", "(Q_a y)",   "(Q_b x)",       "(= x y)",
                                             "(< x y)", "(min x)",   "(max y)",       "(< y x)"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> op(0, 3);
  std::vector<std::string> parts;
  for (int i = 0; i < atoms; ++i) parts.push_back(pool[pick(rng)]);
  while (parts.size() > 1) {
    std::string a = parts.back();
    parts.pop_back();
    std::string b = parts.back();
    parts.pop_back();
    static const char* ops[] = {"and", "or", "implies", "iff"};
    int o = op(rng);
    std::string f = std::string("(") + ops[o] + " " + a + " " + b + ")";
    if (op(rng) == 0) f = "(not " + f + ")";
    parts.insert(parts.begin(), f);
  }
  return "(exists-rel ((R 2)) (forall (x y) " + parts[0] + "))";
}

}  // namespace

TEST_CASE("flatten_atoms collapses repeated variables and lifts arities") {
  auto s = parse_sentence(
      "(exists-rel ((R 4)) (forall (x1 x2 x3 x4) (and (iff (R (suc (suc x1)) x2 (suc x1) (suc (suc (suc x2)))) (Q_a x1))"
      " (implies (R x1 x2 x3 x4) (Q_b x3)))))",
      words());
  auto f = flatten_atoms(s);
  CHECK(has_symbol(f, "R_f", 4));
  bool found = false;
  visit_atoms(split_universal(f.body)->second, [&](const Formula& a) {
    if (a.sym == "R_f" && a.args[0] == tsuc(tvar("x1")) && a.args[1] == tvar("x2")) found = true;
  });
  CHECK(found);
  check_equivalent(s, f, 3);

  auto flat = parse_w("(exists-rel ((R 2)) (forall (x y) (iff (R x y) (Q_a x))))");
  CHECK(render_sentence(flatten_atoms(flat)) == render_sentence(flat));

  auto unary = parse_w("(exists-rel ((U 1)) (forall (x y) (and (iff (U x) (Q_a x)) (implies (U y) (Q_a y)))))");
  auto lifted = flatten_atoms(unary);
  CHECK(has_symbol(lifted, "U", 2));
  check_equivalent(unary, lifted);

  auto rep = parse_w("(exists-rel ((R 2)) (forall (x y) (and (R x x) (iff (R x y) (= x y)))))");
  check_equivalent(rep, flatten_atoms(rep));
  auto input = parse_w("(forall (x y) (iff (Q_a (suc x)) (Q_b x)))");
  check_equivalent(input, flatten_atoms(input));
}

TEST_CASE("decompose_successors builds shifted copies") {
  auto s = parse_w("(exists-rel ((R 2)) (forall (x y) (and (iff (R (suc x) (suc y)) (Q_a x)) (implies (R x y) (Q_b y)))))");
  auto t = decompose_successors(s);
  CHECK(has_symbol(t, "R_s1_0", 2));
  CHECK(has_symbol(t, "R_s1_1", 2));
  check_equivalent(s, t, 3);

  auto depth0 = parse_w("(exists-rel ((R 2)) (forall (x y) (iff (R y x) (Q_a x))))");
  CHECK(decompose_successors(depth0).guessed == depth0.guessed);

  auto mx = parse_w("(forall (x y) (implies (max (suc x)) (Q_a x)))");
  auto mt = decompose_successors(mx);
  visit_atoms(split_universal(mt.body)->second, [&](const Formula& a) {
    if (a.sym == "max" || a.sym == "min") CHECK(a.args[0].sucs.empty());
  });
  check_equivalent(mx, mt);

  auto cmp = parse_w(
      "(exists-rel ((R 2)) (forall (x y) (and (iff (R x y) (< (suc x) y)) (iff (= (suc x) (suc (suc x))) (Q_a x))"
      " (implies (< x (suc (suc x))) (R (suc (suc y)) x)))))");
  check_equivalent(cmp, decompose_successors(cmp));
}

TEST_CASE("fold_relations replaces relations by sorted families") {
  auto s = parse_w(
      "(exists-rel ((R 2)) (forall (x y) (and (iff (R x y) (R y x)) (implies (R (suc x) y) (Q_a x))"
      " (iff (R x (suc y)) (Q_b y)) (implies (Q_a x) (R x y)))))");
  auto d = decompose_successors(flatten_atoms(s));
  auto f = fold_relations(d);
  CHECK(has_symbol(f, "R_12", 2));
  CHECK(has_symbol(f, "R_21", 2));
  visit_atoms(split_universal(f.body)->second, [&](const Formula& a) {
    if (a.op != Op::Atom || is_input_symbol(a.sym) || a.sym == "min" || a.sym == "max") return;
    CHECK(a.args[0].var == "x");
    CHECK(a.args[1].var == "y");
  });
  check_equivalent(s, f);

  auto anti = parse_w("(exists-rel ((R 2)) (forall (x y) (iff (R x y) (not (R y x)))))");
  check_equivalent(anti, fold_relations(anti));

  auto already = parse_w("(exists-rel ((R 2)) (forall (x y) (iff (R x y) (Q_a x))))");
  check_equivalent(already, fold_relations(already));

  std::mt19937_64 rng(7);
  static const std::vector<std::string> pool{"(R x y)", "(R y x)", "(R (suc x) y)", "(Q_a x)", "(Q_b y)"};
  for (int rep = 0; rep < 6; ++rep) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::string body = "(and (iff " + pool[pick(rng)] + " " + pool[pick(rng)] + ") (or " + pool[pick(rng)] + " (not " +
                       pool[pick(rng)] + ")))";
    auto r = parse_w("(exists-rel ((R 2)) (forall (x y) " + body + "))");
    check_equivalent(r, fold_relations(decompose_successors(flatten_atoms(r))));
  }
}

TEST_CASE("fold of R(x^(i)) covers every tie block") {
  Signature sig{Encoding::Coordinate, 2, {"a", "b"}};
  auto s = parse_sentence(
      "(exists-rel ((R 3)) (forall (x y z) (and (iff (R x (suc y) z) (Q_a x y)) (implies (R z y x) (Q_b y z)))))", sig);
  auto f = eliminate_comparisons(fold_relations(decompose_successors(s)));
  auto cex = equivalent_up_to(SentenceDef{s}, SentenceDef{f}, 2, {"a", "b"}, 2);
  CHECK_FALSE(cex.has_value());
}

TEST_CASE("eliminate_comparisons") {
  auto s = parse_w("(forall (x y) (implies (= x y) (iff (Q_a x) (Q_a y))))");
  auto e = eliminate_comparisons(s);
  bool clean = true;
  visit_atoms(e.body, [&](const Formula& a) { clean &= a.op == Op::Atom; });
  CHECK(clean);
  check_equivalent(s, e);

  auto free_of = parse_w("(forall (x y) (iff (Q_a x) (Q_b y)))");
  CHECK(eliminate_comparisons(free_of).guessed.empty());

  auto tri = parse_w("(forall (x y) (or (< x y) (= x y) (< y x)))");
  auto triv = eliminate_comparisons(tri);
  for_each_picture(1, 4, {"a", "b"}, [&](const Picture& p) {
    CHECK(check_eso_sat(sentence_structure(p, triv), triv));
    return true;
  });
  auto order = parse_w("(forall (x y) (implies (< x y) (not (Q_a y))))");
  check_equivalent(order, eliminate_comparisons(order));
}

TEST_CASE("simulate_input_relations transports Q(y)") {
  auto s = parse_w("(forall (x y) (implies (Q_a y) (Q_a x)))");
  auto t = simulate_input_relations(s);
  CHECK(is_sorted(t, 1, 2));
  CHECK(has_symbol(t, "TP0_12", 2));
  CHECK(has_symbol(t, "TP0_21", 2));
  CHECK(has_symbol(t, "QP0_21", 2));
  check_equivalent(s, t);

  auto only_sorted = parse_w("(forall (x y) (iff (Q_a x) (not (Q_b x))))");
  CHECK(simulate_input_relations(only_sorted).guessed.empty());

  Signature sig{Encoding::Coordinate, 2, {"a", "b"}};
  auto three = parse_sentence("(forall (x y z) (iff (Q_a z x) (Q_a x y)))", sig);
  auto tt = simulate_input_relations(three);
  CHECK(is_sorted(tt, 2, 3));
  CHECK_FALSE(equivalent_up_to(SentenceDef{three}, SentenceDef{tt}, 2, {"a", "b"}, 2).has_value());
}

TEST_CASE("sort_pipeline") {
  auto s = parse_w("(forall (x y) (iff (Q_a x) (Q_a y)))");
  auto t = sort_pipeline(s);
  CHECK(is_sorted(t, 1, 2));
  check_equivalent(s, t);

  auto one_var = parse_w("(forall (x) (Q_a x))");
  auto ov = sort_pipeline(one_var);
  CHECK(is_sorted(ov, 1, 2));
  check_equivalent(one_var, ov);

  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 6; ++rep) {
    auto r = parse_w(random_word_sentence(rng, 4));
    auto out = sort_pipeline(r);
    CHECK(is_sorted(out, 1, 2));
    check_equivalent(r, out);
  }
  CHECK_THROWS_AS(sort_pipeline(parse_w("(forall (x y z) (Q_a x))")), Error);
  CHECK_THROWS_AS(sort_pipeline(parse_sentence("(forall (x) (Q_a x))", Signature{Encoding::Pixel, 1, {"a"}})), Error);
}

TEST_CASE("relation families: the three coding conditions agree") {
  std::mt19937_64 rng(11);
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 3; ++n) {
      std::size_t total = ipow(n, d);
      for (int rep = 0; rep < 12; ++rep) {
        TupleSet r(total);
        for (auto& b : r) b = rng() & 1;
        auto fam = family_from_relation(r, d, n);
        TupleSet w;
        CHECK(family_generated(fam, d, n, &w));
        CHECK(w == r);
        CHECK(family_coherent(fam, d, n));
        CHECK(family_transposition_coherent(fam, d, n));

        auto noisy = fam;
        for (auto& rel : noisy)
          for (std::size_t i = 0; i < total; ++i)
            if (nondecreasing(cell_of_rank(i, d, n)) && rng() % 5 == 0) rel[i] ^= 1;
        bool c1 = family_generated(noisy, d, n), c2 = family_coherent(noisy, d, n),
             c3 = family_transposition_coherent(noisy, d, n);
        CHECK(c1 == c2);
        CHECK(c2 == c3);
      }
    }
  // A family disagreeing on a diagonal tuple cannot come from one relation.
  std::vector<TupleSet> fam(2, TupleSet(4, 0));
  fam[0][0] = 1;  // R_12(1,1) but not R_21(1,1)
  CHECK_FALSE(family_generated(fam, 2, 2));
  CHECK_FALSE(family_coherent(fam, 2, 2));
  CHECK_FALSE(family_transposition_coherent(fam, 2, 2));
}

TEST_CASE("d-simulations built by propagation satisfy the axioms") {
  std::mt19937_64 rng(5);
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 4; ++n)
      for (int rep = 0; rep < 4; ++rep) {
        TupleSet q(ipow(n, d - 1));
        for (auto& b : q) b = rng() & 1;
        auto sim = build_d_simulation(q, d, n, rng);
        REQUIRE(sim.has_value());
        CHECK(simulation_axiom_violations(*sim, q) == 0);
        CHECK(simulation_conclusion_violations(*sim, q) == 0);
      }
}
