#include <doctest.h>

#include <random>

#include "picwb/model_check.hpp"
#include "picwb/normalize.hpp"

using namespace picwb;

namespace {

Signature pix(int d, Alphabet a = {"0", "1"}) { return Signature{Encoding::Pixel, d, std::move(a)}; }
Signature coord(int d = 1, Alphabet a = {"a", "b"}) { return Signature{Encoding::Coordinate, d, std::move(a)}; }

void check_same_language(const EsoSentence& a, const EsoSentence& b, int d, int max_n) {
  auto cex = equivalent_up_to(SentenceDef{a, a.sig.kind}, SentenceDef{b, b.sig.kind}, d, a.sig.alphabet, max_n);
  if (cex) FAIL_CHECK("disagreement on " << picture_inline(cex->picture) << " for " << render_sentence(b));
}

bool guard_shape(const EsoSentence& s) { return as_localized(s).has_value(); }

}  // namespace

TEST_CASE("localize_pixel_sentence") {
  auto loc = parse_sentence(
      "(exists-rel ((U 1)) (forall (x) (and (implies (min_1 x) (U x)) (implies (max_1 x) (Q_1 x))"
      " (implies (not (max_1 x)) (iff (U x) (not (U (suc_1 x))))))))",
      pix(1));
  auto same = localize_pixel_sentence(loc);
  CHECK(render_sentence(same.sentence) == render_sentence(loc));

  auto deep = parse_sentence("(exists-rel ((U 1)) (forall (x) (and (U (suc_1 (suc_1 x))) (iff (U x) (Q_1 x)))))", pix(1));
  auto ld = localize_pixel_sentence(deep);
  CHECK(guard_shape(ld.sentence));
  CHECK(classify_fragment(ld.sentence).max_arity <= 1);
  check_same_language(deep, ld.sentence, 1, 5);

  auto mixed = parse_sentence("(forall (x) (or (min_1 x) (iff (Q_1 x) (Q_1 (suc_1 x)))))", pix(1));
  auto lm = localize_pixel_sentence(mixed);
  CHECK(guard_shape(lm.sentence));
  check_same_language(mixed, lm.sentence, 1, 5);

  auto two = parse_sentence(
      "(exists-rel ((U 1)) (forall (x) (and (iff (U x) (Q_1 (suc_2 (suc_1 x)))) (or (max_2 (suc_1 x)) (U x) (min_1 x)))))",
      pix(2));
  auto lt = localize_pixel_sentence(two);
  CHECK(guard_shape(lt.sentence));
  check_same_language(two, lt.sentence, 2, 3);

  auto nullary = parse_sentence("(exists-rel ((P 0)) (forall (x) (iff (P) (Q_1 x))))", pix(2));
  check_same_language(nullary, localize_pixel_sentence(nullary).sentence, 2, 3);

  CHECK_THROWS_AS(localize_pixel_sentence(parse_sentence("(forall (x) (Q_1 x))", coord())), Error);
  CHECK_THROWS_AS(localize_pixel_sentence(parse_sentence("(forall (x) (= x (suc_1 x)))", pix(1))), Error);
}

TEST_CASE("cardinality_to_monadic agrees with direct counting") {
  auto one = parse_cardinality("(atleast 1 x (Q_1 x))", pix(1));
  auto m = cardinality_to_monadic(one);
  CHECK(classify_fragment(m).max_arity == 1);
  CHECK(classify_fragment(m).var_count == 1);
  auto verdict = [&](const EsoSentence& s, const std::string& word) {
    std::string cells;
    for (char ch : word) cells += std::string(1, ch) + " ";
    Picture p = parse_picture("1 " + std::to_string(word.size()) + "\n0 1\n" + cells + "\n");
    return check_eso_sat(sentence_structure(p, s), s);
  };
  CHECK(verdict(m, "10"));
  CHECK_FALSE(verdict(m, "00"));

  for (int n = 1; n <= 3; ++n) {
    auto full = cardinality_to_monadic(parse_cardinality("(atleast " + std::to_string(n * n) + " x true)", pix(2)));
    auto over = cardinality_to_monadic(parse_cardinality("(atleast " + std::to_string(n * n + 1) + " x true)", pix(2)));
    for_each_picture(2, n, {"0", "1"}, [&](const Picture& p) {
      CHECK(check_eso_sat(sentence_structure(p, full), full));
      CHECK_FALSE(check_eso_sat(sentence_structure(p, over), over));
      return false;
    });
  }

  auto exactly = parse_cardinality("(and (atleast 1 x (Q_1 x)) (not (atleast 2 x (Q_1 x))))", pix(2));
  auto em = cardinality_to_monadic(exactly);
  int members = 0;
  for_each_picture(2, 2, {"0", "1"}, [&](const Picture& p) {
    bool v = check_eso_sat(sentence_structure(p, em), em);
    CHECK(v == eval_cardinality(exactly, p));
    members += v;
    return true;
  });
  CHECK(members == 4);

  auto mixed = parse_cardinality(
      "(or (atleast 2 x (and (Q_1 x) (not (Q_1 (suc_2 x))))) (iff (atleast 3 y (max_1 y)) (atleast 1 z (Q_0 (suc_1 z)))))",
      pix(2));
  auto mm = cardinality_to_monadic(mixed);
  for (int n = 1; n <= 3; ++n)
    for_each_picture(2, n, {"0", "1"}, [&](const Picture& p) {
      CHECK(check_eso_sat(sentence_structure(p, mm), mm) == eval_cardinality(mixed, p));
      return true;
    });
  CHECK(parse_cardinality(render_cardinality(mixed), pix(2)).thresholds.size() == 3);
  CHECK_THROWS_AS(cardinality_to_monadic(parse_cardinality("(atleast 9 x true)", pix(1)), 8), Error);
  CHECK_THROWS_AS(parse_cardinality("(atleast 0 x true)", pix(1)), Error);
  CHECK_THROWS_AS(parse_cardinality("(atleast 1 x (exists (y) (Q_1 y)))", pix(1)), Error);
}

TEST_CASE("cardinality output grows linearly in the threshold") {
  auto size_for = [](int k) {
    auto c = parse_cardinality("(atleast " + std::to_string(k) + " x (Q_1 x))", pix(2));
    return cardinality_to_monadic(c).guessed.size();
  };
  CHECK(size_for(4) == 5);
  CHECK(size_for(8) == 9);
}

TEST_CASE("skolemize_universal") {
  auto phi = parse_sentence(
      "(exists-rel ((U 2) (D 2)) (exists (x) (or (forall (y) (U x y)) (exists (y) (D x y)))))", coord());
  auto sk = skolemize_universal(phi);
  auto fd = classify_fragment(sk);
  CHECK(fd.prenex_universal);
  CHECK(fd.prefix_length == 2);
  check_same_language(phi, sk, 1, 3);

  auto never = parse_sentence("(forall (x) (exists (y) (< x y)))", coord());
  auto nk = skolemize_universal(never);
  for (int n = 1; n <= 4; ++n)
    for_each_picture(1, n, {"a", "b"}, [&](const Picture& p) {
      CHECK_FALSE(eval_fo(sentence_structure(p, never), never.body));
      CHECK_FALSE(check_eso_sat(sentence_structure(p, nk), nk));
      return true;
    });

  auto univ = parse_sentence("(forall (x y) (implies (< x y) (Q_a x)))", coord());
  CHECK(render_sentence(skolemize_universal(univ)) == render_sentence(univ));

  auto nested = parse_sentence(
      "(forall (x) (iff (Q_a x) (exists (y) (and (< x y) (Q_b y) (forall (x) (implies (< y x) (Q_a x)))))))", coord());
  auto ns = skolemize_universal(nested);
  CHECK(classify_fragment(ns).prefix_length == 2);
  check_same_language(nested, ns, 1, 4);

  auto grid = parse_sentence("(exists (x y) (and (Q_1 x y) (forall (x) (implies (Q_1 x y) (= x y)))))",
                             coord(2, {"0", "1"}));
  check_same_language(grid, skolemize_universal(grid), 2, 3);

  CHECK_THROWS_AS(skolemize_universal(parse_sentence("(forall (x y z) (Q_a x))", coord()), 2), Error);
}

TEST_CASE("reduce_arities") {
  auto phi = parse_sentence("(exists-rel ((R 3)) (forall (x y) (and (R x y x) (not (R y x y)))))", coord());
  auto r = reduce_arities(phi);
  CHECK(classify_fragment(r).max_arity == 2);
  CHECK(r.guessed.size() == 2);
  for (int n = 1; n <= 3; ++n)
    for_each_picture(1, n, {"a", "b"}, [&](const Picture& p) {
      CHECK_FALSE(check_eso_sat(sentence_structure(p, r), r));
      return true;
    });

  auto small = parse_sentence("(exists-rel ((R 2)) (forall (x y) (R x y)))", coord());
  CHECK(render_sentence(reduce_arities(small)) == render_sentence(small));

  auto taut = parse_sentence("(exists-rel ((R 3)) (forall (x y) (or (R x x y) (not (R x x y)))))", coord());
  auto tr = reduce_arities(taut);
  check_same_language(taut, tr, 1, 3);

  auto shifted = parse_sentence(
      "(exists-rel ((R 3)) (forall (x y) (and (iff (R x (suc y) x) (Q_a y)) (implies (R (suc x) x y) (Q_b x))"
      " (or (R y y (suc y)) (not (R (suc y) (suc (suc y)) (suc y)))))))",
      coord());
  check_same_language(shifted, reduce_arities(shifted), 1, 3);

  auto cyc = parse_sentence(
      "(exists-rel ((R 3)) (forall (x y) (and (R x (suc x) y) (not (R (suc y) y x)))))", coord());
  check_same_language(cyc, reduce_arities(cyc), 1, 3);

  CHECK_THROWS_AS(reduce_arities(parse_sentence("(exists-rel ((R 3)) (exists (x) (R x x x)))", coord())), Error);
}

TEST_CASE("reduce_arities on random sentences") {
  std::mt19937_64 rng(99);
  std::vector<std::string> terms{"x", "y", "(suc x)", "(suc y)"};
  std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
  for (int rep = 0; rep < 8; ++rep) {
    auto ratom = [&] { return "(R " + terms[pick(rng)] + " " + terms[pick(rng)] + " " + terms[pick(rng)] + ")"; };
    std::string body = "(and (or " + ratom() + " (Q_a x)) (iff " + ratom() + " (not " + ratom() + ")))";
    auto s = parse_sentence("(exists-rel ((R 3)) (forall (x y) " + body + "))", coord());
    check_same_language(s, reduce_arities(s), 1, 3);
  }
}
