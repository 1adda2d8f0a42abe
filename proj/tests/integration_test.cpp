#include <doctest.h>

#include "picwb/compilers.hpp"
#include "picwb/generators.hpp"
#include "picwb/model_check.hpp"
#include "picwb/normalize.hpp"
#include "picwb/sorted_normalize.hpp"

using namespace picwb;

namespace {

void same_language(const LanguageDef& a, const LanguageDef& b, int d, const Alphabet& sigma, int max_n) {
  auto cex = equivalent_up_to(a, b, d, sigma, max_n);
  if (cex) FAIL_CHECK(describe(a) << " and " << describe(b) << " differ on " << picture_inline(cex->picture));
}

SymbolicAutomatonDef timed(const CompiledAutomaton& c) { return {c.automaton, c.c, c.c2}; }

}  // namespace

TEST_CASE("local sentence becomes a tiling system") {
  Signature bits{Encoding::Pixel, 1, {"0", "1"}};
  auto c = parse_cardinality("(not (atleast 1 x (and (Q_1 x) (not (max_1 x)) (Q_1 (suc_1 x)))))", bits);
  auto direct = parse_sentence("(forall (x) (or (Q_0 x) (max_1 x) (Q_0 (suc_1 x))))", bits);
  auto ts = sentence_to_tiling(direct);
  for (int n = 1; n <= 6; ++n)
    for_each_picture(1, n, bits.alphabet, [&](const Picture& p) {
      CHECK(recognizes(ts, p) == eval_cardinality(c, p));
      return true;
    });
  CHECK_THROWS_AS(sentence_to_tiling(cardinality_to_monadic(c)), CapExceeded);
}

TEST_CASE("random counting sentences survive localization") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 4; ++rep) {
    auto c = random_cardinality(rng, 1, 1, 2);
    auto loc = localize_pixel_sentence(cardinality_to_monadic(c, 2)).sentence;
    for (int n = 1; n <= 4; ++n)
      for_each_picture(1, n, {"0", "1"}, [&](const Picture& p) {
        CHECK(check_eso_sat(sentence_structure(p, loc), loc) == eval_cardinality(c, p));
        return true;
      });
  }
}

TEST_CASE("normal forms chain into an automaton") {
  Signature words{Encoding::Coordinate, 1, {"a", "b"}};
  auto s = parse_sentence(
      "(exists-rel ((R 2)) (forall (x) (exists (y) (and (R x y) (or (Q_a y) (max y)) (not (R y x))))))", words);
  auto sk = skolemize_universal(s);
  CHECK(classify_fragment(sk).prenex_universal);
  auto ar = reduce_arities(sk);
  CHECK(classify_fragment(ar).max_arity <= 2);
  auto sorted = sort_pipeline(ar);
  CHECK(is_sorted(sorted, 1, 2));
  SentenceDef original{s};
  same_language(original, SentenceDef{sk}, 1, words.alphabet, 4);
  same_language(original, SentenceDef{sorted}, 1, words.alphabet, 4);
  same_language(original, timed(sentence_to_automaton(sorted)), 1, words.alphabet, 3);
}

TEST_CASE("serialized systems keep their language") {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 3; ++rep) {
    auto ts = random_tiling_system(rng, 1, 3, 2);
    auto back = tiling_from_json(tiling_to_json(ts));
    auto s = parse_sentence(render_sentence(tiling_to_sentence(back)), tiling_to_sentence(back).sig);
    same_language(ts, SentenceDef{s, Encoding::Pixel}, 1, ts.sigma, 5);
    same_language(ts, sentence_to_tiling(s), 1, ts.sigma, 5);
  }
  for (int rep = 0; rep < 3; ++rep) {
    auto a = random_automaton(rng, 1, 3, 2);
    auto back = automaton_from_json(automaton_to_json(a));
    auto s = parse_sentence(render_sentence(automaton_to_sentence(back)), automaton_to_sentence(back).sig);
    same_language(AutomatonDef{a}, SentenceDef{s}, 1, a.sigma, 4);
    same_language(AutomatonDef{a}, timed(sentence_to_automaton(s)), 1, a.sigma, 3);
  }
}

TEST_CASE("mirror sentence matches the oracle") {
  Signature grid{Encoding::Coordinate, 2, {"0", "1"}};
  auto phi = parse_sentence("(forall (x y) (and (iff (Q_0 x y) (Q_0 y x)) (iff (Q_1 x y) (Q_1 y x))))", grid);
  same_language(SentenceDef{phi}, OracleDef{"mirror"}, 2, grid.alphabet, 3);
  auto broken = parse_sentence("(forall (x y) (iff (Q_0 x y) (Q_0 y x)))", Signature{Encoding::Coordinate, 2, {"0", "1", "2"}});
  auto cex = equivalent_up_to(SentenceDef{broken}, OracleDef{"mirror"}, 2, {"0", "1", "2"}, 2);
  REQUIRE(cex);
  CHECK(cex->verdict_a);
  CHECK_FALSE(cex->verdict_b);
}
