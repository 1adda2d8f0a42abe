#include "picwb/model_check.hpp"

#include <random>

#include "doctest.h"

using namespace picwb;

static Picture word(const std::string& w, const Alphabet& a) {
  std::vector<std::string> cells;
  for (char c : w) cells.push_back(std::string(1, c));
  return make_picture(1, static_cast<int>(w.size()), a, cells);
}
static Signature coord(int d, Alphabet a) { return {Encoding::Coordinate, d, std::move(a)}; }
static Signature pixel(int d, Alphabet a) { return {Encoding::Pixel, d, std::move(a)}; }

TEST_CASE("eval_fo examples") {
  auto ab = word("ab", {"a", "b"});
  auto ps = pixel_structure(ab);
  CHECK(eval_fo(ps, parse_formula("(forall (x) (or (Q_a x) (Q_b x)))", pixel(1, {"a", "b"}))));
  CHECK_FALSE(eval_fo(ps, parse_formula("(forall (x) (Q_a x))", pixel(1, {"a", "b"}))));
  auto cs = coordinate_structure(ab);
  CHECK(eval_fo(cs, parse_formula("(forall (x) (implies (min x) (Q_a x)))", coord(1, {"a", "b"}))));
  auto free = atom("Q_a", {tvar("x")});
  CHECK(eval_fo(cs, free, {{"x", 1}}));
  CHECK_FALSE(eval_fo(cs, free, {{"x", 2}}));
  CHECK_THROWS_AS(eval_fo(cs, free), Error);
  CHECK_THROWS_AS(eval_fo(cs, atom("P", {tvar("x")}), {{"x", 1}}), Error);
}

TEST_CASE("check_eso examples") {
  auto ab = coordinate_structure(word("ab", {"a", "b"}));
  auto all = parse_sentence("(exists-rel ((U 1)) (forall (x) (U x)))", coord(1, {"a", "b"}));
  CHECK(check_eso(ab, all));
  CHECK(check_eso_sat(ab, all));
  auto contra = parse_sentence("(exists-rel ((U 1)) (forall (x) (and (U x) (not (U x)))))", coord(1, {"a", "b"}));
  CHECK_FALSE(check_eso(ab, contra));
  CHECK_FALSE(check_eso_sat(ab, contra));
}

TEST_CASE("mirror sentence holds on exactly 8 of 16 two-by-two pictures") {
  auto phi = parse_sentence("(forall (x y) (and (iff (Q_0 x y) (Q_0 y x)) (iff (Q_1 x y) (Q_1 y x))))", coord(2, {"0", "1"}));
  int count = 0;
  for_each_picture(2, 2, {"0", "1"}, [&](const Picture& p) {
    bool v = check_eso(coordinate_structure(p), phi);
    CHECK(v == mirror_member(p));
    count += v;
    return true;
  });
  CHECK(count == 8);
}

TEST_CASE("brute-force cap names the offending symbol") {
  auto s = coordinate_structure(word("aaaaa", {"a"}));
  auto phi = parse_sentence("(exists-rel ((U 1) (R 2)) (forall (x) (U x)))", coord(1, {"a"}));
  CHECK_THROWS_WITH_AS(check_eso(s, phi), doctest::Contains("R"), CapExceeded);
  CHECK(check_eso_sat(s, phi));
  CheckOptions big;
  big.cap = 40;
  CHECK(check_eso(s, phi, big));
}

static FormulaPtr random_formula(std::mt19937& rng, int depth, const std::vector<std::string>& vars) {
  auto v = [&] { return tvar(vars[rng() % vars.size()]); };
  auto term = [&] { return rng() % 3 == 0 ? tsuc(v()) : v(); };
  if (depth == 0) {
    switch (rng() % 6) {
      case 0: return atom("U", {term()});
      case 1: return atom("R", {term(), term()});
      case 2: return atom("Q_a", {term()});
      case 3: return f_lt(term(), term());
      case 4: return atom("min", {term()});
      default: return f_eq(term(), term());
    }
  }
  switch (rng() % 6) {
    case 0: return f_not(random_formula(rng, depth - 1, vars));
    case 1: return f_and(random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars));
    case 2: return f_or(random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars));
    case 3: return f_xor(random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars));
    case 4: return f_forall({vars[rng() % vars.size()]}, random_formula(rng, depth - 1, vars));
    default: return f_exists({vars[rng() % vars.size()]}, random_formula(rng, depth - 1, vars));
  }
}

// Naive enumeration: expand the structure with each candidate and evaluate.
static std::optional<Interpretation> naive_witness(const FiniteStructure& s, const EsoSentence& phi) {
  int total = 0;
  for (auto& g : phi.guessed) total += static_cast<int>(ipow(s.m, g.arity));
  for (std::uint64_t u = 0; u < (std::uint64_t{1} << total); ++u) {
    FiniteStructure t = s;
    Interpretation I;
    int bit = 0;
    for (auto& g : phi.guessed) {
      Relation& r = t.add_relation(g.name, g.arity);
      for (auto& b : r.bits) b = (u >> bit++) & 1;
      I[g.name] = r;
    }
    if (eval_fo(t, phi.body)) return I;
  }
  return std::nullopt;
}

TEST_CASE("brute force, SAT and naive expansion agree; witness is first in order") {
  std::mt19937 rng(99);
  Signature sig = coord(1, {"a", "b"});
  for (int iter = 0; iter < 150; ++iter) {
    EsoSentence phi{sig, {{"U", 1}, {"R", 2}}, f_forall({"x", "y"}, random_formula(rng, 3, {"x", "y"}))};
    std::string w;
    int n = 1 + rng() % 3;
    for (int i = 0; i < n; ++i) w += rng() % 2 ? "a" : "b";
    auto s = coordinate_structure(word(w, {"a", "b"}));
    auto brute = eso_witness(s, phi);
    auto naive = naive_witness(s, phi);
    REQUIRE(brute.has_value() == naive.has_value());
    if (brute) {
      CHECK((*brute)["U"].bits == (*naive)["U"].bits);
      CHECK((*brute)["R"].bits == (*naive)["R"].bits);
    }
    CheckOptions par;
    par.jobs = 3;
    auto brute_par = eso_witness(s, phi, par);
    CHECK(brute_par.has_value() == brute.has_value());
    if (brute_par) CHECK((*brute_par)["R"].bits == (*brute)["R"].bits);
    auto sat = eso_witness_sat(s, phi);
    CHECK(sat.has_value() == brute.has_value());
    if (sat) {
      FiniteStructure t = s;
      for (auto& [name, r] : *sat) t.relations[name] = r;
      CHECK(eval_fo(t, phi.body));
    }
  }
}

TEST_CASE("no guesses reduces to eval_fo; unused guesses do not matter") {
  std::mt19937 rng(5);
  Signature sig = coord(1, {"a", "b"});
  for (int iter = 0; iter < 60; ++iter) {
    auto body = f_forall({"x"}, f_exists({"y"}, f_or(atom("Q_a", {tvar("x")}), f_lt(tvar("x"), tsuc(tvar("y"))))));
    if (iter % 2) body = f_not(body);
    std::string w;
    int n = 1 + rng() % 4;
    for (int i = 0; i < n; ++i) w += rng() % 2 ? "a" : "b";
    auto s = coordinate_structure(word(w, {"a", "b"}));
    EsoSentence fo{sig, {}, body};
    EsoSentence padded{sig, {{"V", 1}}, body};
    bool e = eval_fo(s, body);
    CHECK(check_eso(s, fo) == e);
    CHECK(check_eso(s, padded) == e);
  }
}

TEST_CASE("mirror and sym oracles") {
  CHECK(mirror_member(make_picture(2, 1, {"0", "1"}, {"1"})));
  CHECK(mirror_member(make_picture(2, 2, {"0", "1"}, {"0", "1", "1", "0"})));
  CHECK_FALSE(mirror_member(make_picture(2, 2, {"0", "1"}, {"0", "1", "0", "0"})));
  CHECK_THROWS_AS(mirror_member(word("01", {"0", "1"})), Error);
  CHECK(sym_member(make_picture(2, 2, {"0", "1"}, {"1", "1", "1", "1"})));
  CHECK(sym_member(make_picture(3, 1, {"0", "1"}, {"0"})));
  CHECK_FALSE(sym_member(make_picture(2, 2, {"0", "1"}, {"0", "1", "1", "0"})));
  CHECK(sym_member(make_picture(2, 3, {"0", "1"}, {"0", "1", "0", "1", "1", "1", "0", "1", "0"})));
  CHECK_THROWS_AS(sym_member(word("0", {"0", "1"})), Error);
  for_each_picture(2, 3, {"0", "1"}, [&](const Picture& p) {
    std::vector<int> t(p.size());
    for (std::size_t r = 0; r < p.size(); ++r) {
      Cell a = cell_of_rank(r, 2, 3);
      std::swap(a[0], a[1]);
      t[cell_rank(a, 3)] = p.code(r);
    }
    CHECK(mirror_member(p) == mirror_member(Picture::from_codes(2, 3, p.alphabet_ptr(), t)));
    return true;
  });
}

static TilingSystem identity_system(const Alphabet& s, bool full) {
  TilingSystem ts{s, s, {}, {}};
  for (auto& x : s) ts.pi[x] = x;
  TileSet t{1, {}};
  if (full) {
    Alphabet e = s;
    e.push_back("#");
    for (auto& u : e)
      for (auto& v : e) t.tiles.insert({u, v});
  }
  ts.deltas.push_back(t);
  return ts;
}

TEST_CASE("equivalent_up_to examples") {
  Alphabet s{"0", "1"};
  LanguageDef full = identity_system(s, true), empty = identity_system(s, false);
  CHECK_FALSE(equivalent_up_to(full, full, 1, s, 4).has_value());
  auto cex = equivalent_up_to(full, empty, 1, s, 1);
  REQUIRE(cex.has_value());
  CHECK(cex->picture.side() == 1);
  CHECK(cex->verdict_a);
  CHECK_FALSE(cex->verdict_b);

  CellularAutomaton a{1, s, s, {"1"}, {}};
  for (std::string q : {"0", "1"})
    for (std::string r : {"0", "1", "#"}) a.delta[{q, r}] = {(q == "1" && r != "0") ? "1" : "0"};
  LanguageDef ca = AutomatonDef{a, 1, 1};
  LanguageDef phi = SentenceDef{parse_sentence("(forall (x) (Q_1 x))", coord(1, s)), Encoding::Coordinate, EsoEngine::Brute};
  CHECK_FALSE(equivalent_up_to(ca, phi, 1, s, 4).has_value());
  LanguageDef psi = SentenceDef{parse_sentence("(exists (x) (Q_1 x))", coord(1, s)), Encoding::Coordinate};
  auto c1 = equivalent_up_to(ca, psi, 1, s, 4);
  auto c3 = equivalent_up_to(ca, psi, 1, s, 4, EquivOptions{1 << 20, 3});
  REQUIRE(c1.has_value());
  REQUIRE(c3.has_value());
  CHECK(c1->picture == c3->picture);
  CHECK(picture_inline(c1->picture) == "1 2 / 0 1 / 0 1");
  CHECK_THROWS_AS(equivalent_up_to(ca, ca, 1, s, 30), CapExceeded);
}
