#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zpoly/core_lang.hpp"

using namespace zpoly;

namespace {

const Alphabet AB({"a", "b"});
const Alphabet UNARY({"a"});

// Product-automaton emptiness oracle for language equality.
bool same_language(const Dfa& x, const Dfa& y) {
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> stack{{x.initial(), y.initial()}};
  while (!stack.empty()) {
    auto [p, q] = stack.back();
    stack.pop_back();
    if (!seen.insert({p, q}).second) continue;
    if (x.accepting(p) != y.accepting(q)) return false;
    for (std::size_t a = 0; a < x.alphabet().size(); ++a)
      stack.push_back({x.next(p, static_cast<Letter>(a)), y.next(q, static_cast<Letter>(a))});
  }
  return true;
}

Dfa random_dfa(std::mt19937_64& rng, const Alphabet& a, int states) {
  std::vector<int> delta(static_cast<std::size_t>(states) * a.size());
  for (auto& t : delta) t = static_cast<int>(rng() % static_cast<unsigned>(states));
  std::vector<bool> acc(static_cast<std::size_t>(states));
  for (std::size_t q = 0; q < acc.size(); ++q) acc[q] = rng() % 2;
  return Dfa(a, states, 0, delta, acc);
}

}  // namespace

TEST_CASE("regex_to_min_dfa examples") {
  Dfa d = regex_to_min_dfa("a(a|b)*", AB);
  CHECK(d.num_states() == 3);
  Dfa e = regex_to_min_dfa("∅", AB);
  CHECK(e.num_states() == 1);
  CHECK_FALSE(e.accepting(0));
  CHECK(regex_to_min_dfa("(aa)*", UNARY).num_states() == 2);
  CHECK(regex_to_min_dfa("()", AB).accepts({}));
  CHECK_THROWS_AS(regex_to_min_dfa("a", Alphabet()), InputError);
  CHECK_THROWS_AS(parse_regex("a|"), InputError);
  CHECK_THROWS_AS(regex_to_min_dfa("c", AB), InputError);
}

TEST_CASE("regex automata agree with the recursive matcher") {
  const char* corpus[] = {"a(a|b)*", "(aa)*", ".*a.*", "!(.*ab.*)", "(a|b)*b&a.*", "a*b*",
                          "(ab|ba)*", "!()", "(a.)+", "ε|b(a*)", ".*a..", "!(a*)&!(b*)"};
  for (const char* text : corpus) {
    Regex r = parse_regex(text);
    Dfa d = regex_to_min_dfa(r, AB);
    for (const Word& w : words_up_to(2, 8)) CHECK_MESSAGE(d.accepts(w) == oracle::regex_matches(r, AB, w), text);
    // The printed regex reparses to the same language, as does the DFA's regex.
    CHECK(regex_to_min_dfa(regex_to_string(r), AB) == d);
    CHECK(regex_to_min_dfa(dfa_to_regex(d), AB) == d);
  }
}

TEST_CASE("canonical forms coincide exactly for equal languages") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    Dfa x = random_dfa(rng, AB, 1 + static_cast<int>(rng() % 5));
    Dfa y = random_dfa(rng, AB, 1 + static_cast<int>(rng() % 5));
    CHECK((x.canonical() == y.canonical()) == same_language(x, y));
    CHECK(same_language(x, x.canonical()));
  }
}

TEST_CASE("boolean combinations") {
  Dfa l = regex_to_min_dfa("a.*", AB);
  Dfa c = dfa_combine(BoolOp::complement, l);
  CHECK(dfa_combine(BoolOp::complement, c) == l);
  Dfa r = regex_to_min_dfa(".*b", AB);
  Dfa both = dfa_combine(BoolOp::intersection, l, &r);
  for (const Word& w : words_up_to(2, 6))
    CHECK(both.accepts(w) == (!w.empty() && w.front() == 0 && w.back() == 1));
  Dfa empty = empty_dfa(AB);
  CHECK(dfa_combine(BoolOp::union_, l, &empty) == l);
  Dfa diff = dfa_combine(BoolOp::difference, l, &r);
  for (const Word& w : words_up_to(2, 6)) CHECK(diff.accepts(w) == (l.accepts(w) && !r.accepts(w)));
  CHECK_THROWS_AS(dfa_combine(BoolOp::union_, l, nullptr), InputError);
  Dfa unary = regex_to_min_dfa("a*", UNARY);
  CHECK_THROWS_AS(dfa_combine(BoolOp::union_, l, &unary), InputError);
}

TEST_CASE("residual languages") {
  Dfa l = regex_to_min_dfa("a.*", AB);
  CHECK(residual_language(l, {0}).is_universal());
  CHECK(residual_language(l, {}) == l);
  Dfa par = regex_to_min_dfa("(aa)*", UNARY);
  CHECK(residual_language(par, {0}) == regex_to_min_dfa("a(aa)*", UNARY));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    Dfa d = random_dfa(rng, AB, 1 + static_cast<int>(rng() % 5)).canonical();
    for (const Word& u : words_up_to(2, 3))
      for (const Word& v : words_up_to(2, 2)) {
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        CHECK(residual_language(d, uv) == residual_language(residual_language(d, u), v));
      }
  }
}

TEST_CASE("transition monoids and aperiodicity") {
  auto [par, par_mor] = transition_monoid(regex_to_min_dfa("(aa)*", UNARY));
  CHECK(par.size == 2);
  auto ap = monoid_aperiodic(par);
  CHECK_FALSE(ap.aperiodic);
  CHECK(ap.omega == 2);
  auto [m2, mor2] = transition_monoid(regex_to_min_dfa("a.*", AB));
  CHECK(m2.size <= 3);
  CHECK(monoid_aperiodic(m2).aperiodic);
  auto [triv, tmor] = transition_monoid(universal_dfa(AB));
  CHECK(triv.size == 1);
  auto tap = monoid_aperiodic(triv);
  CHECK(tap.aperiodic);
  CHECK(tap.omega == 1);
  CHECK(monoid_aperiodic(transition_monoid(regex_to_min_dfa(".*a.*", AB)).first).aperiodic);
  CHECK_THROWS_AS(transition_monoid(regex_to_min_dfa("(a|b)(a|b)(a|b)(a|b)(a|b).*", AB), 5), CapExceeded);
}

TEST_CASE("aperiodicity matches known star-freeness status") {
  std::vector<std::pair<const char*, bool>> corpus = {
      {"(aa)*", false},      {"a.*", true},          {".*ab.*", true},      {"(ab)*", true},
      {"((a|b)(a|b))*", false}, {"a*b*", true},      {"(aab)*", true},      {"(a(aa)*b)*", false},
      {".*b", true},         {"(b*ab*ab*)*", false}};
  for (auto [text, sf] : corpus)
    CHECK_MESSAGE(monoid_aperiodic(transition_monoid(regex_to_min_dfa(text, AB)).first).aperiodic == sf, text);
}

TEST_CASE("shortest preimages") {
  auto [par, mor] = transition_monoid(regex_to_min_dfa("(aa)*", UNARY));
  CHECK(shortest_preimage(mor, par.unit) == Word{});
  int swap = mor.letter_images[0];
  CHECK(shortest_preimage(mor, swap) == Word{0});
  // A morphism that never reaches element 1: the letter maps to the unit.
  auto m = std::make_shared<const FiniteMonoid>(FiniteMonoid{2, 0, {0, 1, 1, 1}});
  MonoidMorphism stuck{m, UNARY, {0}};
  CHECK_FALSE(shortest_preimage(stuck, 1).has_value());
}

TEST_CASE("counter-freeness equals aperiodicity on small random automata") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    Dfa d = random_dfa(rng, AB, 1 + static_cast<int>(rng() % 5));
    auto witness = find_counter(d);
    // Brute force over |u| <= 4, n <= 6.
    bool brute_counter = false;
    for (const Word& u : words_up_to(2, 4))
      for (int q = 0; q < d.num_states() && !brute_counter; ++q) {
        Word un;
        for (int n = 1; n <= 6; ++n) {
          un.insert(un.end(), u.begin(), u.end());
          if (n >= 2 && d.run(q, un) == q && d.run(q, u) != q) brute_counter = true;
        }
      }
    bool aperiodic = monoid_aperiodic(transition_monoid(d).first).aperiodic;
    CHECK(aperiodic == !witness.has_value());
    CHECK(brute_counter == witness.has_value());
    if (witness) {
      Word un;
      for (int i = 0; i < witness->n; ++i) un.insert(un.end(), witness->u.begin(), witness->u.end());
      CHECK(d.run(witness->state, un) == witness->state);
      CHECK(d.run(witness->state, witness->u) != witness->state);
    }
  }
}

TEST_CASE("DFA JSON round trip and word parsing") {
  Dfa d = regex_to_min_dfa("a.*", AB);
  CHECK(dfa_from_json(dfa_to_json(d)) == d);
  CHECK_THROWS_AS(dfa_from_json(nlohmann::json::parse(R"({"alphabet":["a"],"states":1})")), InputError);
  Alphabet multi({"x", "xy", "y"});
  CHECK(multi.parse_word("xyx") == Word{1, 0});
  CHECK(AB.parse_word("ε").empty());
  CHECK_THROWS_AS(AB.parse_word("abc"), InputError);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), InputError);
  CHECK_THROWS_AS(Alphabet(std::vector<std::string>{}), InputError);
}
