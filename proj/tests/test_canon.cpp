#include "corpus_fns.hpp"
#include "doctest.h"
#include "zpoly/canon.hpp"

using namespace zpoly;

namespace {

Cplc load(const char* text) { return expr_to_cplc(parse_zexpr(text)); }

bool same_function(const Cplc& f, const char* text) { return equivalent(to_linrep(f), to_linrep(load(text))); }

const std::vector<const char*>& corpus_list() {
  static const std::vector<const char*> all{corpus::kPrefixA,     corpus::kEvenLength,    corpus::kCountA,
                                            corpus::kSignedLength, corpus::kCountAB,     corpus::kBlockProduct,
                                            corpus::kSquareLength};
  return all;
}

}  // namespace

TEST_CASE("minimal automaton of the prefix indicator") {
  Cplc f = load(corpus::kPrefixA);
  ResidualTransducer t = residual_transducer(f, 0);
  REQUIRE(t.size() == 3);
  CHECK(t.states[0].output == 0);
  CHECK(t.states[1].output == 1);
  CHECK(t.states[2].output == 0);
  CHECK(t.states[1].rep == Word{0});
  CHECK(t.states[2].rep == Word{1});
  for (const auto& l : t.labels) CHECK(l.is_empty());
  CHECK(t.automaton().canonical() == regex_to_min_dfa("a.*", f.alphabet()));
}

TEST_CASE("one-state transducer of the prefix indicator") {
  Cplc f = load(corpus::kPrefixA);
  ResidualTransducer t = residual_transducer(f, 1);
  REQUIRE(t.size() == 1);
  CHECK(t.states[0].output == 0);
  CHECK(same_function(t.label(0, 0), "alphabet a b\n1 - ind(a.*)"));
  CHECK(same_function(t.label(0, 1), "alphabet a b\n-ind(a.*)"));
  // aab: (1 - f(ab)) + (1 - f(b)) - f(ε) + 0.
  Word aab{0, 0, 1};
  CHECK(transducer_eval(t, aab) == 1);
  BigInt by_hand = eval(t.label(0, 0), Word{0, 1}) + eval(t.label(0, 0), Word{1}) + eval(t.label(0, 1), Word{}) +
                   t.states[0].output;
  CHECK(by_hand == 1);
  CHECK(transducer_counter_free(t).counter_free);
}

TEST_CASE("two-state transducer of the signed length") {
  Cplc f = load(corpus::kSignedLength);
  ResidualTransducer t = residual_transducer(f, 1);
  REQUIRE(t.size() == 2);
  CHECK(t.states[0].output == 0);
  CHECK(t.states[1].output == -1);
  CHECK(t.next(0, 0) == 1);
  CHECK(t.next(1, 0) == 0);
  CHECK(t.label(0, 0).is_empty());
  for (std::size_t n = 0; n <= 8; ++n) CHECK(eval(t.label(1, 0), Word(n, 0)) == (n % 2 ? -2 : 2));
  CounterFreeness cf = transducer_counter_free(t);
  CHECK_FALSE(cf.counter_free);
  REQUIRE(cf.counter);
  CHECK(cf.counter->state == 0);
  CHECK(cf.counter->u == Word{0});
  CHECK(cf.counter->n == 2);
}

TEST_CASE("transducers compute their source function") {
  for (const char* text : corpus_list()) {
    Cplc f = load(text);
    const int deg = growth_degree(f).degree;
    for (int k = std::max(deg, 0); k <= std::max(deg, 0) + 1; ++k) {
      ResidualTransducer t = residual_transducer(f, k);
      for (const Word& w : words_up_to(f.alphabet().size(), 6))
        CHECK_MESSAGE(transducer_eval(t, w) == eval(f, w), std::string(text));
    }
  }
}

TEST_CASE("states are distinct classes and labels drop a level") {
  for (const char* text : corpus_list()) {
    Cplc f = load(text);
    const int k = std::max(growth_degree(f).degree, 0);
    ResidualTransducer t = residual_transducer(f, k);
    for (std::size_t p = 0; p < t.size(); ++p)
      for (std::size_t q = p + 1; q < t.size(); ++q)
        CHECK_FALSE(equiv_mod_k(t.states[p].residual, t.states[q].residual, k - 1));
    for (const Word& w : words_up_to(f.alphabet().size(), t.size())) {
      const int q = t.automaton().run(t.initial, w);
      CHECK(equiv_mod_k(residual(f, w), t.states[static_cast<std::size_t>(q)].residual, k - 1));
    }
    for (const Cplc& l : t.labels) CHECK(growth_degree(l).degree <= k - 1);
  }
}

TEST_CASE("too low a level has infinitely many states") {
  CHECK_THROWS_AS(residual_transducer(load(corpus::kCountA), 0, 40), CapExceeded);
  CHECK_THROWS_AS(residual_transducer(load(corpus::kCountA), -1), std::invalid_argument);
}

TEST_CASE("star-freeness") {
  struct Case {
    const char* text;
    bool answer;
  };
  for (const auto& [text, answer] : std::vector<Case>{{corpus::kPrefixA, true},
                                                      {corpus::kEvenLength, false},
                                                      {corpus::kCountAB, true},
                                                      {corpus::kSignedLength, false},
                                                      {corpus::kCountA, true},
                                                      {corpus::kBlockProduct, true},
                                                      {corpus::kSquareLength, true},
                                                      {"alphabet a b\n0", true}}) {
    StarFreeVerdict v = star_free(load(text));
    CHECK_MESSAGE(v.answer == answer, std::string(text));
    REQUIRE_FALSE(v.trace.empty());
    if (!answer) CHECK(v.trace.back().counter.has_value());
  }
  StarFreeVerdict ab = star_free(load(corpus::kCountAB));
  CHECK(ab.trace[0].degree == 2);
  CHECK(ab.trace[0].states == 1);
  StarFreeVerdict s = star_free(load(corpus::kSignedLength));
  CHECK(s.trace.size() == 1);
  CHECK(s.trace[0].degree == 1);
  nlohmann::json j = starfree_to_json(s, Alphabet({"a"}));
  CHECK(j["star_free"] == false);
  CHECK(j["trace"][0]["counter"]["u"] == "a");
}

TEST_CASE("transducer export") {
  Cplc f = load(corpus::kSignedLength);
  ResidualTransducer t = residual_transducer(f, 1);
  nlohmann::json j = transducer_to_json(t);
  CHECK(j.dump() == transducer_to_json(residual_transducer(f, 1)).dump());
  ResidualTransducer back = transducer_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.size() == 2);
  for (const Word& w : words_up_to(1, 8)) CHECK(transducer_eval(back, w) == eval(f, w));
  std::string dot = transducer_to_dot(t);
  CHECK(dot.find("a | 0") != std::string::npos);
  CHECK(dot.find("q1 -> q0") != std::string::npos);
  CHECK_THROWS_AS(transducer_from_json(nlohmann::json{{"alphabet", {"a"}}}), InputError);
}
