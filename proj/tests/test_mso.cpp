#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zpoly/mso.hpp"

using namespace zpoly;

namespace {

// Reference semantics straight from the definitions: positions for
// first-order variables, bit masks for set variables.
struct RefEval {
  const MsoFormula& f;
  const Word& w;
  std::vector<long> pos;
  std::vector<unsigned long> sets;

  bool holds(const MsoNode& n) {
    using K = MsoNode::Kind;
    auto p = [&](int v) { return pos[static_cast<std::size_t>(v)]; };
    switch (n.kind) {
      case K::truth: return true;
      case K::letter: return w[static_cast<std::size_t>(p(n.var))] == n.letter;
      case K::less: return p(n.var) < p(n.var2);
      case K::equal: return p(n.var) == p(n.var2);
      case K::member: return (sets[static_cast<std::size_t>(n.var2)] >> p(n.var)) & 1ul;
      case K::negation: return !holds(*n.children[0]);
      case K::conjunction: return holds(*n.children[0]) && holds(*n.children[1]);
      case K::disjunction: return holds(*n.children[0]) || holds(*n.children[1]);
      case K::exists: {
        std::size_t v = static_cast<std::size_t>(n.var);
        if (f.vars[v].second_order) {
          for (unsigned long s = 0; s < (1ul << w.size()); ++s) {
            sets[v] = s;
            if (holds(*n.children[0])) return true;
          }
          return false;
        }
        for (long i = 0; i < static_cast<long>(w.size()); ++i) {
          pos[v] = i;
          if (holds(*n.children[0])) return true;
        }
        return false;
      }
    }
    return false;
  }

  long count(std::size_t i = 0) {
    if (i == f.free_vars.size()) return holds(*f.root) ? 1 : 0;
    std::size_t v = static_cast<std::size_t>(f.free_vars[i]);
    long total = 0;
    if (f.vars[v].second_order) {
      for (unsigned long s = 0; s < (1ul << w.size()); ++s) {
        sets[v] = s;
        total += count(i + 1);
      }
    } else {
      for (long p = 0; p < static_cast<long>(w.size()); ++p) {
        pos[v] = p;
        total += count(i + 1);
      }
    }
    return total;
  }
};

long brute_count(const MsoFormula& f, const Word& w) {
  RefEval e{f, w, std::vector<long>(f.vars.size(), 0), std::vector<unsigned long>(f.vars.size(), 0)};
  return e.count();
}

const char* kPairs = "count[x,y] a(x) & b(y)";
const char* kOrderedPairs = "count[x,y] a(x) & b(y) & x > y";
const char* kOddSets =
    "alphabet a\n"
    "count[X] (exists x. x in X & forall y. x <= y)"
    " & (exists x. x in X & forall y. y <= x)"
    " & (forall x. forall y. (x in X & succ(x,y)) -> !(y in X))"
    " & (forall x. forall z. (x in X & exists y. succ(x,y) & succ(y,z)) -> z in X)";

std::vector<const char*> fo_corpus() {
  return {kPairs,
          kOrderedPairs,
          "count[] exists x. a(x)",
          "count[x] a(x) & forall y. x <= y",
          "count[x] x = x & exists y. b(y) & forall z. z <= y",
          "alphabet a b\ncount[x,y] x < y & !(exists z. x < z & z < y)",
          "count[x] a(x) | exists y. y < x & b(y)",
          "count[x,y] succ(x,y) & a(x) & a(y)",
          "alphabet a b\ncount[x] true",
          "count[] forall x. a(x) -> exists y. x < y & b(y)"};
}

}  // namespace

TEST_CASE("parsing examples and errors") {
  MsoFormula p = parse_formula(kPairs);
  CHECK(p.free_fo.size() == 2);
  CHECK(p.free_so.empty());
  CHECK(p.is_fo);
  CHECK(p.alphabet == Alphabet({"a", "b"}));
  MsoFormula s = parse_formula("count[] exists x. a(x)");
  CHECK(s.free_vars.empty());
  MsoFormula b = parse_formula("count[x] a(x) & forall y. x <= y");
  CHECK(b.free_fo.size() == 1);
  CHECK_FALSE(parse_formula(kOddSets).is_fo);
  // Shadowed names are renamed apart.
  MsoFormula sh = parse_formula("count[x] a(x) & exists x. b(x)");
  CHECK(sh.vars.size() == 2);
  CHECK(sh.vars[0].name != sh.vars[1].name);
  CHECK_THROWS_WITH_AS(parse_formula("count[x] a(y)"), doctest::Contains("unbound"), InputError);
  CHECK_THROWS_WITH_AS(parse_formula("count[x]\n a(x) &"), doctest::Contains("line 2"), InputError);
  CHECK_THROWS_AS(parse_formula("count[x] x in x"), InputError);
  CHECK_THROWS_AS(parse_formula("count[x] true"), InputError);  // no letters, no alphabet line
  CHECK_THROWS_AS(parse_formula("alphabet a\ncount[x] b(x)"), InputError);
}

TEST_CASE("marked automata") {
  MsoFormula p = parse_formula(kPairs);
  MarkedAutomaton m = compile_marked_automaton(p);
  CHECK(m.tracks == 2);
  const Alphabet& ext = m.dfa.alphabet();
  CHECK(ext.size() == 8);
  auto word = [&](std::vector<std::string> syms) {
    Word w;
    for (const auto& s : syms) w.push_back(ext.index(s));
    return w;
  };
  CHECK(m.dfa.accepts(word({"a:10", "b:01"})));
  CHECK(m.dfa.accepts(word({"b:01", "b:00", "a:10"})));
  CHECK_FALSE(m.dfa.accepts(word({"b:10", "a:01"})));
  CHECK_FALSE(m.dfa.accepts(word({"a:10", "a:10", "b:01"})));  // two marks on one track
  CHECK_FALSE(m.dfa.accepts(word({"a:10"})));                  // missing mark
  MarkedAutomaton sent = compile_marked_automaton(parse_formula("alphabet a b\ncount[] exists x. a(x)"));
  CHECK(sent.tracks == 0);
  CHECK(sent.dfa.alphabet().size() == 2);
  CHECK(sent.dfa.canonical() == regex_to_min_dfa(".*a.*", Alphabet({"a", "b"})));
}

TEST_CASE("counting examples") {
  const Alphabet AB({"a", "b"});
  LinRep pairs = count_to_linrep(parse_formula(kPairs));
  for (const Word& w : words_up_to(2, 6))
    CHECK(eval(pairs, w) == Rat(static_cast<long>(oracle::count(w, 0) * oracle::count(w, 1))));
  for (const auto& row : pairs.letters)
    for (std::size_t i = 0; i < pairs.dim; ++i)
      for (std::size_t j = 0; j < pairs.dim; ++j) CHECK((row(i, j) >= 0 && row(i, j) <= 4));
  CHECK(eval(pairs, {}) == 0);

  // a^{n0} b a^{n1} ... b a^{np} -> sum of i * n_i.
  LinRep ordered = count_to_linrep(parse_formula(kOrderedPairs));
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    std::size_t p = rng() % 4;
    Word w;
    long expect = 0;
    for (std::size_t i = 0; i <= p; ++i) {
      if (i) w.push_back(1);
      std::size_t ni = rng() % 4;
      w.insert(w.end(), ni, 0);
      expect += static_cast<long>(i * ni);
    }
    CHECK(eval(ordered, w) == expect);
  }

  Cplc sentence = count_to_cplc(parse_formula("count[] exists x. a(x)"));
  CHECK(sentence.declared_level() == 0);
  CHECK(sentence.terms().size() == 1);
  CHECK(sentence.terms().begin()->first.size() == 1);

  Cplc times = count_to_cplc(parse_formula("alphabet a b\ncount[x] x = x & exists y. b(y)"));
  CHECK(times.declared_level() == 1);
  for (const Word& w : words_up_to(2, 6))
    CHECK(eval(times, w) == BigInt(oracle::count(w, 1) > 0 ? static_cast<long>(w.size()) : 0));

  Cplc pairs_c = count_to_cplc(parse_formula(kPairs));
  CHECK(pairs_c.declared_level() == 2);
  for (const auto& [factors, c] : pairs_c.terms()) CHECK(factors.size() <= 3);
  CHECK(equivalent(to_linrep(pairs_c), pairs));
}

TEST_CASE("set counting") {
  const Alphabet A({"a"});
  LinRep all = count_sets_to_linrep(parse_formula("alphabet a\ncount[X] true"));
  LinRep odd = count_sets_to_linrep(parse_formula(kOddSets));
  LinRep empty_set = count_sets_to_linrep(parse_formula("alphabet a\ncount[X] !exists x. x in X"));
  for (std::size_t n = 0; n <= 8; ++n) {
    Word w(n, 0);
    CHECK(eval(all, w) == Rat(mpz_class(1) << n));
    CHECK(eval(odd, w) == (n % 2));
    CHECK(eval(empty_set, w) == 1);
  }
  CHECK_THROWS_AS(count_sets_to_linrep(parse_formula(kPairs)), InputError);
  CHECK_THROWS_AS(count_to_linrep(parse_formula(kOddSets)), InputError);
}

TEST_CASE("compiled counts agree with the reference evaluator") {
  for (const char* text : fo_corpus()) {
    MsoFormula f = parse_formula(text);
    LinRep r = count_to_linrep(f);
    Cplc c = count_to_cplc(f);
    CHECK_MESSAGE(equivalent(to_linrep(c), r), text);
    CHECK(c.declared_level() == static_cast<int>(f.free_fo.size()));
    const std::size_t k = f.alphabet.size();
    for (const Word& w : words_up_to(k, 6)) {
      long expect = brute_count(f, w);
      CHECK_MESSAGE(eval(r, w) == expect, text);
    }
    if (f.free_vars.empty()) {
      Dfa d = compile_marked_automaton(f).dfa;
      for (const Word& w : words_up_to(k, 6)) CHECK(eval(r, w) == (d.accepts(w) ? 1 : 0));
    }
  }
  MsoFormula so = parse_formula(kOddSets);
  LinRep r = count_sets_to_linrep(so);
  for (const Word& w : words_up_to(1, 6)) CHECK(eval(r, w) == brute_count(so, w));
}

TEST_CASE("printing round trip keeps the fragment and the semantics") {
  std::vector<const char*> all = fo_corpus();
  all.push_back(kOddSets);
  for (const char* text : all) {
    MsoFormula f = parse_formula(text);
    MsoFormula g = parse_formula(formula_to_string(f));
    CHECK(g.is_fo == f.is_fo);
    CHECK(g.free_vars.size() == f.free_vars.size());
    if (f.free_so.empty()) {
      CHECK(equivalent(count_to_linrep(f), count_to_linrep(g)));
    } else {
      CHECK(equivalent(count_sets_to_linrep(f), count_sets_to_linrep(g)));
    }
  }
}
