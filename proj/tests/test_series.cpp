#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zpoly/series.hpp"

using namespace zpoly;

namespace {

const Alphabet AB({"a", "b"});
const Alphabet UNARY({"a"});

LinRep ind(const char* re, const Alphabet& a = AB) { return indicator(regex_to_min_dfa(re, a)); }

// The two-dimensional representation of w -> (-1)^|w| |w| over one letter.
LinRep signed_length() {
  LinRep r;
  r.alphabet = UNARY;
  r.dim = 2;
  r.initial = {Rat(-1), Rat(0)};
  r.final = {Rat(0), Rat(1)};
  QMatrix m(2, 2);
  m(0, 0) = -1;
  m(0, 1) = 1;
  m(1, 1) = -1;
  r.letters = {m};
  return r;
}

oracle::Fn as_fn(const LinRep& r) {
  return [r](const Word& w) { return eval(r, w); };
}

LinRep random_rep(std::mt19937_64& rng, const Alphabet& a, std::size_t n) {
  LinRep r;
  r.alphabet = a;
  r.dim = n;
  for (std::size_t i = 0; i < n; ++i) {
    r.initial.push_back(static_cast<long>(rng() % 5) - 2);
    r.final.push_back(static_cast<long>(rng() % 5) - 2);
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = static_cast<long>(rng() % 3) - 1;
    r.letters.push_back(m);
  }
  return r;
}

}  // namespace

TEST_CASE("evaluation examples") {
  LinRep g = signed_length();
  CHECK(eval(g, {0, 0}) == 2);
  CHECK(eval(g, {}) == 0);
  CHECK(eval(g, {0, 0, 0}) == -3);
  CHECK_THROWS_AS(eval(g, {1}), InputError);
  CHECK(eval(ind(".*"), {0, 1, 1}) == 1);
  CHECK(eval(ind("a.*"), {1, 0}) == 0);
  LinRep par = ind("(aa)*", UNARY);
  for (std::size_t n = 0; n < 8; ++n) CHECK(eval(par, Word(n, 0)) == (n % 2 == 0 ? 1 : 0));
}

TEST_CASE("combinators agree with pointwise definitions") {
  std::vector<LinRep> pool = {ind(".*a"), ind(".*"), ind("a.*b"), ind("(ab)*"), ind("()"),
                              scalar(3, ind("b+")), ind("!(.*aa.*)")};
  auto words = words_up_to(2, 6);
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j) {
      const LinRep &f = pool[i], &g = pool[j];
      LinRep s = sum(f, g), c = cauchy(f, g), h = hadamard(f, g);
      for (const Word& w : words) {
        CHECK(eval(s, w) == eval(f, w) + eval(g, w));
        CHECK(eval(h, w) == eval(f, w) * eval(g, w));
        CHECK(eval(c, w) == oracle::cauchy(as_fn(f), as_fn(g), w));
      }
    }
  LinRep count_a = cauchy(ind(".*a"), ind(".*"));
  for (const Word& w : words) CHECK(eval(count_a, w) == Rat(oracle::count(w, 0)));
  CHECK(eval(cauchy(pool[0], pool[2]), {0, 1}) ==
        eval(pool[0], {}) * eval(pool[2], {0, 1}) + eval(pool[0], {0}) * eval(pool[2], {1}) +
            eval(pool[0], {0, 1}) * eval(pool[2], {}));
  CHECK(equivalent(sum(count_a, scalar(-1, count_a)), zero_rep(AB)));
  CHECK_THROWS_AS(sum(ind("a*", UNARY), ind("a*")), InputError);
}

TEST_CASE("star matches the factorisation oracle") {
  LinRep plus = ind(".+", UNARY);
  LinRep s = star(plus);
  CHECK(eval(s, {}) == 1);
  for (std::size_t n = 1; n <= 8; ++n) CHECK(eval(s, Word(n, 0)) == Rat(mpz_class(1) << (n - 1)));
  for (long d : {-3L, -2L, -1L, 2L, 5L}) {
    LinRep sd = star(scalar(d, plus));
    for (std::size_t n = 1; n <= 7; ++n) {
      mpz_class expect = d;
      for (std::size_t i = 1; i < n; ++i) expect *= (1 + d);
      CHECK(eval(sd, Word(n, 0)) == Rat(expect));
    }
  }
  // The displayed (-2)^n identity for d = -3 is off: a^n gives -3 (-2)^(n-1).
  LinRep m3 = star(scalar(-3, plus));
  CHECK(eval(m3, {0}) == -3);
  CHECK(eval(m3, {0, 0}) == 6);
  std::vector<LinRep> proper = {ind(".*a"), ind("a.*b"), scalar(2, ind("b")), cauchy(ind(".*a"), ind(".+"))};
  for (const auto& f : proper) {
    LinRep sf = star(f);
    for (const Word& w : words_up_to(2, 6)) CHECK(eval(sf, w) == oracle::star(as_fn(f), w));
  }
  CHECK_THROWS_AS(star(ind(".*")), StarUndefined);
}

TEST_CASE("minimisation") {
  CHECK(reduce_minimize(scalar(0, ind("a.*"))).rep.dim == 0);
  // Pad the signed-length representation with two dead coordinates.
  LinRep g = signed_length();
  LinRep padded = sum(g, scalar(0, ind("(aa)*", UNARY)));
  CHECK(padded.dim == 4);
  Minimized m = reduce_minimize(padded);
  CHECK(m.rep.dim == 2);
  for (std::size_t n = 0; n < 10; ++n) CHECK(eval(m.rep, Word(n, 0)) == eval(g, Word(n, 0)));
  CHECK(reduce_minimize(m.rep).rep.dim == 2);
  CHECK(m.rows.words.size() == 2);
  CHECK(m.columns.words.size() == 2);

  // Hankel rank oracle on words of length <= 3 for indicators.
  for (const char* re : {"a.*", "(ab)*", ".*aa.*", "a*b*", "()"}) {
    LinRep r = ind(re);
    auto ws = words_up_to(2, 3);
    std::vector<QVector> rows;
    for (const Word& u : ws) {
      QVector row;
      for (const Word& v : ws) {
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        row.push_back(eval(r, uv));
      }
      rows.push_back(row);
    }
    CHECK_MESSAGE(reduce_minimize(r).rep.dim == rank(rows, ws.size()), re);
  }
}

TEST_CASE("equivalence decisions and witnesses") {
  LinRep count_a = cauchy(ind(".*a"), ind(".*"));
  LinRep count_b = cauchy(ind(".*b"), ind(".*"));
  CHECK(equivalent(count_a, count_a));
  CHECK_FALSE(equivalent(count_a, count_b));
  auto w = distinguishing_word(count_a, count_b);
  REQUIRE(w);
  CHECK(*w == Word{0});
  CHECK_FALSE(distinguishing_word(count_a, count_a));

  // The corrected signed-length identity over one letter.
  LinRep odd = ind("a(aa)*", UNARY), even = ind("(aa)*", UNARY);
  LinRep lhs = sum(sum(cauchy(odd, odd), cauchy(even, even)),
                   scalar(-1, sum(cauchy(even, odd), cauchy(odd, even))));
  CHECK(equivalent(sum(lhs, difference(odd, even)), signed_length()));
  // As literally displayed, the last two terms have the opposite sign.
  LinRep literal = sum(lhs, difference(even, odd));
  CHECK_FALSE(equivalent(literal, signed_length()));
  CHECK(distinguishing_word(literal, signed_length()) == Word{});

  // Minimisation-based decision agrees with the finite test set.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    LinRep f = random_rep(rng, AB, 1 + rng() % 3);
    LinRep g = trial % 3 == 0 ? f : random_rep(rng, AB, 1 + rng() % 3);
    if (trial % 5 == 1) g = sum(f, scalar(0, g));
    bool brute = true;
    for (const Word& x : words_up_to(2, f.dim + g.dim - 1)) brute = brute && eval(f, x) == eval(g, x);
    CHECK(equivalent(f, g) == brute);
    CHECK(distinguishing_word(f, g).has_value() == !brute);
  }
}

TEST_CASE("spectral probes") {
  LinRep g = signed_length();
  auto ok = spectrum_probe(g, RootMode::zero_union_unity, 4);
  CHECK(ok.pass);
  CHECK(ok.exhaustive);
  CHECK(ok.words_checked == 5);
  auto bad = spectrum_probe(g, RootMode::zero_one, 4);
  CHECK_FALSE(bad.pass);
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations.front().word == Word{0});
  LinRep pow2;
  pow2.alphabet = UNARY;
  pow2.dim = 1;
  pow2.initial = {1};
  pow2.final = {1};
  QMatrix m(1, 1);
  m(0, 0) = -2;
  pow2.letters = {m};
  auto p2 = spectrum_probe(pow2, RootMode::zero_union_unity, 4);
  CHECK_FALSE(p2.pass);
  CHECK(p2.violations.front().word == Word{0});
  auto sampled = spectrum_probe(ind("a.*"), RootMode::zero_one, 20, 100, 1);
  CHECK_FALSE(sampled.exhaustive);
  CHECK(sampled.words_checked == 100);
  CHECK(sampled.pass);
}

TEST_CASE("eigenvalues are captured by the spanning words") {
  struct Case {
    LinRep rep;
    Word w;
    Rat lambda;
  };
  std::vector<Case> cases = {{signed_length(), {0}, -1},
                             {cauchy(ind(".*a"), ind(".*")), {0}, 1},
                             {cauchy(ind(".*a"), ind(".*b.*")), {0, 1}, 1}};
  for (const auto& c : cases) {
    Minimized m = reduce_minimize(c.rep);
    const std::size_t n = m.rep.dim;
    QMatrix R(n, n), C(n, n), Mw = QMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        R(i, j) = m.rows.vectors[i][j];
        C(i, j) = m.columns.vectors[j][i];
      }
    for (Letter a : c.w) Mw = Mw * m.rep.letters[static_cast<std::size_t>(a)];
    // Left eigenvector y of mu(w) for lambda.
    QMatrix shifted = Mw - QMatrix::identity(n).scaled(c.lambda);
    auto ys = nullspace([&] {
      std::vector<QVector> cols;
      for (std::size_t j = 0; j < n; ++j) cols.push_back(shifted.col(j));
      return cols;
    }(), n);
    REQUIRE_FALSE(ys.empty());
    QVector y = ys[0];
    std::size_t e = 0;
    while (sgn(y[e]) == 0) ++e;
    auto Rinv = inverse(R), Cinv = inverse(C);
    REQUIRE(Rinv);
    REQUIRE(Cinv);
    QVector left = row_times(y, *Rinv), right = Cinv->col(e);
    for (long X = 1; X <= 5; ++X) {
      Rat total = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Word word = m.rows.words[i];
          for (long t = 0; t < X; ++t) word.insert(word.end(), c.w.begin(), c.w.end());
          word.insert(word.end(), m.columns.words[j].begin(), m.columns.words[j].end());
          total += left[i] * right[j] * eval(m.rep, word);
        }
      Rat expect = 1;
      for (long t = 0; t < X; ++t) expect *= c.lambda;
      CHECK(total / y[e] == expect);
    }
  }
}

TEST_CASE("representation JSON round trip") {
  LinRep g = scalar(Rat(1, 3), signed_length());
  LinRep back = linrep_from_json(linrep_to_json(g));
  CHECK(equivalent(g, back));
  CHECK(back.initial[0] == Rat(-1, 3));
  CHECK_THROWS_AS(linrep_from_json(nlohmann::json::parse(R"({"alphabet":["a"],"dim":1})")), InputError);
  CHECK_THROWS_AS(linrep_from_json(nlohmann::json::parse(
                      R"({"alphabet":["a"],"dim":1,"initial":[1],"final":["1/0"],"letters":{"a":[[1]]}})")),
                  InputError);
}
