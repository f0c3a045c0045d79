#pragma once
// Integer combinations of Cauchy products of regular-language indicators,
//   f = sum over terms of  c * (1_{L0} . 1_{L1} . ... . 1_{Lj}),
// plus the small expression language used to write them down.

#include <map>
#include <memory>

#include "zpoly/series.hpp"

namespace zpoly {

using FactorList = std::vector<Dfa>;  // canonical DFAs, Cauchy order

class Cplc {
 public:
  Cplc() = default;
  explicit Cplc(Alphabet alphabet, int declared_level = 0)
      : alphabet_(std::move(alphabet)), level_(declared_level) {}

  static Cplc indicator(const Dfa& d);
  static Cplc constant(const Alphabet& a, const BigInt& c);  // c * 1_{A*}

  const Alphabet& alphabet() const { return alphabet_; }
  int declared_level() const { return level_; }
  void set_declared_level(int k) { level_ = k; }
  const std::map<FactorList, BigInt>& terms() const { return terms_; }
  bool is_empty() const { return terms_.empty(); }
  // Largest factor count minus one over the stored terms; -1 when empty.
  int term_level() const;

  // Canonicalises the factors, merges with an identical list, drops zeros.
  // A product containing an empty language contributes nothing. The declared
  // level is raised when the new term needs it.
  void add_term(FactorList factors, const BigInt& coeff);

  bool operator==(const Cplc& o) const { return alphabet_ == o.alphabet_ && terms_ == o.terms_; }

 private:
  Alphabet alphabet_;
  int level_ = 0;
  std::map<FactorList, BigInt> terms_;
};

enum class CplcOp { sum, scalar, cauchy };
Cplc cplc_combine(CplcOp op, const Cplc& f, const Cplc* g = nullptr, const BigInt& delta = 1);
Cplc operator+(const Cplc& f, const Cplc& g);
Cplc operator-(const Cplc& f, const Cplc& g);
Cplc operator*(const BigInt& delta, const Cplc& f);
Cplc cauchy(const Cplc& f, const Cplc& g);

// w -> f(u w). Keeps the declared level.
Cplc residual(const Cplc& f, const Word& u);

// Direct evaluation by dynamic programming over split points.
BigInt eval(const Cplc& f, const Word& w);

// Compiled and minimised linear representation.
LinRep to_linrep(const Cplc& f);

// Product of the transition monoids of all factor automata, refined by a
// component recording the word itself when it has length at most one.
struct ProductMonoid {
  FiniteMonoid monoid;
  MonoidMorphism morphism;
  std::vector<Word> witnesses;  // shortlex-least preimage of each element
  Aperiodicity aperiodicity;
};
ProductMonoid product_monoid(const Cplc& f, std::size_t cap = kDefaultMonoidCap);

// alpha_0 w_1 alpha_1 ... w_l alpha_l, evaluated with each w_i repeated.
struct PumpingPattern {
  std::vector<Word> connectors;  // l + 1 words
  std::vector<Word> pumps;       // l non-empty words
  std::size_t size() const { return pumps.size(); }
  Word instantiate(const std::vector<unsigned long>& exponents) const;
  auto operator<=>(const PumpingPattern&) const = default;
};
std::string pattern_to_string(const PumpingPattern& p, const Alphabet& a);

// Expression text such as "2*ind(a.*) . ind(.*) - ind(b)"; "0" when empty.
std::string cplc_to_string(const Cplc& f);
// Same with a leading "alphabet ..." line, so the text reloads on its own.
std::string cplc_to_zexpr(const Cplc& f);
nlohmann::json cplc_to_json(const Cplc& f);
Cplc cplc_from_json(const nlohmann::json& j);

// ------------------------------------------------------------ expressions

struct ExprNode {
  enum class Kind { indicator, integer, sum, difference, negate, scale, cauchy, star };
  Kind kind = Kind::integer;
  std::string regex;  // for indicator
  BigInt value;       // for integer and scale
  std::vector<std::shared_ptr<const ExprNode>> children;
};

struct ParsedExpr {
  Alphabet alphabet;
  std::shared_ptr<const ExprNode> root;
  bool uses_star = false;
};

// Grammar (whitespace and '#' comments ignored):
//   file   := ['alphabet' symbol+ newline] expr
//   expr   := term (('+' | '-') term)*
//   term   := factor ('.' factor)*
//   factor := INT ['*' factor] | '-' factor | 'ind' '(' regex ')'
//           | 'star' '(' expr ')' | '(' expr ')'
// Without an alphabet line the alphabet is the sorted set of regex letters.
ParsedExpr parse_zexpr(std::string_view text);
Cplc expr_to_cplc(const ParsedExpr& e);      // rejects star
LinRep expr_to_linrep(const ParsedExpr& e);  // accepts star

}  // namespace zpoly
