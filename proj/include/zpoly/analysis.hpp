#pragma once
// Growth of Z-polyregular functions: how fast |f(w)| grows with |w|, with
// exact certificates from the linear representation and explicit pumping
// witnesses, plus the growth-equivalence relations built on it.

#include <cstdint>

#include "zpoly/forests.hpp"

namespace zpoly {

class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPolynomialGrowth : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Over the minimal representation (I, mu, F), layer j holds the row vectors x
// whose series w -> x mu(w) F is O(|w|^j). Each layer is mu-invariant, and on
// the quotient of layer j by layer j-1 the matrices mu(w) form a finite
// monoid, which is how the layers are computed. The degree is the first layer
// containing I, or -1 for the zero series.
struct GrowthFiltration {
  LinRep rep;                   // minimal
  std::vector<Echelon> layers;  // layers[j] spans the O(|w|^j) row vectors
  int degree = -1;

  // Least j with x in layers[j]; -1 for x = 0.
  int level_of(const QVector& x) const;
  std::vector<std::size_t> dims() const;
};

// Raises NotPolynomialGrowth when the series grows faster than any
// polynomial, and CapExceeded when a quotient monoid search passes the cap.
GrowthFiltration growth_filtration(const LinRep& r, std::size_t monoid_cap = kDefaultMonoidCap);

struct PatternPolynomial {
  PumpingPattern pattern;
  long threshold = 0;  // smallest exponent used in the fit
  MPoly poly;
  bool verified = false;
};

// Replaces every pump word by its power with the global idempotent exponent
// of the product monoid of f.
PumpingPattern normalize_pattern(const Cplc& f, const PumpingPattern& p);
PumpingPattern normalize_pattern(const ProductMonoid& pm, const PumpingPattern& p);

// Fits X -> f(alpha_0 w_1^X1 ... alpha_l) with per-variable degree at most the
// declared level k on {X0..X0+k}^l, X0 = 2(k+1), and checks the fit on the
// next k+1 values in every coordinate. One retry with X0 doubled; after that
// VerificationFailed.
PatternPolynomial pattern_polynomial(const Cplc& f, const PumpingPattern& p);
PatternPolynomial pattern_polynomial(const LinRep& rep, int level, const PumpingPattern& p, long step = 1,
                                     long first_threshold = 0);

struct SearchBudget {
  std::size_t pump_len = 3;
  std::size_t connector_len = 2;
  std::size_t samples = 8;        // random sample words for forest patterns
  std::size_t sample_len = 12;
  std::size_t max_patterns = 20000;  // per pattern size
  std::uint64_t seed = 0;
};

enum class GrowthMode { budgeted, certified };

struct GrowthVerdict {
  int degree = -1;
  std::optional<PatternPolynomial> witness;  // degree >= 1 and found
  GrowthMode mode = GrowthMode::budgeted;
  bool budget_exhausted = false;
  std::vector<std::size_t> filtration;  // layer dimensions
  std::size_t patterns_explored = 0;
};

// The degree always comes from the filtration. Budgeted mode then looks for a
// witness pattern within the budget and flags budget_exhausted if none of
// degree k* turns up. Certified mode widens the budget and never flags, since
// the filtration is itself the certificate.
GrowthVerdict growth_degree(const Cplc& f, const SearchBudget& budget = {},
                            GrowthMode mode = GrowthMode::budgeted);

struct PumpSearch {
  std::optional<PatternPolynomial> best;  // highest total degree seen, earliest on ties
  bool reached = false;                   // best has total degree >= target
  std::size_t explored = 0;
  bool budget_exhausted = false;          // enumeration stopped at max_patterns
};

// Patterns with exactly `size` pumps: exhaustive pump words and connectors by
// increasing total length within the budget, then patterns cut from forests of
// seeded random sample words. Stops at the first pattern of total degree at
// least `target`.
PumpSearch pump_search(const Cplc& f, std::size_t size, int target, const SearchBudget& budget = {});

// f - g in V_k. For k = -1 this is plain equality.
bool equiv_mod_k(const Cplc& f, const Cplc& g, int k);

struct UltimateReport {
  PumpingPattern pattern;
  bool polynomial = false;
  std::optional<MPoly> poly;
};
// For each pattern, whether X -> f(alpha_0 w_1^(N X1) ...) agrees with a
// polynomial from the threshold on.
std::vector<UltimateReport> ultimate_poly_check(const Cplc& f, const std::vector<PumpingPattern>& patterns,
                                                long step);

nlohmann::json pattern_to_json(const PumpingPattern& p, const Alphabet& a);
PumpingPattern pattern_from_json(const nlohmann::json& j, const Alphabet& a);
nlohmann::json verdict_to_json(const GrowthVerdict& v, const Alphabet& a);

}  // namespace zpoly
