#pragma once
// Exact arithmetic on top of GMP: rationals, dense matrices, univariate and
// multivariate polynomials. Nothing in here ever touches floating point.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zpoly {

using BigInt = mpz_class;
using Rat = mpq_class;  // GMP keeps it reduced with a positive denominator

class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string rat_to_string(const Rat& r);
Rat parse_rat(std::string_view text);
bool is_integer(const Rat& r);

using QVector = std::vector<Rat>;

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rat& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  QVector row(std::size_t r) const;
  QVector col(std::size_t c) const;

  QMatrix operator*(const QMatrix& o) const;
  QMatrix operator+(const QMatrix& o) const;
  QMatrix operator-(const QMatrix& o) const;
  QMatrix scaled(const Rat& s) const;
  QMatrix transposed() const;
  QMatrix power(unsigned long e) const;

  bool is_zero() const;
  bool operator==(const QMatrix& o) const = default;
  bool operator<(const QMatrix& o) const;

  Rat trace() const;
  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

QVector row_times(const QVector& v, const QMatrix& m);
QVector times_col(const QMatrix& m, const QVector& v);
Rat dot(const QVector& a, const QVector& b);
bool is_zero(const QVector& v);
QVector axpy(const Rat& a, const QVector& x, const QVector& y);  // a*x + y

// Incremental echelon basis of a subspace of Q^n. Remembers, for every stored
// echelon row, how it combines the vectors that were inserted, so callers can
// recover coordinates with respect to the inserted (word-indexed) vectors.
class Echelon {
 public:
  explicit Echelon(std::size_t ambient = 0) : n_(ambient) {}

  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return inserted_.size(); }
  bool contains(const QVector& v) const;
  bool insert(const QVector& v);  // true when the span grew
  QVector remainder(QVector v) const;

  // Coordinates c with v = sum_i c_i * inserted(i); throws if v is outside.
  QVector coordinates(const QVector& v) const;
  const QVector& inserted(std::size_t i) const { return inserted_[i]; }
  const std::vector<QVector>& inserted_all() const { return inserted_; }

 private:
  std::size_t n_;
  std::vector<QVector> inserted_;
  std::vector<QVector> rows_;     // echelon rows, pivot entry normalised to 1
  std::vector<std::size_t> pivots_;
  std::vector<QVector> combos_;   // rows_[i] = sum_j combos_[i][j] * inserted_[j]
};

std::size_t rank(const std::vector<QVector>& rows, std::size_t ambient);
// Basis of { y : r . y = 0 for every r in rows }.
std::vector<QVector> nullspace(const std::vector<QVector>& rows, std::size_t ambient);
std::optional<QMatrix> inverse(const QMatrix& m);

// ---------------------------------------------------------------- univariate

class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rat> coeffs);  // low degree first
  static UPoly monomial(const Rat& c, int degree);
  static UPoly x_minus(const Rat& root);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(int i) const;
  Rat leading() const;
  bool is_monic() const;

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly scaled(const Rat& s) const;
  // Euclidean division; returns {quotient, remainder}.
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const;
  Rat eval(const Rat& x) const;
  QMatrix eval(const QMatrix& m) const;

  bool operator==(const UPoly& o) const = default;
  std::string to_string(const std::string& var = "X") const;

 private:
  void trim();
  std::vector<Rat> c_;
};

UPoly char_poly(const QMatrix& m);
unsigned long euler_phi(unsigned long n);
const UPoly& cyclotomic(unsigned long n);

enum class RootMode { zero_union_unity, zero_one };

// How a polynomial splits over {0} and the roots of unity.
struct RootProfile {
  int zero_multiplicity = 0;
  std::vector<unsigned long> unity_orders;  // order of each cyclotomic factor found
  bool fully_split = false;                 // remainder after peeling was 1
};
RootProfile root_profile(const UPoly& p);
bool classify_roots(const UPoly& p, RootMode mode);

// Sum_{i=0}^{X} i^e as a polynomial in X.
const UPoly& power_sum(int e);

// -------------------------------------------------------------- multivariate

using Exponent = std::vector<int>;

class MPoly {
 public:
  explicit MPoly(std::size_t arity = 0) : arity_(arity) {}
  static MPoly constant(std::size_t arity, const Rat& c);
  static MPoly variable(std::size_t arity, std::size_t index);

  std::size_t arity() const { return arity_; }
  const std::map<Exponent, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rat coeff(const Exponent& e) const;
  void add_term(const Exponent& e, const Rat& c);

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly scaled(const Rat& s) const;

  Rat eval(const std::vector<Rat>& point) const;
  int total_degree() const;  // -1 for the zero polynomial
  int degree_in(std::size_t var) const;

  bool operator==(const MPoly& o) const = default;
  // Canonical text: monomials by decreasing total degree, then by exponent
  // vector in decreasing lexicographic order. Variables are X1..Xl.
  std::string to_string() const;

 private:
  void check_arity(const MPoly& o) const;
  std::size_t arity_;
  std::map<Exponent, Rat> terms_;
};

using GridPoint = std::vector<long>;

// Unique interpolant of per-variable degree <= d through the values sampled on
// the full grid {x0..x0+d}^arity, where x0 is the smallest coordinate present.
MPoly interpolate_mpoly_on_grid(const std::map<GridPoint, Rat>& values, std::size_t arity,
                                int per_var_degree);

// (p (x) q)(X, Y) = sum_{i=0}^{X} p(i, Y) q(X - i, Y), variable 0 is X.
MPoly poly_cauchy(const MPoly& p, const MPoly& q);

}  // namespace zpoly
