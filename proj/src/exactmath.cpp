#include "zpoly/exactmath.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace zpoly {

std::string rat_to_string(const Rat& r) { return r.get_str(); }

Rat parse_rat(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw MathError("empty rational literal");
  auto slash = s.find('/');
  auto parse_int = [&](const std::string& part) {
    std::size_t start = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (start == part.size()) throw MathError("malformed rational literal '" + s + "'");
    for (std::size_t i = start; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i])))
        throw MathError("malformed rational literal '" + s + "'");
    return BigInt(part[0] == '+' ? part.substr(1) : part, 10);
  };
  if (slash == std::string::npos) return Rat(parse_int(s));
  BigInt num = parse_int(s.substr(0, slash));
  BigInt den = parse_int(s.substr(slash + 1));
  if (den == 0) throw MathError("zero denominator in '" + s + "'");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

bool is_integer(const Rat& r) { return r.get_den() == 1; }

// ------------------------------------------------------------------ matrices

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QVector QMatrix::row(std::size_t r) const {
  return QVector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

QVector QMatrix::col(std::size_t c) const {
  QVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols_ != o.rows_) throw MathError("matrix product: dimension mismatch");
  QMatrix out(rows_, o.cols_);
  Rat tmp;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rat& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const Rat& b = o(k, j);
        if (sgn(b) == 0) continue;
        tmp = a * b;
        out(i, j) += tmp;
      }
    }
  return out;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw MathError("matrix sum: dimension mismatch");
  QMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
  return out;
}

QMatrix QMatrix::operator-(const QMatrix& o) const { return *this + o.scaled(-1); }

QMatrix QMatrix::scaled(const Rat& s) const {
  QMatrix out = *this;
  for (auto& x : out.data_) x *= s;
  return out;
}

QMatrix QMatrix::transposed() const {
  QMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

QMatrix QMatrix::power(unsigned long e) const {
  if (!square()) throw MathError("matrix power of a non-square matrix");
  QMatrix result = identity(rows_);
  QMatrix base = *this;
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rat& x) { return sgn(x) == 0; });
}

bool QMatrix::operator<(const QMatrix& o) const {
  if (rows_ != o.rows_) return rows_ < o.rows_;
  if (cols_ != o.cols_) return cols_ < o.cols_;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    int c = cmp(data_[i], o.data_[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

Rat QMatrix::trace() const {
  Rat t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

std::string QMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

QVector row_times(const QVector& v, const QMatrix& m) {
  if (v.size() != m.rows()) throw MathError("vector-matrix product: dimension mismatch");
  QVector out(m.cols());
  Rat tmp;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (sgn(v[k]) == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rat& b = m(k, j);
      if (sgn(b) == 0) continue;
      tmp = v[k] * b;
      out[j] += tmp;
    }
  }
  return out;
}

QVector times_col(const QMatrix& m, const QVector& v) {
  if (v.size() != m.cols()) throw MathError("matrix-vector product: dimension mismatch");
  QVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < v.size(); ++k)
      if (sgn(v[k]) != 0 && sgn(m(i, k)) != 0) out[i] += m(i, k) * v[k];
  return out;
}

Rat dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw MathError("dot product: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return sgn(x) == 0; });
}

QVector axpy(const Rat& a, const QVector& x, const QVector& y) {
  QVector out = y;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (sgn(x[i]) != 0) out[i] += a * x[i];
  return out;
}

// ------------------------------------------------------------------- echelon

QVector Echelon::remainder(QVector v) const {
  if (v.size() != n_) throw MathError("echelon: dimension mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Rat c = v[pivots_[i]];
    if (sgn(c) != 0) v = axpy(-c, rows_[i], v);
  }
  return v;
}

bool Echelon::contains(const QVector& v) const { return is_zero(remainder(v)); }

bool Echelon::insert(const QVector& v) {
  if (v.size() != n_) throw MathError("echelon: dimension mismatch");
  std::size_t idx = inserted_.size();
  QVector r = v;
  QVector combo(idx + 1);
  combo[idx] = 1;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Rat c = r[pivots_[i]];
    if (sgn(c) == 0) continue;
    r = axpy(-c, rows_[i], r);
    for (std::size_t j = 0; j < combos_[i].size(); ++j) combo[j] -= c * combos_[i][j];
  }
  auto it = std::find_if(r.begin(), r.end(), [](const Rat& x) { return sgn(x) != 0; });
  if (it == r.end()) return false;
  std::size_t p = static_cast<std::size_t>(it - r.begin());
  Rat inv = 1 / r[p];
  for (auto& x : r) x *= inv;
  for (auto& x : combo) x *= inv;
  inserted_.push_back(v);
  rows_.push_back(std::move(r));
  pivots_.push_back(p);
  combos_.push_back(std::move(combo));
  return true;
}

QVector Echelon::coordinates(const QVector& v) const {
  QVector r = v;
  QVector coords(inserted_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Rat c = r[pivots_[i]];
    if (sgn(c) == 0) continue;
    r = axpy(-c, rows_[i], r);
    for (std::size_t j = 0; j < combos_[i].size(); ++j) coords[j] += c * combos_[i][j];
  }
  if (!is_zero(r)) throw MathError("echelon: vector outside the span");
  return coords;
}

std::size_t rank(const std::vector<QVector>& rows, std::size_t ambient) {
  Echelon e(ambient);
  for (const auto& r : rows) e.insert(r);
  return e.dim();
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(std::vector<QVector>& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t sel = r;
    while (sel < m.size() && sgn(m[sel][c]) == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[r], m[sel]);
    Rat inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      Rat f = m[i][c];
      m[i] = axpy(-f, m[r], m[i]);
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

}  // namespace

std::vector<QVector> nullspace(const std::vector<QVector>& rows, std::size_t ambient) {
  std::vector<QVector> m = rows;
  auto pivots = rref(m, ambient);
  std::vector<bool> is_pivot(ambient, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < ambient; ++f) {
    if (is_pivot[f]) continue;
    QVector v(ambient);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
  if (!m.square()) throw MathError("inverse of a non-square matrix");
  std::size_t n = m.rows();
  std::vector<QVector> aug(n, QVector(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m(i, j);
    aug[i][n + i] = 1;
  }
  auto pivots = rref(aug, n);
  if (pivots.size() < n) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug[i][n + j];
  return inv;
}

// ---------------------------------------------------------------- univariate

UPoly::UPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::monomial(const Rat& c, int degree) {
  std::vector<Rat> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return UPoly(std::move(v));
}

UPoly UPoly::x_minus(const Rat& root) { return UPoly({-root, Rat(1)}); }

void UPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Rat UPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<std::size_t>(i)];
}

Rat UPoly::leading() const { return c_.empty() ? Rat(0) : c_.back(); }

bool UPoly::is_monic() const { return !c_.empty() && c_.back() == 1; }

UPoly UPoly::operator+(const UPoly& o) const {
  std::vector<Rat> v(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return UPoly(std::move(v));
}

UPoly UPoly::operator-(const UPoly& o) const { return *this + o.scaled(-1); }

UPoly UPoly::operator*(const UPoly& o) const {
  if (is_zero() || o.is_zero()) return UPoly();
  std::vector<Rat> v(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  return UPoly(std::move(v));
}

UPoly UPoly::scaled(const Rat& s) const {
  std::vector<Rat> v = c_;
  for (auto& x : v) x *= s;
  return UPoly(std::move(v));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& d) const {
  if (d.is_zero()) throw MathError("polynomial division by zero");
  std::vector<Rat> rem = c_;
  int dd = d.degree();
  if (degree() < dd) return {UPoly(), *this};
  std::vector<Rat> quot(static_cast<std::size_t>(degree() - dd) + 1);
  Rat lead_inv = 1 / d.leading();
  for (int i = degree(); i >= dd; --i) {
    Rat q = rem[static_cast<std::size_t>(i)] * lead_inv;
    if (sgn(q) == 0) continue;
    quot[static_cast<std::size_t>(i - dd)] = q;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(i - dd + j)] -= q * d.c_[static_cast<std::size_t>(j)];
  }
  return {UPoly(std::move(quot)), UPoly(std::move(rem))};
}

Rat UPoly::eval(const Rat& x) const {
  Rat acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

QMatrix UPoly::eval(const QMatrix& m) const {
  if (!m.square()) throw MathError("polynomial evaluated at a non-square matrix");
  QMatrix acc(m.rows(), m.cols());
  QMatrix id = QMatrix::identity(m.rows());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * m + id.scaled(*it);
  return acc;
}

std::string UPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    Rat c = c_[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    Rat a = abs(c);
    if (i == 0) {
      os << a.get_str();
      continue;
    }
    if (a != 1) os << a.get_str() << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

UPoly char_poly(const QMatrix& m) {
  if (!m.square()) throw MathError("characteristic polynomial of a non-square matrix");
  // Faddeev-LeVerrier: exact over Q because every division is by an integer.
  std::size_t n = m.rows();
  std::vector<Rat> c(n + 1);
  c[n] = 1;
  QMatrix mk(n, n);
  QMatrix id = QMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + id.scaled(c[n - k + 1]);
    Rat t = (m * mk).trace();
    c[n - k] = -t / Rat(static_cast<long>(k));
  }
  return UPoly(std::move(c));
}

unsigned long euler_phi(unsigned long n) {
  unsigned long result = n;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

const UPoly& cyclotomic(unsigned long n) {
  static std::map<unsigned long, UPoly> cache;
  if (n == 0) throw MathError("cyclotomic polynomial of order 0");
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  UPoly p = UPoly::monomial(1, static_cast<int>(n)) - UPoly({Rat(1)});
  for (unsigned long d = 1; d < n; ++d)
    if (n % d == 0) p = p.divmod(cyclotomic(d)).first;
  return cache.emplace(n, p).first->second;
}

RootProfile root_profile(const UPoly& p) {
  if (!p.is_monic()) throw MathError("root classification needs a monic polynomial");
  RootProfile prof;
  std::vector<Rat> c = p.coeffs();
  std::size_t z = 0;
  while (z < c.size() && sgn(c[z]) == 0) ++z;
  prof.zero_multiplicity = static_cast<int>(z);
  UPoly rest(std::vector<Rat>(c.begin() + static_cast<long>(z), c.end()));
  // phi(N) >= sqrt(N/2), so orders beyond 2*deg^2 cannot divide.
  unsigned long bound = 2UL * static_cast<unsigned long>(rest.degree()) * rest.degree() + 2;
  for (unsigned long n = 1; n <= bound && rest.degree() > 0; ++n) {
    if (euler_phi(n) > static_cast<unsigned long>(rest.degree())) continue;
    const UPoly& phi = cyclotomic(n);
    while (rest.degree() >= phi.degree()) {
      auto [q, r] = rest.divmod(phi);
      if (!r.is_zero()) break;
      rest = q;
      prof.unity_orders.push_back(n);
    }
  }
  prof.fully_split = rest.degree() == 0 && rest.leading() == 1;
  return prof;
}

bool classify_roots(const UPoly& p, RootMode mode) {
  RootProfile prof = root_profile(p);
  if (!prof.fully_split) return false;
  if (mode == RootMode::zero_union_unity) return true;
  return std::all_of(prof.unity_orders.begin(), prof.unity_orders.end(),
                     [](unsigned long n) { return n == 1; });
}

namespace {

// Lagrange basis polynomials for the nodes x0, x0+1, ..., x0+d.
std::vector<UPoly> lagrange_basis(long x0, int d) {
  std::vector<UPoly> basis;
  for (int j = 0; j <= d; ++j) {
    UPoly l({Rat(1)});
    for (int m = 0; m <= d; ++m) {
      if (m == j) continue;
      l = l * UPoly::x_minus(Rat(x0 + m)).scaled(Rat(1, 1) / Rat(j - m));
    }
    basis.push_back(l);
  }
  return basis;
}

}  // namespace

const UPoly& power_sum(int e) {
  static std::map<int, UPoly> cache;
  auto it = cache.find(e);
  if (it != cache.end()) return it->second;
  // Degree e+1 polynomial determined by its values at X = 0..e+1.
  auto basis = lagrange_basis(0, e + 1);
  UPoly result;
  BigInt acc = 0;
  for (int x = 0; x <= e + 1; ++x) {
    BigInt term;
    mpz_pow_ui(term.get_mpz_t(), BigInt(x).get_mpz_t(), static_cast<unsigned long>(e));
    if (e == 0) term = 1;
    acc += term;
    result = result + basis[static_cast<std::size_t>(x)].scaled(Rat(acc));
  }
  return cache.emplace(e, result).first->second;
}

// ------------------------------------------------------------------ mpoly

MPoly MPoly::constant(std::size_t arity, const Rat& c) {
  MPoly p(arity);
  p.add_term(Exponent(arity, 0), c);
  return p;
}

MPoly MPoly::variable(std::size_t arity, std::size_t index) {
  if (index >= arity) throw MathError("variable index out of range");
  MPoly p(arity);
  Exponent e(arity, 0);
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

Rat MPoly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

void MPoly::add_term(const Exponent& e, const Rat& c) {
  if (e.size() != arity_) throw MathError("monomial arity mismatch");
  if (sgn(c) == 0) return;
  Rat cc = c;
  cc.canonicalize();
  auto [it, fresh] = terms_.emplace(e, cc);
  if (!fresh) {
    it->second += cc;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void MPoly::check_arity(const MPoly& o) const {
  if (arity_ != o.arity_) throw MathError("polynomial arity mismatch");
}

MPoly MPoly::operator+(const MPoly& o) const {
  check_arity(o);
  MPoly out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

MPoly MPoly::operator-(const MPoly& o) const { return *this + o.scaled(-1); }

MPoly MPoly::operator*(const MPoly& o) const {
  check_arity(o);
  MPoly out(arity_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e(arity_);
      for (std::size_t i = 0; i < arity_; ++i) e[i] = e1[i] + e2[i];
      out.add_term(e, c1 * c2);
    }
  return out;
}

MPoly MPoly::scaled(const Rat& s) const {
  MPoly out(arity_);
  if (sgn(s) == 0) return out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * s);
  return out;
}

Rat MPoly::eval(const std::vector<Rat>& point) const {
  if (point.size() != arity_) throw MathError("evaluation point arity mismatch");
  Rat total = 0;
  for (const auto& [e, c] : terms_) {
    Rat m = c;
    for (std::size_t i = 0; i < arity_; ++i)
      for (int k = 0; k < e[i]; ++k) m *= point[i];
    total += m;
  }
  return total;
}

int MPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

int MPoly::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
  return d;
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exponent, Rat>> items(terms_.begin(), terms_.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    int da = std::accumulate(a.first.begin(), a.first.end(), 0);
    int db = std::accumulate(b.first.begin(), b.first.end(), 0);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : items) {
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    Rat a = abs(c);
    bool constant = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    if (constant) {
      os << a.get_str();
      continue;
    }
    bool need_star = false;
    if (a != 1) {
      os << a.get_str();
      need_star = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << "*";
      os << "X" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
      need_star = true;
    }
  }
  return os.str();
}

MPoly interpolate_mpoly_on_grid(const std::map<GridPoint, Rat>& values, std::size_t arity,
                                int per_var_degree) {
  if (per_var_degree < 0) throw MathError("interpolation degree must be non-negative");
  if (values.empty()) throw MathError("interpolation: incomplete grid (no values)");
  long x0 = 0;
  bool seen = false;
  for (const auto& [pt, v] : values) {
    if (pt.size() != arity) throw MathError("interpolation: point arity mismatch");
    for (long c : pt) {
      x0 = seen ? std::min(x0, c) : c;
      seen = true;
    }
  }
  std::size_t side = static_cast<std::size_t>(per_var_degree) + 1;
  std::size_t count = 1;
  for (std::size_t i = 0; i < arity; ++i) count *= side;
  auto basis = lagrange_basis(x0, per_var_degree);
  MPoly result(arity);
  GridPoint pt(arity);
  std::vector<std::size_t> idx(arity, 0);
  for (std::size_t n = 0; n < count; ++n) {
    std::size_t rem = n;
    for (std::size_t i = 0; i < arity; ++i) {
      idx[i] = rem % side;
      rem /= side;
      pt[i] = x0 + static_cast<long>(idx[i]);
    }
    auto it = values.find(pt);
    if (it == values.end()) throw MathError("interpolation: incomplete grid");
    if (sgn(it->second) == 0) continue;
    // Expand prod_i L_{idx_i}(X_i) times the sampled value.
    MPoly term = MPoly::constant(arity, it->second);
    for (std::size_t i = 0; i < arity; ++i) {
      MPoly factor(arity);
      const auto& co = basis[idx[i]].coeffs();
      for (std::size_t d = 0; d < co.size(); ++d) {
        Exponent e(arity, 0);
        e[i] = static_cast<int>(d);
        factor.add_term(e, co[d]);
      }
      term = term * factor;
    }
    result = result + term;
  }
  return result;
}

MPoly poly_cauchy(const MPoly& p, const MPoly& q) {
  if (p.arity() != q.arity()) throw MathError("poly_cauchy: arity mismatch");
  if (p.arity() == 0) throw MathError("poly_cauchy: needs the Cauchy variable X");
  std::size_t n = p.arity();
  MPoly out(n);
  for (const auto& [ep, cp] : p.terms())
    for (const auto& [eq, cq] : q.terms()) {
      int a = ep[0];
      int b = eq[0];
      // p contributes i^a, q contributes (X - i)^b = sum_t C(b,t) X^t (-i)^(b-t).
      for (int t = 0; t <= b; ++t) {
        BigInt binom;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(t));
        Rat coeff = cp * cq * Rat(binom);
        if ((b - t) % 2) coeff = -coeff;
        const UPoly& s = power_sum(a + b - t);
        for (int d = 0; d <= s.degree(); ++d) {
          Exponent e(n);
          e[0] = t + d;
          for (std::size_t i = 1; i < n; ++i) e[i] = ep[i] + eq[i];
          out.add_term(e, coeff * s.coeff(d));
        }
      }
    }
  return out;
}

}  // namespace zpoly
