#include "zpoly/analysis.hpp"

#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace zpoly {

// ------------------------------------------------------------- filtration

namespace {

QMatrix word_matrix(const LinRep& r, const Word& w) {
  QMatrix m = QMatrix::identity(r.dim);
  for (Letter a : w) m = m * r.letters.at(static_cast<std::size_t>(a));
  return m;
}

// Is the element s of a linear monoid periodic? If not, returns a nonzero
// matrix Z with x Z = 0 for every row vector x of any subspace on which s
// acts periodically.
std::optional<QMatrix> aperiodic_obstruction(const QMatrix& s) {
  const std::size_t k = s.rows();
  RootProfile rp = root_profile(char_poly(s));
  unsigned long period = 1;
  for (unsigned long o : rp.unity_orders) period = std::lcm(period, o);
  QMatrix m = s.power(period);
  QMatrix z = m.power(k) * (m - QMatrix::identity(k));
  if (z.is_zero()) return std::nullopt;
  return z;
}

// Largest subspace of Q^k (row vectors, given in coordinates) that is
// invariant under the generators and on which they generate a finite monoid.
// A finitely generated linear monoid is finite as soon as all its elements
// are periodic, so a breadth-first walk over the elements either closes up or
// meets a non-periodic element, whose obstruction cuts the subspace down.
std::vector<QVector> finite_invariant_part(const std::vector<QMatrix>& gens, std::size_t k, std::size_t cap) {
  std::vector<QVector> basis;
  for (std::size_t i = 0; i < k; ++i) {
    QVector e(k, 0);
    e[i] = 1;
    basis.push_back(e);
  }
  while (!basis.empty()) {
    const std::size_t d = basis.size();
    Echelon ech(k);
    for (const auto& b : basis) ech.insert(b);
    std::vector<QMatrix> restricted(gens.size(), QMatrix(d, d));
    for (std::size_t a = 0; a < gens.size(); ++a)
      for (std::size_t i = 0; i < d; ++i) {
        QVector c = ech.coordinates(row_times(basis[i], gens[a]));
        for (std::size_t j = 0; j < d; ++j) restricted[a](i, j) = c[j];
      }

    std::optional<QMatrix> obstruction;
    std::set<QMatrix> seen{QMatrix::identity(d)};
    std::deque<QMatrix> queue{QMatrix::identity(d)};
    while (!queue.empty() && !obstruction) {
      QMatrix s = queue.front();
      queue.pop_front();
      obstruction = aperiodic_obstruction(s);
      if (obstruction) break;
      for (const QMatrix& g : restricted) {
        QMatrix t = s * g;
        if (seen.insert(t).second) {
          if (seen.size() > cap) throw CapExceeded("quotient monoid exceeds the element cap");
          queue.push_back(std::move(t));
        }
      }
    }
    if (!obstruction) return basis;

    // Column space of Z closed under the generators acting on the left.
    Echelon closure(d);
    std::deque<QVector> pending;
    for (std::size_t c = 0; c < d; ++c) {
      QVector v = obstruction->col(c);
      if (closure.insert(v)) pending.push_back(v);
    }
    while (!pending.empty()) {
      QVector v = pending.front();
      pending.pop_front();
      for (const QMatrix& g : restricted) {
        QVector u = times_col(g, v);
        if (closure.insert(u)) pending.push_back(u);
      }
    }
    std::vector<QVector> keep = nullspace(closure.inserted_all(), d);
    if (keep.size() >= d) throw std::logic_error("growth filtration made no progress");
    std::vector<QVector> next;
    for (const QVector& y : keep) {
      QVector x(k, 0);
      for (std::size_t j = 0; j < d; ++j)
        if (sgn(y[j]) != 0) x = axpy(y[j], basis[j], x);
      next.push_back(std::move(x));
    }
    basis = std::move(next);
  }
  return basis;
}

}  // namespace

int GrowthFiltration::level_of(const QVector& x) const {
  if (is_zero(x)) return -1;
  for (std::size_t j = 0; j < layers.size(); ++j)
    if (layers[j].contains(x)) return static_cast<int>(j);
  throw std::logic_error("vector outside the last growth layer");
}

std::vector<std::size_t> GrowthFiltration::dims() const {
  std::vector<std::size_t> out;
  for (const auto& l : layers) out.push_back(l.dim());
  return out;
}

GrowthFiltration growth_filtration(const LinRep& r, std::size_t monoid_cap) {
  GrowthFiltration g;
  g.rep = reduce_minimize(r).rep;
  const std::size_t n = g.rep.dim;
  if (n == 0) return g;
  std::vector<QVector> lower;  // basis of the previous layer
  for (int j = 0;; ++j) {
    Echelon ech(n);
    for (const auto& w : lower) ech.insert(w);
    const std::size_t m = lower.size();
    std::vector<QVector> complement;
    for (std::size_t i = 0; i < n; ++i) {
      QVector e(n, 0);
      e[i] = 1;
      if (ech.insert(e)) complement.push_back(std::move(e));
    }
    const std::size_t q = complement.size();
    std::vector<QMatrix> quotient(g.rep.letters.size(), QMatrix(q, q));
    for (std::size_t a = 0; a < quotient.size(); ++a)
      for (std::size_t i = 0; i < q; ++i) {
        QVector c = ech.coordinates(row_times(complement[i], g.rep.letters[a]));
        for (std::size_t l = 0; l < q; ++l) quotient[a](i, l) = c[m + l];
      }
    std::vector<QVector> part = finite_invariant_part(quotient, q, monoid_cap);
    if (part.empty()) throw NotPolynomialGrowth("series grows faster than every polynomial");
    for (const QVector& y : part) {
      QVector x(n, 0);
      for (std::size_t l = 0; l < q; ++l)
        if (sgn(y[l]) != 0) x = axpy(y[l], complement[l], x);
      lower.push_back(std::move(x));
    }
    Echelon layer(n);
    for (const auto& w : lower) layer.insert(w);
    const bool done = layer.contains(g.rep.initial);
    g.layers.push_back(std::move(layer));
    if (done) {
      g.degree = j;
      return g;
    }
  }
}

// ---------------------------------------------------------------- patterns

PumpingPattern normalize_pattern(const ProductMonoid& pm, const PumpingPattern& p) {
  PumpingPattern out = p;
  const unsigned omega = std::max(1u, pm.aperiodicity.omega);
  for (auto& w : out.pumps) {
    if (w.empty()) throw std::invalid_argument("pump words must be non-empty");
    Word base = w;
    for (unsigned i = 1; i < omega; ++i) w.insert(w.end(), base.begin(), base.end());
  }
  return out;
}

PumpingPattern normalize_pattern(const Cplc& f, const PumpingPattern& p) {
  return normalize_pattern(product_monoid(f), p);
}

namespace {

// Evaluates the representation along a pattern without building the word.
class PatternEvaluator {
 public:
  PatternEvaluator(const LinRep& rep, const PumpingPattern& p) : rep_(rep) {
    if (p.connectors.size() != p.pumps.size() + 1) throw std::invalid_argument("malformed pumping pattern");
    start_ = row_times(rep.initial, word_matrix(rep, p.connectors[0]));
    for (std::size_t i = 0; i < p.pumps.size(); ++i) {
      pumps_.push_back(word_matrix(rep, p.pumps[i]));
      after_.push_back(word_matrix(rep, p.connectors[i + 1]));
    }
  }
  Rat at(const GridPoint& x, long step) const {
    QVector v = start_;
    for (std::size_t i = 0; i < pumps_.size(); ++i) {
      for (long r = 0; r < x[i] * step; ++r) v = row_times(v, pumps_[i]);
      v = row_times(v, after_[i]);
    }
    return dot(v, rep_.final);
  }

 private:
  const LinRep& rep_;
  QVector start_;
  std::vector<QMatrix> pumps_, after_;
};

void for_each_grid_point(std::size_t arity, long lo, long hi, const std::function<void(const GridPoint&)>& fn) {
  GridPoint x(arity, lo);
  while (true) {
    fn(x);
    std::size_t i = 0;
    while (i < arity && x[i] == hi) x[i++] = lo;
    if (i == arity) return;
    ++x[i];
  }
}

}  // namespace

PatternPolynomial pattern_polynomial(const LinRep& rep, int level, const PumpingPattern& p, long step,
                                     long first_threshold) {
  const long k = std::max(level, 0);
  const std::size_t arity = p.size();
  PatternEvaluator ev(rep, p);
  long x0 = first_threshold > 0 ? first_threshold : 2 * (k + 1);
  for (int attempt = 0; attempt < 2; ++attempt, x0 *= 2) {
    PatternPolynomial out{p, x0, MPoly(arity), false};
    if (arity == 0) {
      out.poly = MPoly::constant(0, ev.at({}, step));
      out.verified = true;
      return out;
    }
    std::map<GridPoint, Rat> values;
    for_each_grid_point(arity, x0, x0 + k, [&](const GridPoint& x) { values[x] = ev.at(x, step); });
    out.poly = interpolate_mpoly_on_grid(values, arity, static_cast<int>(k));
    bool ok = true;
    for_each_grid_point(arity, x0 + k + 1, x0 + 2 * k + 1, [&](const GridPoint& x) {
      if (!ok) return;
      std::vector<Rat> pt(x.begin(), x.end());
      ok = out.poly.eval(pt) == ev.at(x, step);
    });
    if (ok) {
      out.verified = true;
      return out;
    }
  }
  throw VerificationFailed("pattern values are not polynomial from the threshold on");
}

PatternPolynomial pattern_polynomial(const Cplc& f, const PumpingPattern& p) {
  return pattern_polynomial(to_linrep(f), f.declared_level(), p);
}

// ------------------------------------------------------------------ search

namespace {

struct SearchContext {
  LinRep rep;
  int level;
  ProductMonoid pm;
};

// Calls fn on every word of the given length in lexicographic order until fn
// returns false.
bool for_each_word(std::size_t letters, std::size_t len, const std::function<bool(const Word&)>& fn) {
  Word w(len, 0);
  while (true) {
    if (!fn(w)) return false;
    std::size_t i = len;
    while (i > 0 && static_cast<std::size_t>(w[i - 1]) + 1 == letters) w[--i] = 0;
    if (i == 0) return true;
    ++w[i - 1];
  }
}

PumpSearch run_pump_search(const SearchContext& ctx, std::size_t size, int target, const SearchBudget& b) {
  PumpSearch res;
  std::set<PumpingPattern> seen;
  bool stop = false;
  auto consider = [&](const PumpingPattern& raw) {
    if (stop) return;
    PumpingPattern p = normalize_pattern(ctx.pm, raw);
    if (!seen.insert(p).second) return;
    if (res.explored >= b.max_patterns) {
      res.budget_exhausted = true;
      stop = true;
      return;
    }
    ++res.explored;
    PatternPolynomial pp;
    try {
      pp = pattern_polynomial(ctx.rep, ctx.level, p);
    } catch (const VerificationFailed&) {
      return;
    }
    const int deg = pp.poly.total_degree();
    if (!res.best || deg > res.best->poly.total_degree()) res.best = pp;
    if (deg >= target) {
      res.reached = true;
      stop = true;
    }
  };

  // Exhaustive part. Slots alternate connector, pump, ..., connector.
  const std::size_t letters = ctx.rep.alphabet.size();
  const std::size_t slots = 2 * size + 1;
  const std::size_t max_total = size * b.pump_len + (size + 1) * b.connector_len;
  std::vector<std::size_t> lens(slots);
  std::function<void(std::size_t, std::size_t)> lengths = [&](std::size_t slot, std::size_t left) {
    if (stop) return;
    if (slot == slots) {
      if (left != 0) return;
      PumpingPattern p;
      p.connectors.resize(size + 1);
      p.pumps.resize(size);
      std::function<void(std::size_t)> fill = [&](std::size_t s) {
        if (stop) return;
        if (s == slots) {
          consider(p);
          return;
        }
        Word& target_word = s % 2 == 0 ? p.connectors[s / 2] : p.pumps[s / 2];
        for_each_word(letters, lens[s], [&](const Word& w) {
          target_word = w;
          fill(s + 1);
          return !stop;
        });
      };
      fill(0);
      return;
    }
    const bool pump = slot % 2 == 1;
    const std::size_t lo = pump ? 1 : 0, hi = pump ? b.pump_len : b.connector_len;
    for (std::size_t l = lo; l <= hi && l <= left; ++l) {
      lens[slot] = l;
      lengths(slot + 1, left - l);
    }
  };
  if (letters > 0)
    for (std::size_t total = size; total <= max_total && !stop; ++total) lengths(0, total);

  // Forest part on seeded random sample words.
  if (!stop && letters > 0 && b.samples > 0) {
    std::mt19937_64 rng(b.seed);
    std::vector<Word> samples(b.samples);
    for (auto& w : samples) {
      w.resize(b.sample_len);
      for (auto& a : w) a = static_cast<Letter>(rng() % letters);
    }
    PatternExtraction opts;
    opts.seed = b.seed;
    for (const auto& p : extract_patterns(ctx.pm, samples, size, opts)) consider(p);
  }
  return res;
}

SearchContext make_context(const Cplc& f) {
  return SearchContext{to_linrep(f), f.declared_level(), product_monoid(f)};
}

}  // namespace

PumpSearch pump_search(const Cplc& f, std::size_t size, int target, const SearchBudget& budget) {
  if (size == 0) throw std::invalid_argument("pump search needs at least one pump");
  return run_pump_search(make_context(f), size, target, budget);
}

GrowthVerdict growth_degree(const Cplc& f, const SearchBudget& budget, GrowthMode mode) {
  GrowthVerdict v;
  v.mode = mode;
  SearchContext ctx = make_context(f);
  GrowthFiltration filt = growth_filtration(ctx.rep);
  v.degree = filt.degree;
  v.filtration = filt.dims();
  if (v.degree > f.declared_level())
    throw std::logic_error("growth degree exceeds the declared level; the compiled form is inconsistent");
  if (v.degree < 1) return v;

  SearchBudget b = budget;
  if (mode == GrowthMode::certified) {
    b.pump_len += 2;
    b.connector_len += 1;
    b.max_patterns *= 10;
  }
  for (std::size_t size = 1; size <= static_cast<std::size_t>(v.degree); ++size) {
    PumpSearch s = run_pump_search(ctx, size, v.degree, b);
    v.patterns_explored += s.explored;
    if (s.reached) {
      v.witness = s.best;
      break;
    }
  }
  v.budget_exhausted = !v.witness && mode == GrowthMode::budgeted;
  return v;
}

bool equiv_mod_k(const Cplc& f, const Cplc& g, int k) {
  if (!(f.alphabet() == g.alphabet())) throw InputError("functions over different alphabets");
  if (k < -1) throw std::invalid_argument("growth level below -1");
  LinRep d = to_linrep(f - g);
  if (k == -1) return d.dim == 0;
  return growth_filtration(d).degree <= k;
}

std::vector<UltimateReport> ultimate_poly_check(const Cplc& f, const std::vector<PumpingPattern>& patterns,
                                                long step) {
  if (step < 1) throw std::invalid_argument("step must be positive");
  SearchContext ctx = make_context(f);
  // Start past the index of every monoid element, where the pumped images
  // have become periodic.
  const long start = std::max<long>(2 * (std::max(ctx.level, 0) + 1), ctx.pm.aperiodicity.omega);
  std::vector<UltimateReport> out;
  for (const auto& p : patterns) {
    UltimateReport r{p, false, std::nullopt};
    try {
      r.poly = pattern_polynomial(ctx.rep, ctx.level, p, step, start).poly;
      r.polynomial = true;
    } catch (const VerificationFailed&) {
    }
    out.push_back(std::move(r));
  }
  return out;
}

// -------------------------------------------------------------------- json

nlohmann::json pattern_to_json(const PumpingPattern& p, const Alphabet& a) {
  nlohmann::json c = nlohmann::json::array(), w = nlohmann::json::array();
  for (const auto& x : p.connectors) c.push_back(a.show_word(x));
  for (const auto& x : p.pumps) w.push_back(a.show_word(x));
  return {{"connectors", c}, {"pumps", w}};
}

PumpingPattern pattern_from_json(const nlohmann::json& j, const Alphabet& a) {
  try {
    PumpingPattern p;
    for (const auto& x : j.at("connectors")) p.connectors.push_back(a.parse_word(x.get<std::string>()));
    for (const auto& x : j.at("pumps")) p.pumps.push_back(a.parse_word(x.get<std::string>()));
    if (p.connectors.size() != p.pumps.size() + 1) throw InputError("pattern needs one more connector than pumps");
    for (const auto& w : p.pumps)
      if (w.empty()) throw InputError("pump words must be non-empty");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed pattern JSON: ") + e.what());
  }
}

nlohmann::json verdict_to_json(const GrowthVerdict& v, const Alphabet& a) {
  nlohmann::json j;
  j["degree"] = v.degree;
  j["mode"] = v.mode == GrowthMode::budgeted ? "budgeted" : "certified";
  j["budget_exhausted"] = v.budget_exhausted;
  j["filtration"] = v.filtration;
  j["patterns_explored"] = v.patterns_explored;
  if (v.witness) {
    j["witness"] = {{"pattern", pattern_to_json(v.witness->pattern, a)},
                    {"polynomial", v.witness->poly.to_string()},
                    {"threshold", v.witness->threshold}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace zpoly
