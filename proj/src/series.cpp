#include "zpoly/series.hpp"

#include <random>

namespace zpoly {

void LinRep::validate() const {
  if (alphabet.size() == 0) throw InputError("representation over an empty alphabet");
  if (initial.size() != dim || final.size() != dim)
    throw InputError("initial/final vectors do not match the dimension");
  if (letters.size() != alphabet.size()) throw InputError("one matrix per letter is required");
  for (const auto& m : letters)
    if (m.rows() != dim || m.cols() != dim) throw InputError("letter matrix has the wrong shape");
}

LinRep zero_rep(const Alphabet& a) {
  LinRep r;
  r.alphabet = a;
  r.letters.assign(a.size(), QMatrix(0, 0));
  return r;
}

LinRep constant_rep(const Alphabet& a, const Rat& c) {
  LinRep r;
  r.alphabet = a;
  r.dim = 1;
  r.initial = {c};
  r.final = {Rat(1)};
  r.letters.assign(a.size(), QMatrix::identity(1));
  return r;
}

LinRep indicator(const Dfa& d) {
  LinRep r;
  r.alphabet = d.alphabet();
  r.dim = static_cast<std::size_t>(d.num_states());
  r.initial.assign(r.dim, 0);
  r.initial[static_cast<std::size_t>(d.initial())] = 1;
  r.final.assign(r.dim, 0);
  for (int q = 0; q < d.num_states(); ++q)
    if (d.accepting(q)) r.final[static_cast<std::size_t>(q)] = 1;
  for (std::size_t a = 0; a < d.alphabet().size(); ++a) {
    QMatrix m(r.dim, r.dim);
    for (int q = 0; q < d.num_states(); ++q)
      m(static_cast<std::size_t>(q), static_cast<std::size_t>(d.next(q, static_cast<Letter>(a)))) = 1;
    r.letters.push_back(std::move(m));
  }
  return r;
}

QVector forward(const LinRep& r, const Word& w) {
  QVector v = r.initial;
  for (Letter a : w) {
    if (a < 0 || static_cast<std::size_t>(a) >= r.letters.size())
      throw InputError("word uses a letter outside the representation's alphabet");
    v = row_times(v, r.letters[static_cast<std::size_t>(a)]);
  }
  return v;
}

Rat eval(const LinRep& r, const Word& w) { return dot(forward(r, w), r.final); }

namespace {

void same_alphabet(const LinRep& f, const LinRep& g) {
  if (!(f.alphabet == g.alphabet)) throw InputError("series over different alphabets");
}

// Copies `src` into `dst` at offset (r0, c0).
void place(QMatrix& dst, const QMatrix& src, std::size_t r0, std::size_t c0) {
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) dst(r0 + i, c0 + j) = src(i, j);
}

QMatrix outer(const QVector& col, const QVector& row) {
  QMatrix m(col.size(), row.size());
  for (std::size_t i = 0; i < col.size(); ++i)
    if (sgn(col[i]) != 0)
      for (std::size_t j = 0; j < row.size(); ++j) m(i, j) = col[i] * row[j];
  return m;
}

}  // namespace

LinRep combine(SeriesOp op, const LinRep& f, const LinRep* g, const Rat& delta) {
  if (op == SeriesOp::scalar) {
    LinRep out = f;
    for (auto& x : out.initial) x *= delta;
    return out;
  }
  if (!g) throw InputError("binary series operation needs two operands");
  same_alphabet(f, *g);
  const std::size_t n = f.dim, m = g->dim, k = f.alphabet.size();
  LinRep out;
  out.alphabet = f.alphabet;
  switch (op) {
    case SeriesOp::sum: {
      out.dim = n + m;
      out.initial = f.initial;
      out.initial.insert(out.initial.end(), g->initial.begin(), g->initial.end());
      out.final = f.final;
      out.final.insert(out.final.end(), g->final.begin(), g->final.end());
      for (std::size_t a = 0; a < k; ++a) {
        QMatrix mm(n + m, n + m);
        place(mm, f.letters[a], 0, 0);
        place(mm, g->letters[a], n, n);
        out.letters.push_back(std::move(mm));
      }
      return out;
    }
    case SeriesOp::cauchy: {
      // State after u: (I1 mu1(u), sum_{u = xy} f(x) I2 mu2(y)).
      out.dim = n + m;
      Rat f_eps = dot(f.initial, f.final);
      out.initial = f.initial;
      for (const auto& x : g->initial) out.initial.push_back(f_eps * x);
      out.final.assign(n, 0);
      out.final.insert(out.final.end(), g->final.begin(), g->final.end());
      for (std::size_t a = 0; a < k; ++a) {
        QMatrix mm(n + m, n + m);
        place(mm, f.letters[a], 0, 0);
        place(mm, outer(times_col(f.letters[a], f.final), g->initial), 0, n);
        place(mm, g->letters[a], n, n);
        out.letters.push_back(std::move(mm));
      }
      return out;
    }
    case SeriesOp::hadamard: {
      out.dim = n * m;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          out.initial.push_back(f.initial[i] * g->initial[j]);
          out.final.push_back(f.final[i] * g->final[j]);
        }
      for (std::size_t a = 0; a < k; ++a) {
        QMatrix mm(n * m, n * m);
        const QMatrix &x = f.letters[a], &y = g->letters[a];
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t i2 = 0; i2 < n; ++i2) {
            if (sgn(x(i, i2)) == 0) continue;
            for (std::size_t j = 0; j < m; ++j)
              for (std::size_t j2 = 0; j2 < m; ++j2)
                if (sgn(y(j, j2)) != 0) mm(i * m + j, i2 * m + j2) = x(i, i2) * y(j, j2);
          }
        out.letters.push_back(std::move(mm));
      }
      return out;
    }
    case SeriesOp::scalar: break;
  }
  throw InputError("unknown series operation");
}

LinRep sum(const LinRep& f, const LinRep& g) { return combine(SeriesOp::sum, f, &g); }
LinRep scalar(const Rat& delta, const LinRep& f) { return combine(SeriesOp::scalar, f, nullptr, delta); }
LinRep difference(const LinRep& f, const LinRep& g) { return sum(f, scalar(-1, g)); }
LinRep cauchy(const LinRep& f, const LinRep& g) { return combine(SeriesOp::cauchy, f, &g); }
LinRep hadamard(const LinRep& f, const LinRep& g) { return combine(SeriesOp::hadamard, f, &g); }

LinRep star(const LinRep& f) {
  if (sgn(dot(f.initial, f.final)) != 0)
    throw StarUndefined("Kleene star needs a series vanishing on the empty word");
  // Extra coordinate e marks "nothing read yet"; z accumulates
  // sum over u = xy, y non-empty, of f*(x) I mu(y). Then f*(u) = e + z F.
  const std::size_t n = f.dim;
  LinRep out;
  out.alphabet = f.alphabet;
  out.dim = n + 1;
  out.initial.assign(n + 1, 0);
  out.initial[n] = 1;
  out.final = f.final;
  out.final.push_back(1);
  QMatrix close = QMatrix::identity(n) + outer(f.final, f.initial);
  for (const auto& mu : f.letters) {
    QMatrix mm(n + 1, n + 1);
    place(mm, close * mu, 0, 0);
    QVector start = row_times(f.initial, mu);
    for (std::size_t j = 0; j < n; ++j) mm(n, j) = start[j];
    out.letters.push_back(std::move(mm));
  }
  return out;
}

// ------------------------------------------------------------- minimisation

SpanBasis reachable_basis(const LinRep& r) {
  SpanBasis b;
  b.side = SpanBasis::Side::rows;
  Echelon e(r.dim);
  if (!e.insert(r.initial)) return b;
  b.words.push_back({});
  b.vectors.push_back(r.initial);
  for (std::size_t i = 0; i < b.vectors.size(); ++i)
    for (std::size_t a = 0; a < r.letters.size(); ++a) {
      QVector v = row_times(b.vectors[i], r.letters[a]);
      if (!e.insert(v)) continue;
      Word w = b.words[i];
      w.push_back(static_cast<Letter>(a));
      b.words.push_back(std::move(w));
      b.vectors.push_back(std::move(v));
    }
  return b;
}

SpanBasis coreachable_basis(const LinRep& r) {
  SpanBasis b;
  b.side = SpanBasis::Side::columns;
  Echelon e(r.dim);
  if (!e.insert(r.final)) return b;
  b.words.push_back({});
  b.vectors.push_back(r.final);
  for (std::size_t i = 0; i < b.vectors.size(); ++i)
    for (std::size_t a = 0; a < r.letters.size(); ++a) {
      QVector v = times_col(r.letters[a], b.vectors[i]);
      if (!e.insert(v)) continue;
      Word w{static_cast<Letter>(a)};
      w.insert(w.end(), b.words[i].begin(), b.words[i].end());
      b.words.push_back(std::move(w));
      b.vectors.push_back(std::move(v));
    }
  return b;
}

namespace {

// Restriction of r to the span of the reachable rows, in that basis.
LinRep restrict_rows(const LinRep& r) {
  SpanBasis b = reachable_basis(r);
  const std::size_t k = b.vectors.size();
  LinRep out = zero_rep(r.alphabet);
  if (k == 0) return out;
  Echelon e(r.dim);
  for (const auto& v : b.vectors) e.insert(v);
  out.dim = k;
  out.initial.assign(k, 0);
  out.initial[0] = 1;
  out.final.clear();
  for (const auto& v : b.vectors) out.final.push_back(dot(v, r.final));
  out.letters.clear();
  for (const auto& mu : r.letters) {
    QMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      QVector c = e.coordinates(row_times(b.vectors[i], mu));
      for (std::size_t j = 0; j < k; ++j) m(i, j) = c[j];
    }
    out.letters.push_back(std::move(m));
  }
  return out;
}

LinRep restrict_columns(const LinRep& r) {
  SpanBasis b = coreachable_basis(r);
  const std::size_t k = b.vectors.size();
  LinRep out = zero_rep(r.alphabet);
  if (k == 0) return out;
  Echelon e(r.dim);
  for (const auto& v : b.vectors) e.insert(v);
  out.dim = k;
  out.final.assign(k, 0);
  out.final[0] = 1;
  out.initial.clear();
  for (const auto& v : b.vectors) out.initial.push_back(dot(r.initial, v));
  out.letters.clear();
  for (const auto& mu : r.letters) {
    QMatrix m(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      QVector c = e.coordinates(times_col(mu, b.vectors[j]));
      for (std::size_t i = 0; i < k; ++i) m(i, j) = c[i];
    }
    out.letters.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Minimized reduce_minimize(const LinRep& r) {
  r.validate();
  Minimized m;
  m.rep = restrict_columns(restrict_rows(r));
  m.rows = reachable_basis(m.rep);
  m.columns = coreachable_basis(m.rep);
  return m;
}

bool equivalent(const LinRep& f, const LinRep& g) {
  return reduce_minimize(difference(f, g)).rep.dim == 0;
}

std::optional<Word> distinguishing_word(const LinRep& f, const LinRep& g) {
  // Every I mu(u) of the difference lies in the span of the basis rows, so the
  // difference vanishes everywhere iff it vanishes on the basis words.
  LinRep d = difference(f, g);
  SpanBasis b = reachable_basis(d);
  for (std::size_t i = 0; i < b.words.size(); ++i)
    if (sgn(dot(b.vectors[i], d.final)) != 0) return b.words[i];
  return std::nullopt;
}

// ------------------------------------------------------------------ spectra

SpectrumReport spectrum_probe(const LinRep& r, RootMode mode, std::size_t word_len_bound,
                              std::size_t sample_count, std::uint64_t seed) {
  LinRep m = reduce_minimize(r).rep;
  SpectrumReport report;
  report.mode = mode;
  report.minimal_dim = m.dim;
  const std::size_t k = m.alphabet.size();
  auto check = [&](const Word& w, const QMatrix& mat) {
    ++report.words_checked;
    UPoly p = char_poly(mat);
    if (!classify_roots(p, mode)) report.violations.push_back({w, p});
  };
  std::size_t total = 0, layer = 1;
  for (std::size_t len = 0; len <= word_len_bound && total <= sample_count; ++len) {
    total += layer;
    layer *= k;
  }
  if (total <= sample_count) {
    // Exhaustive, reusing prefix products level by level.
    std::vector<std::pair<Word, QMatrix>> level{{Word{}, QMatrix::identity(m.dim)}};
    for (std::size_t len = 0; len <= word_len_bound; ++len) {
      std::vector<std::pair<Word, QMatrix>> next;
      for (auto& [w, mat] : level) {
        check(w, mat);
        if (len == word_len_bound) continue;
        for (std::size_t a = 0; a < k; ++a) {
          Word w2 = w;
          w2.push_back(static_cast<Letter>(a));
          next.emplace_back(std::move(w2), mat * m.letters[a]);
        }
      }
      level.swap(next);
    }
  } else {
    report.exhaustive = false;
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < sample_count; ++s) {
      std::size_t len = static_cast<std::size_t>(rng() % (word_len_bound + 1));
      Word w(len);
      QMatrix mat = QMatrix::identity(m.dim);
      for (auto& x : w) {
        x = static_cast<Letter>(rng() % k);
        mat = mat * m.letters[static_cast<std::size_t>(x)];
      }
      check(w, mat);
    }
  }
  report.pass = report.violations.empty();
  return report;
}

// --------------------------------------------------------------------- json

namespace {

nlohmann::json rat_json(const Rat& x) {
  if (is_integer(x) && x.get_num().fits_slong_p()) return x.get_num().get_si();
  return x.get_str();
}

Rat json_rat(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw InputError("representation entries must be integers or \"p/q\" strings");
}

}  // namespace

nlohmann::json linrep_to_json(const LinRep& r) {
  nlohmann::json j;
  j["alphabet"] = r.alphabet.letters();
  j["dim"] = r.dim;
  nlohmann::json init = nlohmann::json::array(), fin = nlohmann::json::array();
  for (const auto& x : r.initial) init.push_back(rat_json(x));
  for (const auto& x : r.final) fin.push_back(rat_json(x));
  j["initial"] = init;
  j["final"] = fin;
  nlohmann::json letters = nlohmann::json::object();
  for (std::size_t a = 0; a < r.letters.size(); ++a) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < r.dim; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t c = 0; c < r.dim; ++c) row.push_back(rat_json(r.letters[a](i, c)));
      rows.push_back(row);
    }
    letters[r.alphabet.symbol(static_cast<Letter>(a))] = rows;
  }
  j["letters"] = letters;
  return j;
}

LinRep linrep_from_json(const nlohmann::json& j) {
  try {
    LinRep r;
    r.alphabet = Alphabet(j.at("alphabet").get<std::vector<std::string>>());
    r.dim = j.at("dim").get<std::size_t>();
    for (const auto& x : j.at("initial")) r.initial.push_back(json_rat(x));
    for (const auto& x : j.at("final")) r.final.push_back(json_rat(x));
    for (const auto& sym : r.alphabet.letters()) {
      const auto& rows = j.at("letters").at(sym);
      if (rows.size() != r.dim) throw InputError("letter matrix for '" + sym + "' has wrong height");
      QMatrix m(r.dim, r.dim);
      for (std::size_t i = 0; i < r.dim; ++i) {
        if (rows[i].size() != r.dim) throw InputError("letter matrix for '" + sym + "' has wrong width");
        for (std::size_t c = 0; c < r.dim; ++c) m(i, c) = json_rat(rows[i][c]);
      }
      r.letters.push_back(std::move(m));
    }
    r.validate();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed representation JSON: ") + e.what());
  } catch (const MathError& e) {
    throw InputError(std::string("malformed representation entry: ") + e.what());
  }
}

}  // namespace zpoly
