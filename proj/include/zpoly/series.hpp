#pragma once
// Rational series given by exact linear representations f(w) = I mu(w) F.

#include <cstdint>
#include <optional>

#include "zpoly/core_lang.hpp"
#include "zpoly/exactmath.hpp"

namespace zpoly {

class StarUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LinRep {
  Alphabet alphabet;
  std::size_t dim = 0;
  QVector initial;               // row vector
  std::vector<QMatrix> letters;  // one dim x dim matrix per letter
  QVector final;                 // column vector

  void validate() const;  // throws InputError on inconsistent dimensions
};

LinRep zero_rep(const Alphabet& a);
LinRep constant_rep(const Alphabet& a, const Rat& c);
LinRep indicator(const Dfa& d);

QVector forward(const LinRep& r, const Word& w);  // I mu(w)
Rat eval(const LinRep& r, const Word& w);

enum class SeriesOp { sum, scalar, cauchy, hadamard };
// `g` is required for the binary operations; `delta` is used by scalar only.
LinRep combine(SeriesOp op, const LinRep& f, const LinRep* g = nullptr, const Rat& delta = 1);
LinRep sum(const LinRep& f, const LinRep& g);
LinRep scalar(const Rat& delta, const LinRep& f);
LinRep difference(const LinRep& f, const LinRep& g);
LinRep cauchy(const LinRep& f, const LinRep& g);
LinRep hadamard(const LinRep& f, const LinRep& g);
LinRep star(const LinRep& f);  // needs f(ε) = 0

// Word-indexed basis of the reachable rows {I mu(u)} or the co-reachable
// columns {mu(u) F}; words appear in the order the search found them.
struct SpanBasis {
  enum class Side { rows, columns };
  Side side = Side::rows;
  std::vector<Word> words;
  std::vector<QVector> vectors;
};

SpanBasis reachable_basis(const LinRep& r);
SpanBasis coreachable_basis(const LinRep& r);

struct Minimized {
  LinRep rep;
  SpanBasis rows;
  SpanBasis columns;
};
Minimized reduce_minimize(const LinRep& r);

bool equivalent(const LinRep& f, const LinRep& g);
// Shortest-first word where f and g differ, or nothing when they are equal.
std::optional<Word> distinguishing_word(const LinRep& f, const LinRep& g);

struct SpectrumViolation {
  Word word;
  UPoly char_poly;
};

struct SpectrumReport {
  RootMode mode = RootMode::zero_union_unity;
  bool pass = true;
  bool exhaustive = true;
  std::size_t words_checked = 0;
  std::size_t minimal_dim = 0;
  std::vector<SpectrumViolation> violations;
};

// Sampled evidence about the spectra of mu(w) on the minimised input:
// exhaustive over words up to the length bound when that set has at most
// `sample_count` words, otherwise `sample_count` seeded random words.
SpectrumReport spectrum_probe(const LinRep& r, RootMode mode, std::size_t word_len_bound = 4,
                              std::size_t sample_count = 4096, std::uint64_t seed = 0);

nlohmann::json linrep_to_json(const LinRep& r);
LinRep linrep_from_json(const nlohmann::json& j);

}  // namespace zpoly
