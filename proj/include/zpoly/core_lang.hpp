#pragma once
// Regular-language substrate: alphabets, words, regexes, complete DFAs kept in
// a canonical form, finite monoids and the checks built on them.

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace zpoly {

using Letter = int;
using Word = std::vector<Letter>;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered finite set of letter symbols. Copies share storage.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> letters);

  std::size_t size() const { return letters_ ? letters_->size() : 0; }
  const std::vector<std::string>& letters() const;
  const std::string& symbol(Letter a) const { return letters().at(static_cast<std::size_t>(a)); }
  std::optional<Letter> find(std::string_view sym) const;
  Letter index(std::string_view sym) const;

  // Longest-match split of `text` into symbols; "" and "ε" denote the empty word.
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;  // plain concatenation
  std::string show_word(const Word& w) const;    // like format_word but ε for empty

  bool operator==(const Alphabet& o) const;

 private:
  std::shared_ptr<const std::vector<std::string>> letters_;
};

// Splits UTF-8 text into code points.
std::vector<std::string> utf8_codepoints(std::string_view text);

// All words of length <= max_len in shortlex order.
std::vector<Word> words_up_to(std::size_t alphabet_size, std::size_t max_len);
bool shortlex_less(const Word& a, const Word& b);

// Complete deterministic automaton. Transitions are stored row-major by state.
class Dfa {
 public:
  Dfa() = default;
  Dfa(Alphabet alphabet, int states, int initial, std::vector<int> delta,
      std::vector<bool> accepting);

  const Alphabet& alphabet() const { return alphabet_; }
  int num_states() const { return states_; }
  int initial() const { return initial_; }
  int next(int q, Letter a) const {
    return delta_[static_cast<std::size_t>(q) * alphabet_.size() + static_cast<std::size_t>(a)];
  }
  bool accepting(int q) const { return accepting_[static_cast<std::size_t>(q)]; }
  int run(int q, const Word& w) const;
  bool accepts(const Word& w) const { return accepting(run(initial_, w)); }
  const std::vector<int>& delta() const { return delta_; }
  const std::vector<bool>& accepting_set() const { return accepting_; }

  Dfa with_initial(int q) const;
  Dfa canonical() const;  // trimmed to reachable states, minimised, BFS-numbered
  bool is_empty() const;
  bool is_universal() const;

  // Structural comparisons; on canonical automata these decide language equality.
  bool operator==(const Dfa& o) const;
  bool operator<(const Dfa& o) const;

 private:
  Alphabet alphabet_;
  int states_ = 0;
  int initial_ = 0;
  std::vector<int> delta_;
  std::vector<bool> accepting_;
};

struct Regex {
  enum class Kind { empty, epsilon, letter, any, concat, alt, inter, complement, star, plus };
  Kind kind = Kind::empty;
  std::string symbol;  // for Kind::letter
  std::vector<Regex> children;
};

// Grammar: alt := inter ('|' inter)*, inter := cat ('&' cat)*, cat := unary+,
// unary := '!' unary | atom ('*' | '+')*, atom := letter | '.' | '∅' | 'ε' | '(' alt? ')'.
Regex parse_regex(std::string_view text);
std::set<std::string> regex_letters(const Regex& r);
std::string regex_to_string(const Regex& r);

Dfa regex_to_min_dfa(const Regex& r, const Alphabet& alphabet);
Dfa regex_to_min_dfa(std::string_view text, const Alphabet& alphabet);

// Readable regex for the language of a DFA (state elimination).
std::string dfa_to_regex(const Dfa& d);

enum class BoolOp { union_, intersection, complement, difference };
Dfa dfa_combine(BoolOp op, const Dfa& x, const Dfa* y = nullptr);
Dfa residual_language(const Dfa& d, const Word& u);
Dfa concat_dfa(const Dfa& x, const Dfa& y);
Dfa star_dfa(const Dfa& x);
Dfa universal_dfa(const Alphabet& a);
Dfa empty_dfa(const Alphabet& a);
Dfa epsilon_dfa(const Alphabet& a);

// Determinises the image of `d` under a letter-to-letter map into `target`.
Dfa project(const Dfa& d, const Alphabet& target, const std::vector<Letter>& letter_map,
            std::size_t state_cap = 100000);

nlohmann::json dfa_to_json(const Dfa& d);
Dfa dfa_from_json(const nlohmann::json& j);

// -------------------------------------------------------------------- monoids

struct FiniteMonoid {
  int size = 0;
  int unit = 0;
  std::vector<int> table;  // table[a * size + b] = a * b
  int mul(int a, int b) const {
    return table[static_cast<std::size_t>(a) * static_cast<std::size_t>(size) + static_cast<std::size_t>(b)];
  }
  bool is_idempotent(int e) const { return mul(e, e) == e; }
  int power(int x, unsigned n) const;  // n >= 1
};

struct MonoidMorphism {
  std::shared_ptr<const FiniteMonoid> monoid;
  Alphabet alphabet;
  std::vector<int> letter_images;
  int image(const Word& w) const;
  int image(const Word& w, std::size_t from, std::size_t to) const;
};

// Closes a set of generator transformations (each a vector over `points`)
// under composition; element 0 is the identity. Shared by DFAs and products.
struct TransformationMonoid {
  FiniteMonoid monoid;
  std::vector<std::vector<int>> elements;
  std::vector<Word> witnesses;  // shortlex-least word for each element
  std::vector<int> letter_images;
};
TransformationMonoid close_transformations(const std::vector<std::vector<int>>& generators,
                                           std::size_t points, std::size_t cap);

constexpr std::size_t kDefaultMonoidCap = 20000;

std::pair<FiniteMonoid, MonoidMorphism> transition_monoid(const Dfa& d,
                                                          std::size_t cap = kDefaultMonoidCap);

struct Aperiodicity {
  bool aperiodic = false;
  unsigned omega = 1;
};
Aperiodicity monoid_aperiodic(const FiniteMonoid& m);

std::optional<Word> shortest_preimage(const MonoidMorphism& mor, int target);

struct CounterWitness {
  int state = 0;
  Word u;
  int n = 0;  // delta(state, u^n) = state while delta(state, u) != state
};
std::optional<CounterWitness> find_counter(const Dfa& d, std::size_t cap = kDefaultMonoidCap);

}  // namespace zpoly
