#include "zpoly/core_lang.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

namespace zpoly {

// ------------------------------------------------------------------ alphabet

Alphabet::Alphabet(std::vector<std::string> letters) {
  if (letters.empty()) throw InputError("alphabet must not be empty");
  std::set<std::string> seen;
  for (const auto& s : letters) {
    if (s.empty()) throw InputError("alphabet symbols must be non-empty");
    if (!seen.insert(s).second) throw InputError("duplicate alphabet symbol '" + s + "'");
  }
  letters_ = std::make_shared<const std::vector<std::string>>(std::move(letters));
}

const std::vector<std::string>& Alphabet::letters() const {
  static const std::vector<std::string> none;
  return letters_ ? *letters_ : none;
}

std::optional<Letter> Alphabet::find(std::string_view sym) const {
  const auto& ls = letters();
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] == sym) return static_cast<Letter>(i);
  return std::nullopt;
}

Letter Alphabet::index(std::string_view sym) const {
  auto l = find(sym);
  if (!l) throw InputError("letter '" + std::string(sym) + "' is not in the alphabet");
  return *l;
}

Word Alphabet::parse_word(std::string_view text) const {
  Word w;
  if (text == "ε" && !find("ε")) return w;
  std::size_t pos = 0;
  const auto& ls = letters();
  while (pos < text.size()) {
    std::size_t best_len = 0;
    Letter best = -1;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const auto& s = ls[i];
      if (s.size() > best_len && text.substr(pos, s.size()) == s) {
        best_len = s.size();
        best = static_cast<Letter>(i);
      }
    }
    if (best < 0)
      throw InputError("word '" + std::string(text) + "' uses a letter outside the alphabet");
    w.push_back(best);
    pos += best_len;
  }
  return w;
}

std::string Alphabet::format_word(const Word& w) const {
  std::string s;
  for (Letter a : w) s += symbol(a);
  return s;
}

std::string Alphabet::show_word(const Word& w) const { return w.empty() ? "ε" : format_word(w); }

bool Alphabet::operator==(const Alphabet& o) const {
  if (letters_ == o.letters_) return true;
  return letters() == o.letters();
}

std::vector<std::string> utf8_codepoints(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::vector<Word> words_up_to(std::size_t alphabet_size, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t level_start = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_start; i < level_end; ++i)
      for (std::size_t a = 0; a < alphabet_size; ++a) {
        Word w = out[i];
        w.push_back(static_cast<Letter>(a));
        out.push_back(std::move(w));
      }
    level_start = level_end;
  }
  return out;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// ----------------------------------------------------------------------- dfa

Dfa::Dfa(Alphabet alphabet, int states, int initial, std::vector<int> delta,
         std::vector<bool> accepting)
    : alphabet_(std::move(alphabet)),
      states_(states),
      initial_(initial),
      delta_(std::move(delta)),
      accepting_(std::move(accepting)) {
  if (alphabet_.size() == 0) throw InputError("automaton over an empty alphabet");
  if (states_ <= 0) throw InputError("automaton needs at least one state");
  if (initial_ < 0 || initial_ >= states_) throw InputError("initial state out of range");
  if (delta_.size() != static_cast<std::size_t>(states_) * alphabet_.size())
    throw InputError("transition table is not total");
  if (accepting_.size() != static_cast<std::size_t>(states_))
    throw InputError("accepting flags do not match the state count");
  for (int t : delta_)
    if (t < 0 || t >= states_) throw InputError("transition to a missing state");
}

int Dfa::run(int q, const Word& w) const {
  for (Letter a : w) q = next(q, a);
  return q;
}

Dfa Dfa::with_initial(int q) const {
  Dfa d = *this;
  if (q < 0 || q >= states_) throw InputError("initial state out of range");
  d.initial_ = q;
  return d;
}

Dfa Dfa::canonical() const {
  const std::size_t k = alphabet_.size();
  // Reachable states in BFS order.
  std::vector<int> order;
  std::vector<int> pos(static_cast<std::size_t>(states_), -1);
  order.push_back(initial_);
  pos[static_cast<std::size_t>(initial_)] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t a = 0; a < k; ++a) {
      int t = next(order[i], static_cast<Letter>(a));
      if (pos[static_cast<std::size_t>(t)] < 0) {
        pos[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  const std::size_t n = order.size();
  // Moore partition refinement.
  std::vector<int> cls(n);
  for (std::size_t i = 0; i < n; ++i) cls[i] = accepting(order[i]) ? 1 : 0;
  std::size_t num_classes = 0;
  for (;;) {
    std::map<std::vector<int>, int> sig_ids;
    std::vector<int> next_cls(n);
    std::vector<int> sig(k + 1);
    for (std::size_t i = 0; i < n; ++i) {
      sig[0] = cls[i];
      for (std::size_t a = 0; a < k; ++a)
        sig[a + 1] = cls[static_cast<std::size_t>(pos[static_cast<std::size_t>(next(order[i], static_cast<Letter>(a)))])];
      auto it = sig_ids.emplace(sig, static_cast<int>(sig_ids.size())).first;
      next_cls[i] = it->second;
    }
    std::size_t count = sig_ids.size();
    cls.swap(next_cls);
    if (count == num_classes) break;
    num_classes = count;
  }
  // Renumber classes by BFS from the initial class.
  std::vector<int> rep(num_classes, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (rep[static_cast<std::size_t>(cls[i])] < 0) rep[static_cast<std::size_t>(cls[i])] = static_cast<int>(i);
  std::vector<int> newid(num_classes, -1);
  std::vector<int> bfs{cls[0]};
  newid[static_cast<std::size_t>(cls[0])] = 0;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    int state = order[static_cast<std::size_t>(rep[static_cast<std::size_t>(bfs[i])])];
    for (std::size_t a = 0; a < k; ++a) {
      int c = cls[static_cast<std::size_t>(pos[static_cast<std::size_t>(next(state, static_cast<Letter>(a)))])];
      if (newid[static_cast<std::size_t>(c)] < 0) {
        newid[static_cast<std::size_t>(c)] = static_cast<int>(bfs.size());
        bfs.push_back(c);
      }
    }
  }
  std::vector<int> delta(bfs.size() * k);
  std::vector<bool> acc(bfs.size());
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    int state = order[static_cast<std::size_t>(rep[static_cast<std::size_t>(bfs[i])])];
    acc[i] = accepting(state);
    for (std::size_t a = 0; a < k; ++a) {
      int c = cls[static_cast<std::size_t>(pos[static_cast<std::size_t>(next(state, static_cast<Letter>(a)))])];
      delta[i * k + a] = newid[static_cast<std::size_t>(c)];
    }
  }
  return Dfa(alphabet_, static_cast<int>(bfs.size()), 0, std::move(delta), std::move(acc));
}

bool Dfa::is_empty() const {
  Dfa c = canonical();
  return c.num_states() == 1 && !c.accepting(0);
}

bool Dfa::is_universal() const {
  Dfa c = canonical();
  return c.num_states() == 1 && c.accepting(0);
}

bool Dfa::operator==(const Dfa& o) const {
  return states_ == o.states_ && initial_ == o.initial_ && delta_ == o.delta_ &&
         accepting_ == o.accepting_ && alphabet_ == o.alphabet_;
}

bool Dfa::operator<(const Dfa& o) const {
  if (states_ != o.states_) return states_ < o.states_;
  if (initial_ != o.initial_) return initial_ < o.initial_;
  if (accepting_ != o.accepting_) return accepting_ < o.accepting_;
  return delta_ < o.delta_;
}

Dfa universal_dfa(const Alphabet& a) {
  return Dfa(a, 1, 0, std::vector<int>(a.size(), 0), {true});
}

Dfa empty_dfa(const Alphabet& a) { return Dfa(a, 1, 0, std::vector<int>(a.size(), 0), {false}); }

Dfa epsilon_dfa(const Alphabet& a) {
  std::vector<int> delta(2 * a.size(), 1);
  return Dfa(a, 2, 0, std::move(delta), {true, false});
}

namespace {

Dfa letter_dfa(const Alphabet& a, const std::vector<bool>& letters) {
  std::size_t k = a.size();
  std::vector<int> delta(3 * k, 2);
  for (std::size_t x = 0; x < k; ++x) delta[x] = letters[x] ? 1 : 2;
  return Dfa(a, 3, 0, std::move(delta), {false, true, false}).canonical();
}

void require_same_alphabet(const Dfa& x, const Dfa& y) {
  if (!(x.alphabet() == y.alphabet())) throw InputError("automata over different alphabets");
}

Dfa product(const Dfa& x, const Dfa& y, BoolOp op) {
  require_same_alphabet(x, y);
  const std::size_t k = x.alphabet().size();
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> states{{x.initial(), y.initial()}};
  ids[states[0]] = 0;
  std::vector<int> delta;
  std::vector<bool> acc;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [p, q] = states[i];
    bool ap = x.accepting(p), aq = y.accepting(q);
    bool keep = op == BoolOp::union_          ? (ap || aq)
                : op == BoolOp::intersection ? (ap && aq)
                                             : (ap && !aq);
    acc.push_back(keep);
    for (std::size_t a = 0; a < k; ++a) {
      std::pair<int, int> t{x.next(p, static_cast<Letter>(a)), y.next(q, static_cast<Letter>(a))};
      auto [it, fresh] = ids.emplace(t, static_cast<int>(states.size()));
      if (fresh) states.push_back(t);
      delta.push_back(it->second);
    }
  }
  return Dfa(x.alphabet(), static_cast<int>(states.size()), 0, std::move(delta), std::move(acc))
      .canonical();
}

// Determinisation over sets of states, with a caller-supplied step function.
template <class Key, class Step, class Accept>
Dfa determinise(const Alphabet& alphabet, Key start, Step step, Accept accept, std::size_t cap) {
  const std::size_t k = alphabet.size();
  std::map<Key, int> ids;
  std::vector<Key> states{start};
  ids.emplace(start, 0);
  std::vector<int> delta;
  std::vector<bool> acc;
  for (std::size_t i = 0; i < states.size(); ++i) {
    Key cur = states[i];
    acc.push_back(accept(cur));
    for (std::size_t a = 0; a < k; ++a) {
      Key nxt = step(cur, static_cast<Letter>(a));
      auto [it, fresh] = ids.emplace(nxt, static_cast<int>(states.size()));
      if (fresh) {
        states.push_back(nxt);
        if (states.size() > cap) throw CapExceeded("determinisation exceeded the state cap");
      }
      delta.push_back(it->second);
    }
  }
  return Dfa(alphabet, static_cast<int>(states.size()), 0, std::move(delta), std::move(acc))
      .canonical();
}

using StateSet = std::vector<bool>;

bool meets_accepting(const Dfa& d, const StateSet& s) {
  for (std::size_t q = 0; q < s.size(); ++q)
    if (s[q] && d.accepting(static_cast<int>(q))) return true;
  return false;
}

}  // namespace

Dfa concat_dfa(const Dfa& x, const Dfa& y) {
  require_same_alphabet(x, y);
  using Key = std::pair<int, StateSet>;
  StateSet s0(static_cast<std::size_t>(y.num_states()), false);
  if (x.accepting(x.initial())) s0[static_cast<std::size_t>(y.initial())] = true;
  auto step = [&](const Key& k, Letter a) {
    Key out{x.next(k.first, a), StateSet(k.second.size(), false)};
    for (std::size_t q = 0; q < k.second.size(); ++q)
      if (k.second[q]) out.second[static_cast<std::size_t>(y.next(static_cast<int>(q), a))] = true;
    if (x.accepting(out.first)) out.second[static_cast<std::size_t>(y.initial())] = true;
    return out;
  };
  auto accept = [&](const Key& k) { return meets_accepting(y, k.second); };
  return determinise<Key>(x.alphabet(), Key{x.initial(), s0}, step, accept, 1000000);
}

Dfa star_dfa(const Dfa& x) {
  using Key = std::pair<bool, StateSet>;  // (still at the start, current set)
  StateSet s0(static_cast<std::size_t>(x.num_states()), false);
  s0[static_cast<std::size_t>(x.initial())] = true;
  auto step = [&](const Key& k, Letter a) {
    Key out{false, StateSet(k.second.size(), false)};
    for (std::size_t q = 0; q < k.second.size(); ++q)
      if (k.second[q]) out.second[static_cast<std::size_t>(x.next(static_cast<int>(q), a))] = true;
    if (meets_accepting(x, out.second)) out.second[static_cast<std::size_t>(x.initial())] = true;
    return out;
  };
  auto accept = [&](const Key& k) { return k.first || meets_accepting(x, k.second); };
  return determinise<Key>(x.alphabet(), Key{true, s0}, step, accept, 1000000);
}

Dfa project(const Dfa& d, const Alphabet& target, const std::vector<Letter>& letter_map,
            std::size_t state_cap) {
  if (letter_map.size() != d.alphabet().size()) throw InputError("projection map has wrong size");
  std::vector<std::vector<Letter>> preimages(target.size());
  for (std::size_t b = 0; b < letter_map.size(); ++b)
    preimages.at(static_cast<std::size_t>(letter_map[b])).push_back(static_cast<Letter>(b));
  StateSet s0(static_cast<std::size_t>(d.num_states()), false);
  s0[static_cast<std::size_t>(d.initial())] = true;
  auto step = [&](const StateSet& s, Letter c) {
    StateSet out(s.size(), false);
    for (std::size_t q = 0; q < s.size(); ++q)
      if (s[q])
        for (Letter b : preimages[static_cast<std::size_t>(c)])
          out[static_cast<std::size_t>(d.next(static_cast<int>(q), b))] = true;
    return out;
  };
  auto accept = [&](const StateSet& s) { return meets_accepting(d, s); };
  return determinise<StateSet>(target, s0, step, accept, state_cap);
}

Dfa dfa_combine(BoolOp op, const Dfa& x, const Dfa* y) {
  if (op == BoolOp::complement) {
    std::vector<bool> acc = x.accepting_set();
    acc.flip();
    return Dfa(x.alphabet(), x.num_states(), x.initial(), x.delta(), std::move(acc)).canonical();
  }
  if (!y) throw InputError("binary automaton operation needs two operands");
  return product(x, *y, op);
}

Dfa residual_language(const Dfa& d, const Word& u) {
  return d.with_initial(d.run(d.initial(), u)).canonical();
}

// ------------------------------------------------------------------- regexes

namespace {

class RegexParser {
 public:
  explicit RegexParser(std::string_view text) : toks_(utf8_codepoints(text)) {
    toks_.erase(std::remove_if(toks_.begin(), toks_.end(),
                               [](const std::string& t) { return t == " " || t == "\t" || t == "\n"; }),
                toks_.end());
  }

  Regex parse() {
    if (toks_.empty()) throw InputError("empty regex (write () for the empty word)");
    Regex r = alt();
    if (pos_ != toks_.size()) fail("unexpected '" + toks_[pos_] + "'");
    return r;
  }

 private:
  static bool special(const std::string& t) {
    return t == "(" || t == ")" || t == "|" || t == "&" || t == "!" || t == "*" || t == "+" ||
           t == "." || t == "∅" || t == "ε";
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("regex: " + msg + " at symbol " + std::to_string(pos_));
  }
  const std::string* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }

  Regex alt() {
    Regex r = inter();
    while (peek() && *peek() == "|") {
      ++pos_;
      r = Regex{Regex::Kind::alt, "", {r, inter()}};
    }
    return r;
  }
  Regex inter() {
    Regex r = cat();
    while (peek() && *peek() == "&") {
      ++pos_;
      r = Regex{Regex::Kind::inter, "", {r, cat()}};
    }
    return r;
  }
  bool starts_unary() const {
    const std::string* t = peek();
    if (!t) return false;
    return *t == "(" || *t == "!" || *t == "." || *t == "∅" || *t == "ε" || !special(*t);
  }
  Regex cat() {
    if (!starts_unary()) fail("expected a regex");
    Regex r = unary();
    while (starts_unary()) r = Regex{Regex::Kind::concat, "", {r, unary()}};
    return r;
  }
  Regex unary() {
    if (peek() && *peek() == "!") {
      ++pos_;
      return Regex{Regex::Kind::complement, "", {unary()}};
    }
    Regex r = atom();
    while (peek() && (*peek() == "*" || *peek() == "+")) {
      r = Regex{*peek() == "*" ? Regex::Kind::star : Regex::Kind::plus, "", {r}};
      ++pos_;
    }
    return r;
  }
  Regex atom() {
    const std::string* t = peek();
    if (!t) fail("unexpected end of regex");
    ++pos_;
    if (*t == "(") {
      if (peek() && *peek() == ")") {
        ++pos_;
        return Regex{Regex::Kind::epsilon, "", {}};
      }
      Regex r = alt();
      if (!peek() || *peek() != ")") fail("missing ')'");
      ++pos_;
      return r;
    }
    if (*t == ".") return Regex{Regex::Kind::any, "", {}};
    if (*t == "∅") return Regex{Regex::Kind::empty, "", {}};
    if (*t == "ε") return Regex{Regex::Kind::epsilon, "", {}};
    if (special(*t)) {
      --pos_;
      fail("unexpected '" + *t + "'");
    }
    return Regex{Regex::Kind::letter, *t, {}};
  }

  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

int precedence(Regex::Kind k) {
  switch (k) {
    case Regex::Kind::alt: return 0;
    case Regex::Kind::inter: return 1;
    case Regex::Kind::concat: return 2;
    case Regex::Kind::complement: return 3;
    case Regex::Kind::star:
    case Regex::Kind::plus: return 4;
    default: return 5;
  }
}

void print_regex(const Regex& r, std::string& out, int min_prec) {
  bool paren = precedence(r.kind) < min_prec;
  if (paren) out += "(";
  switch (r.kind) {
    case Regex::Kind::empty: out += "∅"; break;
    case Regex::Kind::epsilon: out += "()"; break;
    case Regex::Kind::letter: out += r.symbol; break;
    case Regex::Kind::any: out += "."; break;
    case Regex::Kind::alt:
      print_regex(r.children[0], out, 0);
      out += "|";
      print_regex(r.children[1], out, 1);
      break;
    case Regex::Kind::inter:
      print_regex(r.children[0], out, 1);
      out += "&";
      print_regex(r.children[1], out, 2);
      break;
    case Regex::Kind::concat:
      print_regex(r.children[0], out, 2);
      print_regex(r.children[1], out, 3);
      break;
    case Regex::Kind::complement:
      out += "!";
      print_regex(r.children[0], out, 3);
      break;
    case Regex::Kind::star:
    case Regex::Kind::plus:
      print_regex(r.children[0], out, 5);
      out += r.kind == Regex::Kind::star ? "*" : "+";
      break;
  }
  if (paren) out += ")";
}

}  // namespace

Regex parse_regex(std::string_view text) { return RegexParser(text).parse(); }

std::set<std::string> regex_letters(const Regex& r) {
  std::set<std::string> out;
  if (r.kind == Regex::Kind::letter) out.insert(r.symbol);
  for (const auto& c : r.children) {
    auto sub = regex_letters(c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::string regex_to_string(const Regex& r) {
  std::string out;
  print_regex(r, out, 0);
  return out;
}

Dfa regex_to_min_dfa(const Regex& r, const Alphabet& alphabet) {
  if (alphabet.size() == 0) throw InputError("regex over an empty alphabet");
  switch (r.kind) {
    case Regex::Kind::empty: return empty_dfa(alphabet);
    case Regex::Kind::epsilon: return epsilon_dfa(alphabet);
    case Regex::Kind::letter: {
      std::vector<bool> letters(alphabet.size(), false);
      letters[static_cast<std::size_t>(alphabet.index(r.symbol))] = true;
      return letter_dfa(alphabet, letters);
    }
    case Regex::Kind::any: return letter_dfa(alphabet, std::vector<bool>(alphabet.size(), true));
    case Regex::Kind::alt: {
      Dfa y = regex_to_min_dfa(r.children[1], alphabet);
      return dfa_combine(BoolOp::union_, regex_to_min_dfa(r.children[0], alphabet), &y);
    }
    case Regex::Kind::inter: {
      Dfa y = regex_to_min_dfa(r.children[1], alphabet);
      return dfa_combine(BoolOp::intersection, regex_to_min_dfa(r.children[0], alphabet), &y);
    }
    case Regex::Kind::concat:
      return concat_dfa(regex_to_min_dfa(r.children[0], alphabet),
                        regex_to_min_dfa(r.children[1], alphabet));
    case Regex::Kind::complement:
      return dfa_combine(BoolOp::complement, regex_to_min_dfa(r.children[0], alphabet));
    case Regex::Kind::star: return star_dfa(regex_to_min_dfa(r.children[0], alphabet));
    case Regex::Kind::plus: {
      Dfa x = regex_to_min_dfa(r.children[0], alphabet);
      return concat_dfa(x, star_dfa(x));
    }
  }
  throw InputError("unknown regex node");
}

Dfa regex_to_min_dfa(std::string_view text, const Alphabet& alphabet) {
  return regex_to_min_dfa(parse_regex(text), alphabet);
}

// ----------------------------------------------------- DFA back to a regex

namespace {

using OptRegex = std::optional<Regex>;  // nullopt is the empty language

bool is_eps(const OptRegex& r) { return r && r->kind == Regex::Kind::epsilon; }

OptRegex r_alt(const OptRegex& x, const OptRegex& y) {
  if (!x) return y;
  if (!y) return x;
  if (regex_to_string(*x) == regex_to_string(*y)) return x;
  return Regex{Regex::Kind::alt, "", {*x, *y}};
}

OptRegex r_cat(const OptRegex& x, const OptRegex& y) {
  if (!x || !y) return std::nullopt;
  if (is_eps(x)) return y;
  if (is_eps(y)) return x;
  return Regex{Regex::Kind::concat, "", {*x, *y}};
}

OptRegex r_star(const OptRegex& x) {
  if (!x || is_eps(x)) return Regex{Regex::Kind::epsilon, "", {}};
  if (x->kind == Regex::Kind::star) return x;
  return Regex{Regex::Kind::star, "", {*x}};
}

}  // namespace

std::string dfa_to_regex(const Dfa& input) {
  Dfa d = input.canonical();
  const int n = d.num_states();
  const std::size_t k = d.alphabet().size();
  if (d.is_empty()) return "∅";
  if (d.is_universal()) return ".*";
  // Keep only co-reachable states (those that can still reach acceptance).
  std::vector<bool> live(static_cast<std::size_t>(n), false);
  for (int q = 0; q < n; ++q) live[static_cast<std::size_t>(q)] = d.accepting(q);
  for (bool changed = true; changed;) {
    changed = false;
    for (int q = 0; q < n; ++q) {
      if (live[static_cast<std::size_t>(q)]) continue;
      for (std::size_t a = 0; a < k; ++a)
        if (live[static_cast<std::size_t>(d.next(q, static_cast<Letter>(a)))]) {
          live[static_cast<std::size_t>(q)] = true;
          changed = true;
          break;
        }
    }
  }
  // Nodes 0..n-1 are states, n is the fresh start and n+1 the fresh end.
  const int S = n, E = n + 1, N = n + 2;
  std::vector<std::vector<OptRegex>> edge(static_cast<std::size_t>(N), std::vector<OptRegex>(static_cast<std::size_t>(N)));
  auto at = [&](int i, int j) -> OptRegex& { return edge[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  for (int q = 0; q < n; ++q) {
    if (!live[static_cast<std::size_t>(q)]) continue;
    std::map<int, std::vector<std::size_t>> by_target;
    for (std::size_t a = 0; a < k; ++a) {
      int t = d.next(q, static_cast<Letter>(a));
      if (live[static_cast<std::size_t>(t)]) by_target[t].push_back(a);
    }
    for (const auto& [t, letters] : by_target) {
      OptRegex lab;
      if (letters.size() == k) {
        lab = Regex{Regex::Kind::any, "", {}};
      } else {
        for (std::size_t a : letters)
          lab = r_alt(lab, Regex{Regex::Kind::letter, d.alphabet().symbol(static_cast<Letter>(a)), {}});
      }
      at(q, t) = lab;
    }
    if (d.accepting(q)) at(q, E) = Regex{Regex::Kind::epsilon, "", {}};
  }
  at(S, d.initial()) = Regex{Regex::Kind::epsilon, "", {}};
  for (int q = n - 1; q >= 0; --q) {
    if (!live[static_cast<std::size_t>(q)]) continue;
    OptRegex loop = r_star(at(q, q));
    for (int i = 0; i < N; ++i) {
      if (i == q || !at(i, q)) continue;
      for (int j = 0; j < N; ++j) {
        if (j == q || !at(q, j)) continue;
        at(i, j) = r_alt(at(i, j), r_cat(r_cat(at(i, q), loop), at(q, j)));
      }
    }
    for (int i = 0; i < N; ++i) {
      at(i, q) = std::nullopt;
      at(q, i) = std::nullopt;
    }
  }
  return at(S, E) ? regex_to_string(*at(S, E)) : "∅";
}

// ---------------------------------------------------------------------- json

nlohmann::json dfa_to_json(const Dfa& d) {
  nlohmann::json j;
  j["alphabet"] = d.alphabet().letters();
  j["states"] = d.num_states();
  j["initial"] = d.initial();
  std::vector<int> acc;
  for (int q = 0; q < d.num_states(); ++q)
    if (d.accepting(q)) acc.push_back(q);
  j["accepting"] = acc;
  nlohmann::json delta = nlohmann::json::object();
  for (std::size_t a = 0; a < d.alphabet().size(); ++a) {
    std::vector<int> row;
    for (int q = 0; q < d.num_states(); ++q) row.push_back(d.next(q, static_cast<Letter>(a)));
    delta[d.alphabet().symbol(static_cast<Letter>(a))] = row;
  }
  j["delta"] = delta;
  return j;
}

Dfa dfa_from_json(const nlohmann::json& j) {
  try {
    Alphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
    int n = j.at("states").get<int>();
    int init = j.value("initial", 0);
    std::vector<bool> acc(static_cast<std::size_t>(std::max(n, 0)), false);
    for (int q : j.at("accepting").get<std::vector<int>>()) {
      if (q < 0 || q >= n) throw InputError("accepting state out of range");
      acc[static_cast<std::size_t>(q)] = true;
    }
    std::vector<int> delta(static_cast<std::size_t>(std::max(n, 0)) * alphabet.size());
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      auto row = j.at("delta").at(alphabet.symbol(static_cast<Letter>(a))).get<std::vector<int>>();
      if (row.size() != static_cast<std::size_t>(n)) throw InputError("delta row has wrong length");
      for (int q = 0; q < n; ++q) delta[static_cast<std::size_t>(q) * alphabet.size() + a] = row[static_cast<std::size_t>(q)];
    }
    return Dfa(alphabet, n, init, std::move(delta), std::move(acc));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed DFA JSON: ") + e.what());
  }
}

// ------------------------------------------------------------------- monoids

int FiniteMonoid::power(int x, unsigned n) const {
  int r = x;
  for (unsigned i = 1; i < n; ++i) r = mul(r, x);
  return r;
}

int MonoidMorphism::image(const Word& w) const { return image(w, 0, w.size()); }

int MonoidMorphism::image(const Word& w, std::size_t from, std::size_t to) const {
  int m = monoid->unit;
  for (std::size_t i = from; i < to; ++i)
    m = monoid->mul(m, letter_images[static_cast<std::size_t>(w[i])]);
  return m;
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 0x9e3779b9);
    return h;
  }
};

}  // namespace

TransformationMonoid close_transformations(const std::vector<std::vector<int>>& generators,
                                           std::size_t points, std::size_t cap) {
  TransformationMonoid tm;
  std::unordered_map<std::vector<int>, int, VecHash> ids;
  std::vector<int> id(points);
  std::iota(id.begin(), id.end(), 0);
  tm.elements.push_back(id);
  tm.witnesses.push_back({});
  ids.emplace(id, 0);
  const std::size_t k = generators.size();
  std::vector<std::vector<int>> right;  // Cayley graph: right[x][a] = x * a
  for (std::size_t i = 0; i < tm.elements.size(); ++i) {
    right.emplace_back(k);
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<int> t(points);
      for (std::size_t q = 0; q < points; ++q)
        t[q] = generators[a][static_cast<std::size_t>(tm.elements[i][q])];
      auto [it, fresh] = ids.emplace(t, static_cast<int>(tm.elements.size()));
      if (fresh) {
        if (tm.elements.size() >= cap)
          throw CapExceeded("monoid closure exceeded " + std::to_string(cap) + " elements");
        tm.elements.push_back(std::move(t));
        Word w = tm.witnesses[i];
        w.push_back(static_cast<Letter>(a));
        tm.witnesses.push_back(std::move(w));
      }
      right[i][a] = it->second;
    }
  }
  const std::size_t n = tm.elements.size();
  tm.monoid.size = static_cast<int>(n);
  tm.monoid.unit = 0;
  tm.monoid.table.assign(n * n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      int cur = static_cast<int>(x);
      for (Letter a : tm.witnesses[y]) cur = right[static_cast<std::size_t>(cur)][static_cast<std::size_t>(a)];
      tm.monoid.table[x * n + y] = cur;
    }
  for (std::size_t a = 0; a < k; ++a) tm.letter_images.push_back(right[0][a]);
  return tm;
}

std::pair<FiniteMonoid, MonoidMorphism> transition_monoid(const Dfa& d, std::size_t cap) {
  std::vector<std::vector<int>> gens(d.alphabet().size(), std::vector<int>(static_cast<std::size_t>(d.num_states())));
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (int q = 0; q < d.num_states(); ++q) gens[a][static_cast<std::size_t>(q)] = d.next(q, static_cast<Letter>(a));
  TransformationMonoid tm = close_transformations(gens, static_cast<std::size_t>(d.num_states()), cap);
  MonoidMorphism mor{std::make_shared<const FiniteMonoid>(tm.monoid), d.alphabet(), tm.letter_images};
  return {tm.monoid, mor};
}

Aperiodicity monoid_aperiodic(const FiniteMonoid& m) {
  unsigned long period_lcm = 1;
  unsigned max_index = 1;
  for (int x = 0; x < m.size; ++x) {
    // Walk x, x^2, ... until a repeat; index i and period p give x^(i+p) = x^i.
    std::map<int, unsigned> seen;
    int cur = x;
    unsigned e = 1;
    while (!seen.count(cur)) {
      seen[cur] = e;
      cur = m.mul(cur, x);
      ++e;
    }
    unsigned index = seen[cur];
    unsigned period = e - index;
    max_index = std::max(max_index, index);
    period_lcm = std::lcm(period_lcm, static_cast<unsigned long>(period));
  }
  Aperiodicity res;
  res.aperiodic = period_lcm == 1;
  unsigned long omega = period_lcm;
  while (omega < max_index) omega += period_lcm;
  res.omega = static_cast<unsigned>(omega);
  return res;
}

std::optional<Word> shortest_preimage(const MonoidMorphism& mor, int target) {
  const FiniteMonoid& m = *mor.monoid;
  std::vector<std::optional<Word>> word_of(static_cast<std::size_t>(m.size));
  std::deque<int> queue{m.unit};
  word_of[static_cast<std::size_t>(m.unit)] = Word{};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (x == target) return word_of[static_cast<std::size_t>(x)];
    for (std::size_t a = 0; a < mor.letter_images.size(); ++a) {
      int y = m.mul(x, mor.letter_images[a]);
      if (word_of[static_cast<std::size_t>(y)]) continue;
      Word w = *word_of[static_cast<std::size_t>(x)];
      w.push_back(static_cast<Letter>(a));
      word_of[static_cast<std::size_t>(y)] = std::move(w);
      queue.push_back(y);
    }
  }
  return std::nullopt;
}

std::optional<CounterWitness> find_counter(const Dfa& d, std::size_t cap) {
  const std::size_t n = static_cast<std::size_t>(d.num_states());
  std::vector<std::vector<int>> gens(d.alphabet().size(), std::vector<int>(n));
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t q = 0; q < n; ++q) gens[a][q] = d.next(static_cast<int>(q), static_cast<Letter>(a));
  TransformationMonoid tm = close_transformations(gens, n, cap);
  for (std::size_t e = 0; e < tm.elements.size(); ++e) {
    const auto& t = tm.elements[e];
    for (std::size_t q = 0; q < n; ++q) {
      if (t[q] == static_cast<int>(q)) continue;
      int p = t[q];
      for (int steps = 2; steps <= static_cast<int>(n); ++steps) {
        p = t[static_cast<std::size_t>(p)];
        if (p == static_cast<int>(q)) return CounterWitness{static_cast<int>(q), tm.witnesses[e], steps};
      }
    }
  }
  return std::nullopt;
}

}  // namespace zpoly
