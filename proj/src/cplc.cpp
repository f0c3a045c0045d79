#include "zpoly/cplc.hpp"

#include <algorithm>
#include <cctype>

namespace zpoly {

Cplc Cplc::indicator(const Dfa& d) {
  Cplc f(d.alphabet(), 0);
  f.add_term({d}, 1);
  return f;
}

Cplc Cplc::constant(const Alphabet& a, const BigInt& c) {
  Cplc f(a, 0);
  f.add_term({universal_dfa(a)}, c);
  return f;
}

int Cplc::term_level() const {
  int k = -1;
  for (const auto& [factors, c] : terms_) k = std::max(k, static_cast<int>(factors.size()) - 1);
  return k;
}

void Cplc::add_term(FactorList factors, const BigInt& coeff) {
  if (factors.empty()) throw InputError("a Cauchy product needs at least one factor");
  if (sgn(coeff) == 0) return;
  for (auto& d : factors) {
    if (!(d.alphabet() == alphabet_)) throw InputError("factor over a different alphabet");
    d = d.canonical();
    if (d.is_empty()) return;
  }
  level_ = std::max(level_, static_cast<int>(factors.size()) - 1);
  auto [it, fresh] = terms_.emplace(std::move(factors), coeff);
  if (!fresh) {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Cplc cplc_combine(CplcOp op, const Cplc& f, const Cplc* g, const BigInt& delta) {
  if (op == CplcOp::scalar) {
    Cplc out(f.alphabet(), f.declared_level());
    for (const auto& [factors, c] : f.terms()) out.add_term(factors, c * delta);
    return out;
  }
  if (!g) throw InputError("binary Cplc operation needs two operands");
  if (!(f.alphabet() == g->alphabet())) throw InputError("functions over different alphabets");
  if (op == CplcOp::sum) {
    Cplc out(f.alphabet(), std::max(f.declared_level(), g->declared_level()));
    for (const auto& [factors, c] : f.terms()) out.add_term(factors, c);
    for (const auto& [factors, c] : g->terms()) out.add_term(factors, c);
    return out;
  }
  Cplc out(f.alphabet(), f.declared_level() + g->declared_level() + 1);
  for (const auto& [x, c] : f.terms())
    for (const auto& [y, d] : g->terms()) {
      FactorList joined = x;
      joined.insert(joined.end(), y.begin(), y.end());
      out.add_term(std::move(joined), c * d);
    }
  return out;
}

Cplc operator+(const Cplc& f, const Cplc& g) { return cplc_combine(CplcOp::sum, f, &g); }
Cplc operator-(const Cplc& f, const Cplc& g) { return f + cplc_combine(CplcOp::scalar, g, nullptr, -1); }
Cplc operator*(const BigInt& delta, const Cplc& f) { return cplc_combine(CplcOp::scalar, f, nullptr, delta); }
Cplc cauchy(const Cplc& f, const Cplc& g) { return cplc_combine(CplcOp::cauchy, f, &g); }

namespace {

Dfa letter_residual(const Dfa& d, Letter a) { return d.with_initial(d.next(d.initial(), a)).canonical(); }

}  // namespace

Cplc residual(const Cplc& f, const Word& u) {
  Cplc cur = f;
  for (Letter a : u) {
    if (a < 0 || static_cast<std::size_t>(a) >= f.alphabet().size())
      throw InputError("residual by a foreign letter");
    Cplc next(f.alphabet(), f.declared_level());
    // (1_L . rest)|a = 1_{a^-1 L} . rest + [ε in L] rest|a, unrolled along the list.
    for (const auto& [factors, c] : cur.terms()) {
      for (std::size_t i = 0; i < factors.size(); ++i) {
        FactorList shifted(factors.begin() + static_cast<long>(i), factors.end());
        shifted[0] = letter_residual(shifted[0], a);
        next.add_term(std::move(shifted), c);
        if (!factors[i].accepts({})) break;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

BigInt eval(const Cplc& f, const Word& w) {
  const std::size_t n = w.size();
  for (Letter a : w)
    if (a < 0 || static_cast<std::size_t>(a) >= f.alphabet().size())
      throw InputError("word uses a letter outside the function's alphabet");
  BigInt total = 0;
  for (const auto& [factors, c] : f.terms()) {
    std::vector<BigInt> ways(n + 1, 0);
    ways[0] = 1;
    for (const Dfa& d : factors) {
      std::vector<BigInt> next(n + 1, 0);
      for (std::size_t p = 0; p <= n; ++p) {
        if (sgn(ways[p]) == 0) continue;
        int q = d.initial();
        if (d.accepting(q)) next[p] += ways[p];
        for (std::size_t r = p; r < n; ++r) {
          q = d.next(q, w[r]);
          if (d.accepting(q)) next[r + 1] += ways[p];
        }
      }
      ways.swap(next);
    }
    total += c * ways[n];
  }
  return total;
}

LinRep to_linrep(const Cplc& f) {
  LinRep acc = zero_rep(f.alphabet());
  for (const auto& [factors, c] : f.terms()) {
    LinRep term = indicator(factors[0]);
    for (std::size_t i = 1; i < factors.size(); ++i) term = cauchy(term, indicator(factors[i]));
    acc = reduce_minimize(sum(acc, scalar(Rat(c), term))).rep;
  }
  return acc;
}

ProductMonoid product_monoid(const Cplc& f, std::size_t cap) {
  std::set<Dfa> distinct;
  for (const auto& [factors, c] : f.terms()) distinct.insert(factors.begin(), factors.end());
  const std::size_t k = f.alphabet().size();
  std::size_t points = 0;
  for (const Dfa& d : distinct) points += static_cast<std::size_t>(d.num_states());
  // Tracker points: "nothing read", one per letter, "two or more letters".
  const std::size_t start = points, top = points + 1 + k;
  points = top + 1;
  std::vector<std::vector<int>> gens(k, std::vector<int>(points));
  for (std::size_t a = 0; a < k; ++a) {
    std::size_t off = 0;
    for (const Dfa& d : distinct) {
      for (int q = 0; q < d.num_states(); ++q)
        gens[a][off + static_cast<std::size_t>(q)] =
            static_cast<int>(off) + d.next(q, static_cast<Letter>(a));
      off += static_cast<std::size_t>(d.num_states());
    }
    gens[a][start] = static_cast<int>(start + 1 + a);
    for (std::size_t b = 0; b < k; ++b) gens[a][start + 1 + b] = static_cast<int>(top);
    gens[a][top] = static_cast<int>(top);
  }
  TransformationMonoid tm = close_transformations(gens, points, cap);
  ProductMonoid pm;
  pm.monoid = tm.monoid;
  pm.morphism = MonoidMorphism{std::make_shared<const FiniteMonoid>(tm.monoid), f.alphabet(), tm.letter_images};
  pm.witnesses = std::move(tm.witnesses);
  pm.aperiodicity = monoid_aperiodic(pm.monoid);
  return pm;
}

Word PumpingPattern::instantiate(const std::vector<unsigned long>& exponents) const {
  if (exponents.size() != pumps.size() || connectors.size() != pumps.size() + 1)
    throw std::invalid_argument("pattern shape does not match the exponent vector");
  Word w = connectors[0];
  for (std::size_t i = 0; i < pumps.size(); ++i) {
    for (unsigned long r = 0; r < exponents[i]; ++r) w.insert(w.end(), pumps[i].begin(), pumps[i].end());
    w.insert(w.end(), connectors[i + 1].begin(), connectors[i + 1].end());
  }
  return w;
}

std::string pattern_to_string(const PumpingPattern& p, const Alphabet& a) {
  std::string out = a.show_word(p.connectors.at(0));
  for (std::size_t i = 0; i < p.pumps.size(); ++i)
    out += " (" + a.show_word(p.pumps[i]) + ")^X" + std::to_string(i + 1) + " " + a.show_word(p.connectors.at(i + 1));
  return out;
}

// ------------------------------------------------------------------- text

std::string cplc_to_string(const Cplc& f) {
  if (f.is_empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [factors, c] : f.terms()) {
    BigInt mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    first = false;
    if (mag != 1) out += mag.get_str() + "*";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out += " . ";
      out += "ind(" + dfa_to_regex(factors[i]) + ")";
    }
  }
  return out;
}

std::string cplc_to_zexpr(const Cplc& f) {
  std::string out = "alphabet";
  for (const auto& s : f.alphabet().letters()) out += " " + s;
  return out + "\n" + cplc_to_string(f) + "\n";
}

nlohmann::json cplc_to_json(const Cplc& f) {
  nlohmann::json j;
  j["alphabet"] = f.alphabet().letters();
  j["declared_level"] = f.declared_level();
  j["expr"] = cplc_to_string(f);
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [factors, c] : f.terms()) {
    nlohmann::json t;
    t["coeff"] = c.get_str();
    nlohmann::json fs = nlohmann::json::array();
    for (const auto& d : factors) fs.push_back(dfa_to_json(d));
    t["factors"] = fs;
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j;
}

Cplc cplc_from_json(const nlohmann::json& j) {
  try {
    Alphabet a(j.at("alphabet").get<std::vector<std::string>>());
    Cplc f(a, j.at("declared_level").get<int>());
    for (const auto& t : j.at("terms")) {
      FactorList fs;
      for (const auto& d : t.at("factors")) {
        fs.push_back(dfa_from_json(d));
        if (!(fs.back().alphabet() == a)) throw InputError("factor alphabet differs from the function's");
      }
      BigInt c;
      if (t.at("coeff").is_number_integer()) {
        c = t.at("coeff").get<long>();
      } else if (c.set_str(t.at("coeff").get<std::string>(), 10) != 0) {
        throw InputError("bad coefficient in Cplc JSON");
      }
      f.add_term(std::move(fs), c);
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed Cplc JSON: ") + e.what());
  }
}

// ------------------------------------------------------------- expressions

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr node(ExprNode::Kind k, std::vector<NodePtr> children = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->children = std::move(children);
  return n;
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : s_(text) {}

  ParsedExpr parse() {
    ParsedExpr out;
    skip();
    std::optional<Alphabet> declared;
    if (keyword("alphabet")) {
      std::vector<std::string> syms;
      while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != '#') {
        if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
          ++pos_;
          continue;
        }
        std::size_t b = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '#') ++pos_;
        syms.emplace_back(s_.substr(b, pos_ - b));
      }
      declared = Alphabet(syms);
    }
    out.root = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    out.uses_star = uses_star_;
    if (declared) {
      for (const auto& l : letters_)
        if (!declared->find(l)) throw InputError("letter '" + l + "' is not in the declared alphabet");
      out.alphabet = *declared;
    } else {
      if (letters_.empty()) throw InputError("no letters used; add an 'alphabet' line");
      out.alphabet = Alphabet(std::vector<std::string>(letters_.begin(), letters_.end()));
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("expression: " + msg + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool keyword(std::string_view kw) {
    skip();
    if (s_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    if (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) return false;
    pos_ = end;
    return true;
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (eat('+')) {
        e = node(ExprNode::Kind::sum, {e, term()});
      } else if (eat('-')) {
        e = node(ExprNode::Kind::difference, {e, term()});
      } else {
        return e;
      }
    }
  }
  NodePtr term() {
    NodePtr e = factor();
    while (eat('.')) e = node(ExprNode::Kind::cauchy, {e, factor()});
    return e;
  }
  NodePtr factor() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      BigInt v(std::string(s_.substr(b, pos_ - b)));
      if (eat('*')) {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::scale;
        n->value = v;
        n->children = {factor()};
        return n;
      }
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::integer;
      n->value = v;
      return n;
    }
    if (eat('-')) return node(ExprNode::Kind::negate, {factor()});
    if (eat('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (keyword("ind")) {
      expect('(');
      std::size_t b = pos_;
      int depth = 1;
      while (pos_ < s_.size()) {
        if (s_[pos_] == '(') ++depth;
        if (s_[pos_] == ')' && --depth == 0) break;
        ++pos_;
      }
      if (depth != 0) fail("unbalanced parentheses in ind(...)");
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::indicator;
      n->regex = std::string(s_.substr(b, pos_ - b));
      ++pos_;
      for (const auto& l : regex_letters(parse_regex(n->regex))) letters_.insert(l);
      return n;
    }
    if (keyword("star")) {
      expect('(');
      NodePtr e = expr();
      expect(')');
      uses_star_ = true;
      return node(ExprNode::Kind::star, {e});
    }
    fail("expected an integer, ind(...), star(...) or '('");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::set<std::string> letters_;
  bool uses_star_ = false;
};

Cplc cplc_of(const ExprNode& n, const Alphabet& a) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::indicator: return Cplc::indicator(regex_to_min_dfa(n.regex, a));
    case K::integer: return Cplc::constant(a, n.value);
    case K::sum: return cplc_of(*n.children[0], a) + cplc_of(*n.children[1], a);
    case K::difference: return cplc_of(*n.children[0], a) - cplc_of(*n.children[1], a);
    case K::negate: return BigInt(-1) * cplc_of(*n.children[0], a);
    case K::scale: return n.value * cplc_of(*n.children[0], a);
    case K::cauchy: return cauchy(cplc_of(*n.children[0], a), cplc_of(*n.children[1], a));
    case K::star: throw InputError("star(...) leaves polynomial growth; it is only allowed in series mode");
  }
  throw InputError("unknown expression node");
}

LinRep rep_of(const ExprNode& n, const Alphabet& a) {
  using K = ExprNode::Kind;
  auto sub = [&](std::size_t i) { return rep_of(*n.children[i], a); };
  LinRep r;
  switch (n.kind) {
    case K::indicator: r = indicator(regex_to_min_dfa(n.regex, a)); break;
    case K::integer: r = constant_rep(a, Rat(n.value)); break;
    case K::sum: r = sum(sub(0), sub(1)); break;
    case K::difference: r = difference(sub(0), sub(1)); break;
    case K::negate: r = scalar(-1, sub(0)); break;
    case K::scale: r = scalar(Rat(n.value), sub(0)); break;
    case K::cauchy: r = cauchy(sub(0), sub(1)); break;
    case K::star: r = star(sub(0)); break;
  }
  return reduce_minimize(r).rep;
}

}  // namespace

ParsedExpr parse_zexpr(std::string_view text) { return ExprParser(text).parse(); }

Cplc expr_to_cplc(const ParsedExpr& e) { return cplc_of(*e.root, e.alphabet); }

LinRep expr_to_linrep(const ParsedExpr& e) { return rep_of(*e.root, e.alphabet); }

}  // namespace zpoly
