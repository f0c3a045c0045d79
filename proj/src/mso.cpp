#include "zpoly/mso.hpp"

#include <cctype>
#include <functional>
#include <map>

namespace zpoly {

// ------------------------------------------------------------------ parsing

namespace {

struct Token {
  std::string text;
  std::size_t offset = 0;
};

bool ident_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; }

std::vector<Token> tokenize(std::string_view s, std::size_t from) {
  std::vector<Token> out;
  std::size_t i = from;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (ident_byte(c)) {
      std::size_t b = i;
      while (i < s.size() && ident_byte(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({std::string(s.substr(b, i - b)), b});
    } else {
      std::string two(s.substr(i, 2));
      if (two == "<=" || two == ">=" || two == "!=" || two == "->") {
        out.push_back({two, i});
        i += 2;
      } else {
        out.push_back({std::string(1, static_cast<char>(c)), i});
        ++i;
      }
    }
  }
  return out;
}

bool is_keyword(const std::string& t) {
  return t == "exists" || t == "forall" || t == "in" || t == "true" || t == "false" || t == "succ" ||
         t == "count" || t == "alphabet";
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text) : src_(text) {}

  MsoFormula parse() {
    std::size_t body = 0;
    std::optional<Alphabet> declared;
    // Optional alphabet line, then the count header.
    {
      auto toks = tokenize(src_, 0);
      if (!toks.empty() && toks[0].text == "alphabet") {
        std::size_t eol = src_.find('\n', toks[0].offset);
        if (eol == std::string_view::npos) throw InputError("formula: alphabet line without a formula");
        std::vector<std::string> syms;
        std::string_view line = src_.substr(toks[0].offset + 8, eol - toks[0].offset - 8);
        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t i = 0;
        while (i < line.size()) {
          while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
          std::size_t b = i;
          while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
          if (i > b) syms.emplace_back(line.substr(b, i - b));
        }
        declared = Alphabet(syms);
        body = eol + 1;
      }
    }
    toks_ = tokenize(src_, body);
    expect("count");
    expect("[");
    if (!peek_is("]")) {
      do {
        const std::string& name = ident("variable");
        for (int v : out_.free_vars)
          if (out_.vars[static_cast<std::size_t>(v)].name == name) fail("variable '" + name + "' listed twice");
        int id = new_var(name);
        out_.free_vars.push_back(id);
        scope_.emplace_back(name, id);
      } while (accept(","));
    }
    expect("]");
    MsoPtr root = formula();
    if (pos_ != toks_.size()) fail("unexpected '" + toks_[pos_].text + "'");

    if (declared) {
      for (const auto& s : letter_syms_)
        if (!declared->find(s)) throw InputError("formula: letter '" + s + "' is not in the declared alphabet");
      out_.alphabet = *declared;
    } else {
      if (letter_syms_.empty()) throw InputError("formula uses no letters; add an 'alphabet' line");
      out_.alphabet = Alphabet(std::vector<std::string>(letter_syms_.begin(), letter_syms_.end()));
    }
    for (auto& [node, sym] : letter_nodes_) node->letter = out_.alphabet.index(sym);
    out_.root = root;
    for (int v : out_.free_vars) {
      if (out_.vars[static_cast<std::size_t>(v)].second_order)
        out_.free_so.push_back(v);
      else
        out_.free_fo.push_back(v);
    }
    out_.is_fo = true;
    for (const auto& v : out_.vars) out_.is_fo = out_.is_fo && !v.second_order;
    return out_;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t off = pos_ < toks_.size() ? toks_[pos_].offset : src_.size();
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < off && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("formula: " + msg + " at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
  bool peek_is(const char* t) const { return pos_ < toks_.size() && toks_[pos_].text == t; }
  bool accept(const char* t) {
    if (!peek_is(t)) return false;
    ++pos_;
    return true;
  }
  void expect(const char* t) {
    if (!accept(t)) fail(std::string("expected '") + t + "'");
  }
  const std::string& ident(const char* what) {
    if (pos_ >= toks_.size() || !ident_byte(static_cast<unsigned char>(toks_[pos_].text[0])) ||
        is_keyword(toks_[pos_].text))
      fail(std::string("expected a ") + what);
    return toks_[pos_++].text;
  }
  int new_var(const std::string& name) {
    std::string unique = name;
    for (int n = 1;; ++n) {
      bool clash = false;
      for (const auto& v : out_.vars) clash = clash || v.name == unique;
      if (!clash) break;
      unique = name + "_" + std::to_string(n);
    }
    out_.vars.push_back({unique, std::isupper(static_cast<unsigned char>(name[0])) != 0});
    return static_cast<int>(out_.vars.size()) - 1;
  }
  int lookup(const std::string& name, bool want_so) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) {
        if (out_.vars[static_cast<std::size_t>(it->second)].second_order != want_so)
          fail("'" + name + "' is a " + (want_so ? "first" : "second") + "-order variable here");
        return it->second;
      }
    fail("unbound variable '" + name + "'");
  }

  static MsoPtr mk(MsoNode::Kind k, std::vector<MsoPtr> ch = {}, int v = -1, int v2 = -1) {
    auto n = std::make_shared<MsoNode>();
    n->kind = k;
    n->children = std::move(ch);
    n->var = v;
    n->var2 = v2;
    return n;
  }
  static MsoPtr neg(MsoPtr p) { return mk(MsoNode::Kind::negation, {std::move(p)}); }
  static MsoPtr conj(MsoPtr a, MsoPtr b) { return mk(MsoNode::Kind::conjunction, {std::move(a), std::move(b)}); }
  static MsoPtr disj(MsoPtr a, MsoPtr b) { return mk(MsoNode::Kind::disjunction, {std::move(a), std::move(b)}); }

  MsoPtr formula() {
    if (peek_is("exists") || peek_is("forall")) {
      bool universal = toks_[pos_++].text == "forall";
      const std::string name = ident("variable");
      int id = new_var(name);
      expect(".");
      scope_.emplace_back(name, id);
      MsoPtr body = formula();
      scope_.pop_back();
      if (universal) return neg(mk(MsoNode::Kind::exists, {neg(body)}, id));
      return mk(MsoNode::Kind::exists, {body}, id);
    }
    MsoPtr left = disjunction();
    if (accept("->")) return disj(neg(left), formula());
    return left;
  }
  MsoPtr disjunction() {
    MsoPtr p = conjunction();
    while (accept("|")) p = disj(p, conjunction());
    return p;
  }
  MsoPtr conjunction() {
    MsoPtr p = unary();
    while (accept("&")) p = conj(p, unary());
    return p;
  }
  MsoPtr unary() {
    if (accept("!")) return neg(unary());
    if (accept("(")) {
      MsoPtr p = formula();
      expect(")");
      return p;
    }
    if (peek_is("exists") || peek_is("forall")) return formula();
    return atom();
  }
  int fo_var() { return lookup(ident("first-order variable"), false); }

  MsoPtr atom() {
    if (accept("true")) return mk(MsoNode::Kind::truth);
    if (accept("false")) return neg(mk(MsoNode::Kind::truth));
    if (accept("succ")) {
      expect("(");
      int x = fo_var();
      expect(",");
      int y = fo_var();
      expect(")");
      // x < y and no z strictly between.
      int z = new_var("z");
      MsoPtr between = conj(mk(MsoNode::Kind::less, {}, x, z), mk(MsoNode::Kind::less, {}, z, y));
      return conj(mk(MsoNode::Kind::less, {}, x, y), neg(mk(MsoNode::Kind::exists, {between}, z)));
    }
    if (pos_ + 1 < toks_.size() && toks_[pos_ + 1].text == "(" && !is_keyword(toks_[pos_].text)) {
      std::string sym = ident("letter");
      expect("(");
      int x = fo_var();
      expect(")");
      auto n = std::make_shared<MsoNode>();
      n->kind = MsoNode::Kind::letter;
      n->var = x;
      letter_syms_.insert(sym);
      letter_nodes_.emplace_back(n.get(), sym);
      return n;
    }
    const std::string x_name = ident("variable");
    if (accept("in")) {
      int x = lookup(x_name, false);
      int X = lookup(ident("set variable"), true);
      return mk(MsoNode::Kind::member, {}, x, X);
    }
    int x = lookup(x_name, false);
    if (pos_ >= toks_.size()) fail("expected a comparison");
    const std::string op = toks_[pos_++].text;
    int y = fo_var();
    using K = MsoNode::Kind;
    if (op == "<") return mk(K::less, {}, x, y);
    if (op == ">") return mk(K::less, {}, y, x);
    if (op == "=") return mk(K::equal, {}, x, y);
    if (op == "!=") return neg(mk(K::equal, {}, x, y));
    if (op == "<=") return disj(mk(K::less, {}, x, y), mk(K::equal, {}, x, y));
    if (op == ">=") return disj(mk(K::less, {}, y, x), mk(K::equal, {}, x, y));
    --pos_;
    fail("unknown comparison '" + op + "'");
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  MsoFormula out_;
  std::vector<std::pair<std::string, int>> scope_;
  std::set<std::string> letter_syms_;
  std::vector<std::pair<MsoNode*, std::string>> letter_nodes_;
};

std::string node_to_string(const MsoFormula& f, const MsoNode& n) {
  auto name = [&](int v) { return f.vars[static_cast<std::size_t>(v)].name; };
  using K = MsoNode::Kind;
  switch (n.kind) {
    case K::truth: return "true";
    case K::letter: return f.alphabet.symbol(n.letter) + "(" + name(n.var) + ")";
    case K::less: return name(n.var) + " < " + name(n.var2);
    case K::equal: return name(n.var) + " = " + name(n.var2);
    case K::member: return name(n.var) + " in " + name(n.var2);
    case K::negation: return "!(" + node_to_string(f, *n.children[0]) + ")";
    case K::conjunction:
      return "(" + node_to_string(f, *n.children[0]) + " & " + node_to_string(f, *n.children[1]) + ")";
    case K::disjunction:
      return "(" + node_to_string(f, *n.children[0]) + " | " + node_to_string(f, *n.children[1]) + ")";
    case K::exists: return "(exists " + name(n.var) + ". " + node_to_string(f, *n.children[0]) + ")";
  }
  return "";
}

}  // namespace

MsoFormula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string formula_to_string(const MsoFormula& f) {
  std::string out = "alphabet";
  for (const auto& s : f.alphabet.letters()) out += " " + s;
  out += "\ncount[";
  for (std::size_t i = 0; i < f.free_vars.size(); ++i) {
    if (i) out += ",";
    out += f.vars[static_cast<std::size_t>(f.free_vars[i])].name;
  }
  return out + "] " + node_to_string(f, *f.root) + "\n";
}

// -------------------------------------------------------------- compilation

namespace {

class Compiler {
 public:
  Compiler(const MsoFormula& f, std::size_t cap) : f_(f), k_(f.alphabet.size()), cap_(cap) {}

  Dfa compile(const MsoNode& n, const std::vector<int>& scope) {
    using K = MsoNode::Kind;
    switch (n.kind) {
      case K::truth: return wf(scope);
      case K::letter: {
        std::size_t ix = track(scope, n.var);
        Letter want = n.letter;
        return atom(scope, 3, [=](int s, Letter c, unsigned mask) {
          if (!(mask >> ix & 1u)) return s;
          return s == 0 && c == want ? 1 : 2;
        });
      }
      case K::less: {
        std::size_t ix = track(scope, n.var), iy = track(scope, n.var2);
        return atom(scope, 4, [=](int s, Letter, unsigned mask) {
          bool mx = mask >> ix & 1u, my = mask >> iy & 1u;
          if (mx && my) return 3;
          if (mx) return s == 0 ? 1 : 3;
          if (my) return s == 1 ? 2 : 3;
          return s;
        }, 2);
      }
      case K::equal: {
        std::size_t ix = track(scope, n.var), iy = track(scope, n.var2);
        return atom(scope, 3, [=](int s, Letter, unsigned mask) {
          bool mx = mask >> ix & 1u, my = mask >> iy & 1u;
          if (mx && my) return s == 0 ? 1 : 2;
          if (mx || my) return 2;
          return s;
        });
      }
      case K::member: {
        std::size_t ix = track(scope, n.var), iX = track(scope, n.var2);
        return atom(scope, 3, [=](int s, Letter, unsigned mask) {
          if (!(mask >> ix & 1u)) return s;
          return s == 0 && (mask >> iX & 1u) ? 1 : 2;
        });
      }
      case K::negation: {
        Dfa c = dfa_combine(BoolOp::complement, compile(*n.children[0], scope));
        Dfa w = wf(scope);
        return dfa_combine(BoolOp::intersection, c, &w);
      }
      case K::conjunction:
      case K::disjunction: {
        Dfa a = compile(*n.children[0], scope), b = compile(*n.children[1], scope);
        return dfa_combine(n.kind == K::conjunction ? BoolOp::intersection : BoolOp::union_, a, &b);
      }
      case K::exists: {
        std::vector<int> inner = scope;
        inner.push_back(n.var);
        Dfa body = compile(*n.children[0], inner);
        const unsigned drop = ~(1u << scope.size());
        std::vector<Letter> map(ext(inner).size());
        for (std::size_t i = 0; i < map.size(); ++i) {
          unsigned mask = static_cast<unsigned>(i / k_);
          map[i] = static_cast<Letter>(i % k_ + k_ * (mask & drop));
        }
        return project(body, ext(scope), map, cap_);
      }
    }
    throw InputError("unknown formula node");
  }

  // Alphabet A x {0,1}^t with symbols like "a:01".
  const Alphabet& ext(const std::vector<int>& scope) {
    const std::size_t t = scope.size();
    auto it = alphabets_.find(t);
    if (it != alphabets_.end()) return it->second;
    if (t > 16) throw CapExceeded("too many variables in scope");
    std::vector<std::string> syms;
    for (std::size_t mask = 0; mask < (std::size_t{1} << t); ++mask)
      for (std::size_t a = 0; a < k_; ++a) {
        std::string s = f_.alphabet.symbol(static_cast<Letter>(a)) + ":";
        for (std::size_t b = 0; b < t; ++b) s += (mask >> b & 1u) ? '1' : '0';
        syms.push_back(s);
      }
    return alphabets_.emplace(t, Alphabet(syms)).first->second;
  }

  // Well-marked words: each first-order track is marked exactly once.
  Dfa wf(const std::vector<int>& scope) {
    unsigned fo = 0;
    for (std::size_t i = 0; i < scope.size(); ++i)
      if (!f_.vars[static_cast<std::size_t>(scope[i])].second_order) fo |= 1u << i;
    const int dead = static_cast<int>(1u << scope.size());
    const Alphabet& a = ext(scope);
    std::vector<int> delta;
    std::vector<bool> acc;
    for (int s = 0; s <= dead; ++s) {
      acc.push_back(s == static_cast<int>(fo));
      for (std::size_t i = 0; i < a.size(); ++i) {
        unsigned mask = static_cast<unsigned>(i / k_) & fo;
        if (s == dead || (static_cast<unsigned>(s) & mask)) {
          delta.push_back(dead);
        } else {
          delta.push_back(static_cast<int>(static_cast<unsigned>(s) | mask));
        }
      }
    }
    return Dfa(a, dead + 1, 0, delta, acc).canonical();
  }

  std::size_t track(const std::vector<int>& scope, int var) const {
    for (std::size_t i = 0; i < scope.size(); ++i)
      if (scope[i] == var) return i;
    throw InputError("internal: variable not in scope");
  }

  template <class Step>
  Dfa atom(const std::vector<int>& scope, int states, Step step, int accepting = 1) {
    const Alphabet& a = ext(scope);
    std::vector<int> delta;
    std::vector<bool> acc;
    for (int s = 0; s < states; ++s) {
      acc.push_back(s == accepting);
      for (std::size_t i = 0; i < a.size(); ++i)
        delta.push_back(step(s, static_cast<Letter>(i % k_), static_cast<unsigned>(i / k_)));
    }
    Dfa d = Dfa(a, states, 0, delta, acc).canonical();
    Dfa w = wf(scope);
    return dfa_combine(BoolOp::intersection, d, &w);
  }

 private:
  const MsoFormula& f_;
  std::size_t k_;
  std::size_t cap_;
  std::map<std::size_t, Alphabet> alphabets_;
};

// Sums the marked transitions of each base letter into one matrix.
LinRep run_counting(const MarkedAutomaton& m, const Alphabet& base) {
  const Dfa& d = m.dfa;
  LinRep r;
  r.alphabet = base;
  r.dim = static_cast<std::size_t>(d.num_states());
  r.initial.assign(r.dim, 0);
  r.initial[static_cast<std::size_t>(d.initial())] = 1;
  r.final.assign(r.dim, 0);
  for (int q = 0; q < d.num_states(); ++q)
    if (d.accepting(q)) r.final[static_cast<std::size_t>(q)] = 1;
  for (std::size_t a = 0; a < m.base_letters; ++a) {
    QMatrix mat(r.dim, r.dim);
    for (int q = 0; q < d.num_states(); ++q)
      for (std::size_t mask = 0; mask < (std::size_t{1} << m.tracks); ++mask) {
        Letter c = static_cast<Letter>(a + m.base_letters * mask);
        mat(static_cast<std::size_t>(q), static_cast<std::size_t>(d.next(q, c))) += 1;
      }
    r.letters.push_back(std::move(mat));
  }
  return r;
}

}  // namespace

MarkedAutomaton compile_marked_automaton(const MsoFormula& f, std::size_t state_cap) {
  Compiler c(f, state_cap);
  MarkedAutomaton m;
  m.dfa = c.compile(*f.root, f.free_vars);
  if (f.free_vars.empty()) {
    // With no tracks the product alphabet is the base alphabet itself.
    m.dfa = Dfa(f.alphabet, m.dfa.num_states(), m.dfa.initial(), m.dfa.delta(), m.dfa.accepting_set());
  }
  m.base_letters = f.alphabet.size();
  m.tracks = f.free_vars.size();
  return m;
}

LinRep count_to_linrep(const MsoFormula& f, std::size_t state_cap) {
  if (!f.free_so.empty()) throw InputError("count_to_linrep needs first-order free variables only");
  return run_counting(compile_marked_automaton(f, state_cap), f.alphabet);
}

LinRep count_sets_to_linrep(const MsoFormula& f, std::size_t state_cap) {
  if (!f.free_fo.empty()) throw InputError("set counting needs second-order free variables only");
  return run_counting(compile_marked_automaton(f, state_cap), f.alphabet);
}

Cplc count_to_cplc(const MsoFormula& f, std::size_t state_cap) {
  if (!f.free_so.empty()) throw InputError("count_to_cplc needs first-order free variables only");
  MarkedAutomaton m = compile_marked_automaton(f, state_cap);
  const Dfa& d = m.dfa;
  const std::size_t k = m.base_letters;
  const int n = d.num_states();
  const Alphabet& base = f.alphabet;
  auto letter = [&](std::size_t a, unsigned mask) { return static_cast<Letter>(a + k * mask); };

  // Valuations read from state q where exactly the tracks in `open` remain
  // to be marked. Splitting at the least marked position (the tracks P
  // marked there) gives  sum_{P, s} 1_{L(q, P, s)} . count(s, open \ P),
  // where L(q, P, s) holds the words u.a that reach s when u carries no
  // marks and the last letter a carries exactly P.
  std::map<std::pair<int, unsigned>, Cplc> memo;
  std::function<Cplc(int, unsigned)> count = [&](int q, unsigned open) -> Cplc {
    auto key = std::make_pair(q, open);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Cplc out(base, 0);
    if (open == 0) {
      std::vector<int> delta;
      for (int p = 0; p < n; ++p)
        for (std::size_t a = 0; a < k; ++a) delta.push_back(d.next(p, letter(a, 0)));
      out = Cplc::indicator(Dfa(base, n, q, delta, d.accepting_set()));
    } else {
      for (unsigned P = open; P != 0; P = (P - 1) & open) {
        // States (r, s): r after the unmarked prefix, s after the last letter
        // read with marks P (index n stands for "nothing read yet").
        const int width = n + 1;
        std::vector<int> delta;
        for (int r = 0; r < n; ++r)
          for (int s = 0; s <= n; ++s)
            for (std::size_t a = 0; a < k; ++a)
              delta.push_back(d.next(r, letter(a, 0)) * width + d.next(r, letter(a, P)));
        for (int target = 0; target < n; ++target) {
          std::vector<bool> acc(static_cast<std::size_t>(n * width), false);
          for (int r = 0; r < n; ++r) acc[static_cast<std::size_t>(r * width + target)] = true;
          Dfa cut = Dfa(base, n * width, q * width + n, delta, acc).canonical();
          if (cut.is_empty()) continue;
          Cplc rest = count(target, open & ~P);
          if (rest.is_empty()) continue;
          out = out + cauchy(Cplc::indicator(cut), rest);
        }
      }
    }
    memo.emplace(key, out);
    return out;
  };
  unsigned all = m.tracks == 0 ? 0u : static_cast<unsigned>((std::size_t{1} << m.tracks) - 1);
  Cplc result = count(d.initial(), all);
  result.set_declared_level(std::max(result.declared_level(), static_cast<int>(m.tracks)));
  return result;
}

}  // namespace zpoly
