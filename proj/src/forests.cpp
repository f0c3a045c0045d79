#include "zpoly/forests.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace zpoly {

std::size_t FactForest::depth(int node) const {
  const ForestNode& n = nodes.at(static_cast<std::size_t>(node));
  std::size_t best = 0;
  for (int c : n.children) best = std::max(best, depth(c));
  return best + 1;
}

std::size_t FactForest::depth() const { return root < 0 ? 0 : depth(root); }

Word FactForest::yield(int node) const {
  const ForestNode& n = nodes.at(static_cast<std::size_t>(node));
  return Word(word.begin() + static_cast<long>(n.begin), word.begin() + static_cast<long>(n.end));
}

// ------------------------------------------------------------ construction

namespace {

// Interval tables for the depth recursion. Intervals are [i, j) with
// 0 <= i < j <= n, stored at i * (n + 1) + j.
struct IntervalTable {
  std::size_t n;
  std::vector<int> value;
  std::vector<int> depth;       // best forest depth of word[i, j)
  std::vector<int> depth_cut;   // split point chosen for that forest
  std::vector<char> flat;       // the chosen root is an idempotent run
  std::vector<int> run;         // best max depth over runs of equal pieces
  std::vector<int> run_cut;     // first cut of that run, -1 for one piece

  explicit IntervalTable(std::size_t len)
      : n(len),
        value((len + 1) * (len + 1)),
        depth((len + 1) * (len + 1)),
        depth_cut((len + 1) * (len + 1), -1),
        flat((len + 1) * (len + 1), 0),
        run((len + 1) * (len + 1)),
        run_cut((len + 1) * (len + 1), -1) {}
  std::size_t at(std::size_t i, std::size_t j) const { return i * (n + 1) + j; }
};

}  // namespace

FactForest simon_forest(const MonoidMorphism& mor, const Word& w) {
  if (w.empty()) throw std::invalid_argument("a factorization forest needs a non-empty word");
  const FiniteMonoid& m = *mor.monoid;
  const std::size_t n = w.size();
  IntervalTable t(n);
  for (std::size_t i = 0; i < n; ++i) {
    int v = m.unit;
    for (std::size_t j = i + 1; j <= n; ++j) {
      v = m.mul(v, mor.letter_images.at(static_cast<std::size_t>(w[j - 1])));
      t.value[t.at(i, j)] = v;
    }
  }
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      const std::size_t ij = t.at(i, j);
      const int e = t.value[ij];
      if (len == 1) {
        t.depth[ij] = 1;
      } else {
        int best = std::numeric_limits<int>::max(), cut = -1;
        for (std::size_t k = i + 1; k < j; ++k) {
          int d = std::max(t.depth[t.at(i, k)], t.depth[t.at(k, j)]);
          if (d < best) best = d, cut = static_cast<int>(k);
        }
        int flat_best = std::numeric_limits<int>::max(), flat_cut = -1;
        if (m.is_idempotent(e)) {
          for (std::size_t k = i + 1; k < j; ++k) {
            if (t.value[t.at(i, k)] != e || t.value[t.at(k, j)] != e) continue;
            int d = std::max(t.depth[t.at(i, k)], t.run[t.at(k, j)]);
            if (d < flat_best) flat_best = d, flat_cut = static_cast<int>(k);
          }
        }
        if (flat_cut >= 0 && flat_best <= best) {
          t.depth[ij] = flat_best + 1;
          t.depth_cut[ij] = flat_cut;
          t.flat[ij] = 1;
        } else {
          t.depth[ij] = best + 1;
          t.depth_cut[ij] = cut;
        }
      }
      // Runs of pieces sharing the value of the whole interval.
      t.run[ij] = t.depth[ij];
      for (std::size_t k = i + 1; k < j; ++k) {
        if (t.value[t.at(i, k)] != e || t.value[t.at(k, j)] != e) continue;
        int d = std::max(t.depth[t.at(i, k)], t.run[t.at(k, j)]);
        if (d < t.run[ij]) t.run[ij] = d, t.run_cut[ij] = static_cast<int>(k);
      }
    }
  }

  FactForest f;
  f.morphism = mor;
  f.word = w;
  f.leaves.assign(n, -1);
  std::function<int(std::size_t, std::size_t, int)> build = [&](std::size_t i, std::size_t j, int parent) {
    const int id = static_cast<int>(f.nodes.size());
    f.nodes.push_back(ForestNode{t.value[t.at(i, j)], i, j, {}, parent});
    if (j - i == 1) {
      f.leaves[i] = id;
      return id;
    }
    const std::size_t ij = t.at(i, j);
    const std::size_t cut = static_cast<std::size_t>(t.depth_cut[ij]);
    std::vector<std::pair<std::size_t, std::size_t>> pieces{{i, cut}};
    if (t.flat[ij]) {
      std::size_t k = cut;
      while (t.run_cut[t.at(k, j)] >= 0) {
        std::size_t next = static_cast<std::size_t>(t.run_cut[t.at(k, j)]);
        pieces.emplace_back(k, next);
        k = next;
      }
      pieces.emplace_back(k, j);
    } else {
      pieces.emplace_back(cut, j);
    }
    for (auto [a, b] : pieces) {
      int c = build(a, b, id);
      f.nodes[static_cast<std::size_t>(id)].children.push_back(c);
    }
    return id;
  };
  f.root = build(0, n, -1);
  return f;
}

// --------------------------------------------------------------- checking

std::string validation_error(const FactForest& f) {
  const FiniteMonoid& m = *f.morphism.monoid;
  if (f.root < 0 || f.nodes.empty()) return "forest has no root";
  if (f.leaves.size() != f.word.size()) return "leaf table does not match the word";
  std::vector<int> seen(f.nodes.size(), 0);
  std::string err;
  std::function<void(int)> visit = [&](int id) {
    if (!err.empty()) return;
    if (id < 0 || static_cast<std::size_t>(id) >= f.nodes.size()) {
      err = "dangling child index";
      return;
    }
    const ForestNode& n = f.nodes[static_cast<std::size_t>(id)];
    if (seen[static_cast<std::size_t>(id)]++) {
      err = "node " + std::to_string(id) + " is reached twice";
      return;
    }
    const std::string where = "node " + std::to_string(id);
    if (n.begin >= n.end || n.end > f.word.size()) {
      err = where + " has an empty or out-of-range span";
      return;
    }
    if (n.is_leaf()) {
      if (n.end - n.begin != 1) err = where + " is a leaf spanning several letters";
      else if (f.leaves[n.begin] != id) err = where + " is not the registered leaf of its position";
      else if (n.value != f.morphism.letter_images.at(static_cast<std::size_t>(f.word[n.begin])))
        err = where + " carries the wrong letter image";
      return;
    }
    if (n.children.size() < 2) {
      err = where + " has a single child";
      return;
    }
    std::size_t pos = n.begin;
    int product = m.unit;
    for (int c : n.children) {
      if (c < 0 || static_cast<std::size_t>(c) >= f.nodes.size()) {
        err = "dangling child index";
        return;
      }
      const ForestNode& child = f.nodes[static_cast<std::size_t>(c)];
      if (child.parent != id) err = "node " + std::to_string(c) + " has a wrong parent link";
      if (child.begin != pos) err = where + " has children with non-contiguous spans";
      if (!err.empty()) return;
      pos = child.end;
      product = m.mul(product, child.value);
    }
    if (pos != n.end) err = where + " is not covered by its children";
    else if (product != n.value) err = where + " value is not the product of its children";
    else if (n.children.size() >= 3) {
      int e = f.nodes[static_cast<std::size_t>(n.children[0])].value;
      if (!m.is_idempotent(e)) err = where + " has three or more children but a non-idempotent value";
      for (int c : n.children)
        if (f.nodes[static_cast<std::size_t>(c)].value != e) err = where + " has three or more unequal children";
    }
    if (!err.empty()) return;
    for (int c : n.children) visit(c);
  };
  const ForestNode& r = f.nodes[static_cast<std::size_t>(f.root)];
  if (r.parent != -1) return "root has a parent";
  if (r.begin != 0 || r.end != f.word.size()) return "root does not span the word";
  visit(f.root);
  if (!err.empty()) return err;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) return "node " + std::to_string(i) + " is unreachable";
  return {};
}

bool validate(const FactForest& f) { return validation_error(f).empty(); }

// ------------------------------------------------------------------- text

namespace {

bool multi_codepoint_symbols(const Alphabet& a) {
  for (const auto& s : a.letters())
    if (utf8_codepoints(s).size() != 1) return true;
  return false;
}

}  // namespace

std::string forest_to_string(const FactForest& f) {
  const bool spaced = multi_codepoint_symbols(f.morphism.alphabet);
  std::string out;
  std::function<void(int)> emit = [&](int id) {
    const ForestNode& n = f.nodes[static_cast<std::size_t>(id)];
    if (spaced && !out.empty() && out.back() != ' ') out += ' ';
    if (n.is_leaf()) {
      out += f.morphism.alphabet.symbol(f.word[n.begin]);
      return;
    }
    out += "⟨";
    for (int c : n.children) emit(c);
    out += "⟩";
  };
  if (f.root >= 0) emit(f.root);
  return out;
}

FactForest parse_forest(const MonoidMorphism& mor, std::string_view text) {
  // Tokens: open, close, or a run of symbol characters.
  struct Token {
    int kind;  // 0 open, 1 close, 2 letters
    std::string text;
  };
  std::vector<Token> tokens;
  std::string run;
  auto flush = [&] {
    if (!run.empty()) tokens.push_back({2, run});
    run.clear();
  };
  for (const std::string& cp : utf8_codepoints(text)) {
    if (cp == "⟨" || cp == "<") {
      flush();
      tokens.push_back({0, cp});
    } else if (cp == "⟩" || cp == ">") {
      flush();
      tokens.push_back({1, cp});
    } else if (cp == " " || cp == "\t" || cp == "\n" || cp == "\r") {
      flush();
    } else {
      run += cp;
    }
  }
  flush();

  FactForest f;
  f.morphism = mor;
  const FiniteMonoid& m = *mor.monoid;
  std::size_t pos = 0;
  auto add_leaf = [&](Letter a, int parent) {
    int id = static_cast<int>(f.nodes.size());
    f.nodes.push_back(ForestNode{mor.letter_images.at(static_cast<std::size_t>(a)), f.word.size(), f.word.size() + 1, {}, parent});
    f.word.push_back(a);
    f.leaves.push_back(id);
    return id;
  };
  // Returns the ids of the items parsed at this level until a close bracket.
  std::function<std::vector<int>(int)> items = [&](int parent) {
    std::vector<int> out;
    while (pos < tokens.size() && tokens[pos].kind != 1) {
      const Token& tk = tokens[pos++];
      if (tk.kind == 2) {
        for (Letter a : mor.alphabet.parse_word(tk.text)) out.push_back(add_leaf(a, parent));
        continue;
      }
      int id = static_cast<int>(f.nodes.size());
      f.nodes.push_back(ForestNode{m.unit, f.word.size(), 0, {}, parent});
      std::vector<int> kids = items(id);
      if (pos >= tokens.size()) throw InputError("forest text has an unclosed bracket");
      ++pos;
      if (kids.empty()) throw InputError("forest text has an empty bracket");
      ForestNode& node = f.nodes[static_cast<std::size_t>(id)];
      node.children = kids;
      node.end = f.word.size();
      int v = m.unit;
      for (int c : kids) v = m.mul(v, f.nodes[static_cast<std::size_t>(c)].value);
      node.value = v;
      out.push_back(id);
    }
    return out;
  };
  std::vector<int> top = items(-1);
  if (pos < tokens.size()) throw InputError("forest text has an unmatched closing bracket");
  if (top.size() != 1) throw InputError("forest text must contain exactly one tree");
  f.root = top[0];
  return f;
}

std::string forest_to_dot(const FactForest& f) {
  std::ostringstream os;
  const FiniteMonoid& m = *f.morphism.monoid;
  os << "digraph forest {\n  node [fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const ForestNode& n = f.nodes[i];
    os << "  n" << i << " [label=\"";
    if (n.is_leaf()) os << f.morphism.alphabet.symbol(f.word[n.begin]) << "\", shape=plaintext";
    else os << n.value << "\", shape=" << (m.is_idempotent(n.value) && n.children.size() > 2 ? "doublecircle" : "circle");
    os << "];\n";
  }
  for (std::size_t i = 0; i < f.nodes.size(); ++i)
    for (int c : f.nodes[i].children) os << "  n" << i << " -> n" << c << ";\n";
  os << "}\n";
  return os.str();
}

// --------------------------------------------------------------- skeletons

SkeletonInfo skeleton_analysis(const FactForest& f) {
  std::string err = validation_error(f);
  if (!err.empty()) throw std::invalid_argument("skeleton of an invalid forest: " + err);
  SkeletonInfo s;
  s.skeleton.resize(f.nodes.size());
  std::function<void(int)> fill = [&](int id) {
    const ForestNode& n = f.nodes[static_cast<std::size_t>(id)];
    auto& sk = s.skeleton[static_cast<std::size_t>(id)];
    sk.push_back(id);
    for (int c : n.children) fill(c);
    if (!n.is_leaf()) {
      for (int c : {n.children.front(), n.children.back()}) {
        const auto& sub = s.skeleton[static_cast<std::size_t>(c)];
        sk.insert(sk.end(), sub.begin(), sub.end());
      }
    }
    std::sort(sk.begin(), sk.end());
  };
  fill(f.root);
  // A leaf lies in the skeleton of an ancestor exactly when every step of the
  // path down is a first or last child.
  s.skel_root.resize(f.word.size());
  for (std::size_t i = 0; i < f.word.size(); ++i) {
    int cur = f.leaves[i];
    while (true) {
      int p = f.nodes[static_cast<std::size_t>(cur)].parent;
      if (p < 0) break;
      const auto& kids = f.nodes[static_cast<std::size_t>(p)].children;
      if (kids.front() != cur && kids.back() != cur) break;
      cur = p;
    }
    s.skel_root[i] = cur;
  }
  return s;
}

Word skeleton_yield(const FactForest& f, const SkeletonInfo& s, int node) {
  std::vector<std::size_t> positions;
  for (int id : s.skeleton.at(static_cast<std::size_t>(node))) {
    const ForestNode& n = f.nodes[static_cast<std::size_t>(id)];
    if (n.is_leaf()) positions.push_back(n.begin);
  }
  std::sort(positions.begin(), positions.end());
  Word w;
  for (std::size_t p : positions) w.push_back(f.word[p]);
  return w;
}

bool observes(const FactForest& f, int observer, int target) {
  for (int a = target; a >= 0; a = f.nodes[static_cast<std::size_t>(a)].parent) {
    if (a == observer) return true;
    int p = f.nodes[static_cast<std::size_t>(a)].parent;
    if (p < 0) break;
    const auto& kids = f.nodes[static_cast<std::size_t>(p)].children;
    auto it = std::find(kids.begin(), kids.end(), a);
    if (it != kids.begin() && *(it - 1) == observer) return true;
    if (it + 1 != kids.end() && *(it + 1) == observer) return true;
  }
  return false;
}

std::size_t DependencyRelation::dependents(std::size_t x) const {
  return static_cast<std::size_t>(std::count(depends[x].begin(), depends[x].end(), 1));
}

DependencyRelation dependency(const FactForest& f, const SkeletonInfo& s) {
  const std::size_t n = f.word.size();
  DependencyRelation r;
  r.depends.assign(n, std::vector<char>(n, 0));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) r.depends[x][y] = observes(f, s.skel_root[y], s.skel_root[x]) ? 1 : 0;
  return r;
}

// ---------------------------------------------------------------- patterns

namespace {

bool independent_nodes(const FactForest& f, int a, int b) {
  return !observes(f, a, b) && !observes(f, b, a);
}

}  // namespace

std::vector<PumpingPattern> extract_patterns(const ProductMonoid& pm, const std::vector<Word>& samples,
                                             std::size_t k, const PatternExtraction& opts) {
  if (k == 0) throw std::invalid_argument("patterns need at least one pump");
  constexpr std::size_t kTupleLimit = 100000;
  std::mt19937_64 rng(opts.seed);
  std::set<PumpingPattern> seen;
  std::vector<PumpingPattern> out;
  for (const Word& w : samples) {
    if (w.empty()) continue;
    FactForest f = simon_forest(pm.morphism, w);
    SkeletonInfo s = skeleton_analysis(f);
    std::vector<int> cand(s.skel_root.begin(), s.skel_root.end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::erase_if(cand, [&](int id) {
      return id == f.root || !pm.monoid.is_idempotent(f.nodes[static_cast<std::size_t>(id)].value);
    });
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
      return f.nodes[static_cast<std::size_t>(a)].begin < f.nodes[static_cast<std::size_t>(b)].begin;
    });

    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    std::function<void(std::size_t)> choose = [&](std::size_t from) {
      if (tuples.size() >= kTupleLimit) return;
      if (cur.size() == k) {
        tuples.push_back(cur);
        return;
      }
      for (std::size_t i = from; i < cand.size(); ++i) {
        bool ok = true;
        for (int c : cur) ok = ok && independent_nodes(f, c, cand[i]);
        if (!ok) continue;
        cur.push_back(cand[i]);
        choose(i + 1);
        cur.pop_back();
      }
    };
    choose(0);
    if (tuples.size() > opts.cap) {
      std::vector<std::vector<int>> picked;
      std::sample(tuples.begin(), tuples.end(), std::back_inserter(picked), opts.cap, rng);
      tuples = std::move(picked);
    }
    for (const auto& tup : tuples) {
      PumpingPattern p;
      std::size_t pos = 0;
      for (int id : tup) {
        const ForestNode& n = f.nodes[static_cast<std::size_t>(id)];
        p.connectors.emplace_back(w.begin() + static_cast<long>(pos), w.begin() + static_cast<long>(n.begin));
        p.pumps.push_back(skeleton_yield(f, s, id));
        pos = n.end;
      }
      p.connectors.emplace_back(w.begin() + static_cast<long>(pos), w.end());
      if (seen.insert(p).second) out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<PumpingPattern> extract_patterns(const Cplc& f, const std::vector<Word>& samples, std::size_t k,
                                             const PatternExtraction& opts) {
  return extract_patterns(product_monoid(f), samples, k, opts);
}

}  // namespace zpoly
