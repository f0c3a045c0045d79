#pragma once
// Factorization forests of words under a monoid morphism, their skeletons,
// the dependency relation between leaves, and pumping patterns cut out of
// independent skeleton roots.

#include "zpoly/cplc.hpp"

namespace zpoly {

struct ForestNode {
  int value = 0;                // monoid image of the yield
  std::size_t begin = 0, end = 0;  // yield is word[begin, end)
  std::vector<int> children;    // empty for leaves
  int parent = -1;
  bool is_leaf() const { return children.empty(); }
};

struct FactForest {
  MonoidMorphism morphism;
  Word word;
  std::vector<ForestNode> nodes;
  int root = -1;
  std::vector<int> leaves;  // leaves[i] is the node holding position i

  // A leaf has depth 1.
  std::size_t depth() const;
  std::size_t depth(int node) const;
  Word yield(int node) const;
};

// Minimal-depth forest of a non-empty word. Ties prefer flat idempotent
// nodes, then the leftmost split, so the output is a function of the input.
FactForest simon_forest(const MonoidMorphism& mor, const Word& w);

// Letters, values, spans and parent links are consistent, every internal node
// has at least two children, and a node with three or more children has
// children all mapped to one idempotent.
bool validate(const FactForest& f);
std::string validation_error(const FactForest& f);  // empty when valid

// Bracket text such as "⟨⟨ab⟩a⟩". Symbols are separated by spaces only when
// some symbol is longer than one code point. The parser also accepts < and >.
std::string forest_to_string(const FactForest& f);
FactForest parse_forest(const MonoidMorphism& mor, std::string_view text);
std::string forest_to_dot(const FactForest& f);

struct SkeletonInfo {
  std::vector<std::vector<int>> skeleton;  // per node, sorted node ids
  std::vector<int> skel_root;              // per position of the word
};
SkeletonInfo skeleton_analysis(const FactForest& f);
Word skeleton_yield(const FactForest& f, const SkeletonInfo& s, int node);

// observer is an ancestor of target (or target itself), or the immediate
// left or right sibling of such an ancestor.
bool observes(const FactForest& f, int observer, int target);

struct DependencyRelation {
  std::vector<std::vector<char>> depends;  // depends[x][y]: y depends on x
  bool symmetric(std::size_t x, std::size_t y) const { return depends[x][y] || depends[y][x]; }
  std::size_t dependents(std::size_t x) const;
};
DependencyRelation dependency(const FactForest& f, const SkeletonInfo& s);

struct PatternExtraction {
  std::size_t cap = 200;
  std::uint64_t seed = 0;
};

// For each sample word: the forest under product_monoid(f), its independent
// k-tuples of idempotent skeleton roots, and the pattern pumping their
// skeleton yields with connectors cut from the word. Duplicates are dropped.
std::vector<PumpingPattern> extract_patterns(const Cplc& f, const std::vector<Word>& samples, std::size_t k,
                                             const PatternExtraction& opts = {});
std::vector<PumpingPattern> extract_patterns(const ProductMonoid& pm, const std::vector<Word>& samples,
                                             std::size_t k, const PatternExtraction& opts = {});

}  // namespace zpoly
