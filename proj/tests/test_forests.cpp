#include <random>

#include "corpus_fns.hpp"
#include "doctest.h"
#include "forest_checks.hpp"
#include "monoids.hpp"

using namespace zpoly;

TEST_CASE("trivial monoid gives one flat node") {
  MonoidMorphism t = monoids::trivial();
  FactForest f = simon_forest(t, Word(8, 0));
  CHECK(validate(f));
  CHECK(f.depth() == 2);
  CHECK(f.nodes[static_cast<std::size_t>(f.root)].children.size() == 8);
  CHECK(forest_to_string(f) == "⟨aaaaaaaa⟩");
  CHECK_THROWS_AS(simon_forest(t, Word{}), std::invalid_argument);
  FactForest one = simon_forest(t, Word{0});
  CHECK(one.depth() == 1);
  CHECK(validate(one));
}

TEST_CASE("sign monoid word from the skeleton figure") {
  MonoidMorphism s = monoids::signs();
  Word w = s.alphabet.parse_word("mmzmzzzzzz");
  FactForest f = simon_forest(s, w);
  CHECK(validate(f));
  CHECK(f.depth() <= 5);
  CHECK(forest_checks::check_all(f) == "");
  // A hand-built forest of the same word, checked by the same rules.
  FactForest hand = parse_forest(s, "⟨⟨⟨mm⟩z⟩⟨⟨mz⟩zz⟩⟨zzz⟩⟩");
  CHECK(hand.word == w);
  CHECK(validate(hand));
  CHECK(hand.depth() == 4);
}

TEST_CASE("validation rejects broken forests") {
  MonoidMorphism s = monoids::signs();
  CHECK_FALSE(validate(parse_forest(s, "⟨pmz⟩")));       // three unequal children
  CHECK_FALSE(validate(parse_forest(s, "⟨mmm⟩")));       // equal but not idempotent
  CHECK(validate(parse_forest(s, "⟨zzz⟩")));
  CHECK(validate(parse_forest(s, "⟨⟨mp⟩⟨zm⟩⟩")));      // binary nesting
  CHECK(validate(parse_forest(s, "<<mp><zm>>")));
  CHECK_FALSE(validate(parse_forest(s, "⟨⟨m⟩p⟩")));      // single child
  FactForest f = parse_forest(s, "⟨mp⟩");
  f.nodes[static_cast<std::size_t>(f.root)].value = 2;
  CHECK(validation_error(f).find("product") != std::string::npos);
  CHECK_THROWS_AS(parse_forest(s, "⟨mp"), InputError);
  CHECK_THROWS_AS(parse_forest(s, "⟨m⟩⟨p⟩"), InputError);
  CHECK_THROWS_AS(parse_forest(s, "⟨mq⟩"), InputError);
}

TEST_CASE("text and dot output") {
  MonoidMorphism b = monoids::brandt();
  FactForest f = simon_forest(b, b.alphabet.parse_word("xyxyxyx"));
  std::string text = forest_to_string(f);
  FactForest back = parse_forest(b, text);
  CHECK(forest_to_string(back) == text);
  CHECK(back.depth() == f.depth());
  CHECK(validate(back));
  std::string dot = forest_to_dot(f);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("->") != std::string::npos);
  MonoidMorphism wide = monoids::trivial(Alphabet({"ab", "c"}));
  CHECK(forest_to_string(simon_forest(wide, Word{0, 1, 0})) == "⟨ ab c ab⟩");
}

TEST_CASE("skeletons of a flat idempotent node") {
  // Five leaves under one idempotent root: the outer leaves belong to the
  // root's skeleton, the inner three are their own skeleton roots.
  FactForest f = simon_forest(monoids::trivial(), Word(5, 0));
  REQUIRE(f.depth() == 2);
  SkeletonInfo s = skeleton_analysis(f);
  CHECK(s.skel_root[0] == f.root);
  CHECK(s.skel_root[4] == f.root);
  for (std::size_t i = 1; i <= 3; ++i) CHECK(s.skel_root[i] == f.leaves[i]);
  CHECK(s.skeleton[static_cast<std::size_t>(f.root)].size() == 3);
  CHECK(skeleton_yield(f, s, f.root) == Word{0, 0});
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(s.skeleton[static_cast<std::size_t>(f.leaves[i])] == std::vector<int>{f.leaves[i]});
}

TEST_CASE("dependency") {
  MonoidMorphism t = monoids::trivial();
  FactForest f = parse_forest(t, "⟨⟨aaa⟩⟨aaa⟩⟨aaa⟩⟨aaa⟩⟩");
  REQUIRE(validate(f));
  SkeletonInfo s = skeleton_analysis(f);
  DependencyRelation d = dependency(f, s);
  for (std::size_t x = 0; x < 12; ++x) CHECK(d.depends[x][x]);
  // Middle leaves of the first and last block.
  CHECK_FALSE(d.symmetric(1, 10));
  // Leaf 0 sits in the root skeleton. The root is an ancestor of every
  // node, so leaf 0 depends on everything while nothing depends on it.
  CHECK(d.depends[1][0]);
  CHECK(d.depends[0][1] == 0);
  // A middle leaf and the outer leaf of its own block: the block is an
  // ancestor of the middle leaf.
  const std::size_t block0 = static_cast<std::size_t>(s.skel_root[2]);
  CHECK(observes(f, static_cast<int>(block0), f.leaves[1]));
  CHECK(d.depends[1][2]);
  // Leaves of neighbouring blocks: the block sibling observes.
  CHECK(d.depends[1][3]);
}

TEST_CASE("forest properties on random words") {
  std::mt19937_64 rng(3);
  std::vector<MonoidMorphism> ms{monoids::trivial(Alphabet({"a", "b"})), monoids::signs(), monoids::brandt(),
                                 monoids::cyclic6()};
  for (const auto& m : ms) {
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t len = 1 + rng() % 30;
      Word w(len);
      for (auto& a : w) a = static_cast<Letter>(rng() % m.alphabet.size());
      FactForest f = simon_forest(m, w);
      CHECK(forest_checks::check_all(f) == "");
      CHECK(forest_to_string(simon_forest(m, w)) == forest_to_string(f));
    }
  }
}

TEST_CASE("pattern extraction") {
  Cplc ab = expr_to_cplc(parse_zexpr(corpus::kCountAB));
  ProductMonoid pm = product_monoid(ab);
  Word sample = ab.alphabet().parse_word("abababababab");
  auto two = extract_patterns(pm, {sample}, 2);
  REQUIRE_FALSE(two.empty());
  bool both_mixed = false;
  for (const auto& p : two) {
    CHECK(p.size() == 2);
    for (const Word& pump : p.pumps) {
      CHECK_FALSE(pump.empty());
      int v = pm.morphism.image(pump);
      CHECK(pm.monoid.is_idempotent(v));
    }
    auto mixed = [](const Word& u) {
      return std::count(u.begin(), u.end(), 0) > 0 && std::count(u.begin(), u.end(), 1) > 0;
    };
    if (mixed(p.pumps[0]) && mixed(p.pumps[1])) both_mixed = true;
  }
  CHECK(both_mixed);
  CHECK(extract_patterns(pm, {ab.alphabet().parse_word("ab")}, 3).empty());
  CHECK(extract_patterns(ab, {Word{}}, 1).empty());

  PatternExtraction few;
  few.cap = 3;
  auto capped = extract_patterns(pm, {sample}, 2, few);
  CHECK(capped.size() <= 3);
  CHECK(capped == extract_patterns(pm, {sample}, 2, few));
  CHECK_THROWS_AS(extract_patterns(pm, {sample}, 0), std::invalid_argument);

  PumpingPattern p{{{0}, {}, {1}}, {{0, 1}, {1}}};
  CHECK(p.instantiate({2, 1}) == Word{0, 0, 1, 0, 1, 1, 1});
  CHECK(pattern_to_string(p, ab.alphabet()) == "a (ab)^X1 ε (b)^X2 b");
}
