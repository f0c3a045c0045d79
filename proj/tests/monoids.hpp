#pragma once
// Small hand-written monoids for the forest tests.

#include <memory>

#include "zpoly/core_lang.hpp"

namespace monoids {

using zpoly::Alphabet;
using zpoly::FiniteMonoid;
using zpoly::MonoidMorphism;

inline MonoidMorphism make(int size, int unit, std::vector<int> table, Alphabet alphabet, std::vector<int> images) {
  auto m = std::make_shared<FiniteMonoid>();
  m->size = size;
  m->unit = unit;
  m->table = std::move(table);
  return MonoidMorphism{m, std::move(alphabet), std::move(images)};
}

// One element; every letter maps to it.
inline MonoidMorphism trivial(const Alphabet& a = Alphabet({"a"})) {
  return make(1, 0, {0}, a, std::vector<int>(a.size(), 0));
}

// Elements 1, -1, 0 under multiplication as ids 0, 1, 2. Letters p, m, z.
inline MonoidMorphism signs() {
  const int val[3] = {1, -1, 0};
  std::vector<int> t(9);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      int v = val[x] * val[y];
      t[static_cast<std::size_t>(3 * x + y)] = v == 1 ? 0 : v == -1 ? 1 : 2;
    }
  return make(3, 0, t, Alphabet({"m", "p", "z"}), {1, 0, 2});
}

// Matrix units E11, E12, E21, E22, zero, and the identity: the six-element
// Brandt monoid. Letter x maps to E12, y to E21.
inline MonoidMorphism brandt() {
  // ids: 0 identity, 1 E11, 2 E12, 3 E21, 4 E22, 5 zero.
  const int row[6] = {-1, 1, 1, 2, 2, 0}, col[6] = {-1, 1, 2, 1, 2, 0};
  auto id_of = [](int r, int c) { return r == 1 ? (c == 1 ? 1 : 2) : (c == 1 ? 3 : 4); };
  std::vector<int> t(36);
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) {
      int v;
      if (x == 0) v = y;
      else if (y == 0) v = x;
      else if (x == 5 || y == 5 || col[x] != row[y]) v = 5;
      else v = id_of(row[x], col[y]);
      t[static_cast<std::size_t>(6 * x + y)] = v;
    }
  return make(6, 0, t, Alphabet({"x", "y"}), {2, 3});
}

// Integers modulo 6 under addition, one generator.
inline MonoidMorphism cyclic6() {
  std::vector<int> t(36);
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) t[static_cast<std::size_t>(6 * x + y)] = (x + y) % 6;
  return make(6, 0, t, Alphabet({"c", "d"}), {1, 0});
}

}  // namespace monoids
