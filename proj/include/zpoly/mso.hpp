#pragma once
// Monadic second-order logic over words with the order relation, and the
// counting functions w -> number of valuations of the free variables.

#include "zpoly/cplc.hpp"

namespace zpoly {

struct MsoNode {
  enum class Kind { truth, letter, less, equal, member, negation, conjunction, disjunction, exists };
  Kind kind = Kind::truth;
  Letter letter = 0;  // for Kind::letter
  int var = -1;       // first variable of an atom, or the bound variable
  int var2 = -1;      // second variable of an atom
  std::vector<std::shared_ptr<const MsoNode>> children;
};
using MsoPtr = std::shared_ptr<const MsoNode>;

struct MsoVariable {
  std::string name;  // as written; bound names are unique after renaming
  bool second_order = false;
};

struct MsoFormula {
  Alphabet alphabet;
  std::vector<MsoVariable> vars;  // indexed by variable id
  std::vector<int> free_vars;     // the count[...] list, in order
  std::vector<int> free_fo;
  std::vector<int> free_so;
  MsoPtr root;
  bool is_fo = true;  // no second-order variable anywhere
};

// Syntax:
//   file    := ['alphabet' symbol+ newline] 'count' '[' vars? ']' formula
//   formula := 'exists'|'forall' var '.' formula | imp
//   imp     := or ['->' imp]        or := and ('|' and)*    and := unary ('&' unary)*
//   unary   := '!' unary | atom | '(' formula ')'
//   atom    := 'true' | 'false' | letter '(' x ')' | x op y | x 'in' X | 'succ' '(' x ',' y ')'
// with op among < <= > >= = !=. Names starting with an upper-case letter are
// second-order. Without an alphabet line the alphabet is the sorted set of
// letters used in atoms.
MsoFormula parse_formula(std::string_view text);
std::string formula_to_string(const MsoFormula& f);

constexpr std::size_t kDefaultMsoStateCap = 100000;

// Automaton over A x {0,1}^t, one track per count[...] variable in order.
// Letter index = a + |A| * (bit mask of marked tracks).
struct MarkedAutomaton {
  Dfa dfa;
  std::size_t base_letters = 0;
  std::size_t tracks = 0;
};

// Accepts exactly the well-marked words satisfying the formula: every
// first-order track carries exactly one mark.
MarkedAutomaton compile_marked_automaton(const MsoFormula& f, std::size_t state_cap = kDefaultMsoStateCap);

// Counting functions. The first needs only first-order free variables and
// the last only second-order ones.
LinRep count_to_linrep(const MsoFormula& f, std::size_t state_cap = kDefaultMsoStateCap);
Cplc count_to_cplc(const MsoFormula& f, std::size_t state_cap = kDefaultMsoStateCap);
LinRep count_sets_to_linrep(const MsoFormula& f, std::size_t state_cap = kDefaultMsoStateCap);

}  // namespace zpoly
