#pragma once
// Residual transducers: deterministic machines whose states are residuals of
// f up to growth equivalence and whose transitions carry lower-degree
// correction functions. Star-freeness is decided by recursing on those
// corrections.

#include "zpoly/analysis.hpp"

namespace zpoly {

struct TransducerState {
  Word rep;      // shortlex-first word reaching the state
  Cplc residual;  // w -> f(rep w)
  BigInt output;  // f(rep)
};

// T_q(a w) = T_{next(q,a)}(w) + label(q,a)(w) and T_q(ε) = output(q).
struct ResidualTransducer {
  Alphabet alphabet;
  int level = 0;  // states are residuals modulo ~_{level-1}
  std::vector<TransducerState> states;
  int initial = 0;
  std::vector<int> delta;    // [q * |A| + a]
  std::vector<Cplc> labels;  // [q * |A| + a]; empty Cplc for the zero label

  std::size_t size() const { return states.size(); }
  int next(int q, Letter a) const { return delta[index(q, a)]; }
  const Cplc& label(int q, Letter a) const { return labels[index(q, a)]; }
  // Underlying automaton; a state accepts when its output is nonzero.
  Dfa automaton() const;

 private:
  std::size_t index(int q, Letter a) const {
    return static_cast<std::size_t>(q) * alphabet.size() + static_cast<std::size_t>(a);
  }
};

// Breadth-first over representatives in shortlex order, letters in alphabet
// order. Throws CapExceeded past `state_cap` states, which happens exactly
// when k is below the growth degree of f.
ResidualTransducer residual_transducer(const Cplc& f, int k, std::size_t state_cap = 2000);

BigInt transducer_eval(const ResidualTransducer& t, const Word& w);

struct CounterFreeness {
  bool counter_free = true;
  std::optional<CounterWitness> counter;
};
CounterFreeness transducer_counter_free(const ResidualTransducer& t);

struct StarFreeStep {
  std::string path;  // which label this machine was built for, "" at the top
  std::string function;
  int degree = -1;
  std::size_t states = 0;
  bool counter_free = true;
  std::optional<CounterWitness> counter;
  Word counter_state_rep;
};

struct StarFreeVerdict {
  bool answer = true;
  std::vector<StarFreeStep> trace;
};

StarFreeVerdict star_free(const Cplc& f);

nlohmann::json transducer_to_json(const ResidualTransducer& t);
ResidualTransducer transducer_from_json(const nlohmann::json& j);
std::string transducer_to_dot(const ResidualTransducer& t);
nlohmann::json starfree_to_json(const StarFreeVerdict& v, const Alphabet& a);

}  // namespace zpoly
