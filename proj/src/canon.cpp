#include "zpoly/canon.hpp"

#include <deque>
#include <sstream>

namespace zpoly {

Dfa ResidualTransducer::automaton() const {
  std::vector<bool> acc;
  for (const auto& s : states) acc.push_back(sgn(s.output) != 0);
  return Dfa(alphabet, static_cast<int>(states.size()), initial, delta, acc);
}

ResidualTransducer residual_transducer(const Cplc& f, int k, std::size_t state_cap) {
  if (k < 0) throw std::invalid_argument("residual transducers need k >= 0");
  GrowthFiltration g = growth_filtration(to_linrep(f));
  const int coarse = k - 1;
  // Residuals f|u and f|v are ~_{k-1} equivalent iff their state vectors
  // differ by an element of layer k-1.
  auto same_class = [&](const QVector& x, const QVector& y) {
    if (coarse < 0) return x == y;
    if (coarse >= g.degree) return true;
    QVector d = x;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= y[i];
    return g.layers[static_cast<std::size_t>(coarse)].contains(d);
  };

  ResidualTransducer t;
  t.alphabet = f.alphabet();
  t.level = k;
  const std::size_t letters = t.alphabet.size();
  std::vector<QVector> vecs;
  auto add_state = [&](const Word& rep, const QVector& v) {
    if (t.states.size() >= state_cap) throw CapExceeded("residual transducer exceeds the state cap");
    t.states.push_back(TransducerState{rep, residual(f, rep), eval(f, rep)});
    vecs.push_back(v);
    t.delta.resize(t.states.size() * letters, -1);
    t.labels.resize(t.states.size() * letters, Cplc(t.alphabet));
    return static_cast<int>(t.states.size() - 1);
  };
  add_state(Word{}, g.rep.initial);
  for (std::size_t q = 0; q < t.states.size(); ++q) {
    for (std::size_t a = 0; a < letters; ++a) {
      Word ua = t.states[q].rep;
      ua.push_back(static_cast<Letter>(a));
      QVector x = g.rep.dim ? row_times(vecs[q], g.rep.letters[a]) : QVector{};
      int target = -1;
      for (std::size_t p = 0; p < vecs.size() && target < 0; ++p)
        if (same_class(x, vecs[p])) target = static_cast<int>(p);
      const std::size_t slot = q * letters + a;
      if (target < 0) {
        target = add_state(ua, x);
      } else {
        Cplc lab = residual(f, ua) - t.states[static_cast<std::size_t>(target)].residual;
        if (to_linrep(lab).dim != 0) t.labels[slot] = std::move(lab);
      }
      t.delta[slot] = target;
    }
  }
  return t;
}

BigInt transducer_eval(const ResidualTransducer& t, const Word& w) {
  BigInt total = 0;
  int q = t.initial;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Cplc& lab = t.label(q, w[i]);
    if (!lab.is_empty()) total += eval(lab, Word(w.begin() + static_cast<long>(i) + 1, w.end()));
    q = t.next(q, w[i]);
  }
  return total + t.states[static_cast<std::size_t>(q)].output;
}

CounterFreeness transducer_counter_free(const ResidualTransducer& t) {
  CounterFreeness c;
  c.counter = find_counter(t.automaton());
  c.counter_free = !c.counter.has_value();
  return c;
}

// ------------------------------------------------------------ star-freeness

namespace {

bool decide(const Cplc& f, const std::string& path, StarFreeVerdict& v) {
  const int deg = growth_filtration(to_linrep(f)).degree;
  // At degree <= 0 the 0-residual transducer is the minimal automaton of the
  // function, and counter-freeness is aperiodicity.
  ResidualTransducer t = residual_transducer(f, std::max(deg, 0));
  CounterFreeness cf = transducer_counter_free(t);
  StarFreeStep step;
  step.path = path;
  step.function = cplc_to_string(f);
  step.degree = deg;
  step.states = t.size();
  step.counter_free = cf.counter_free;
  step.counter = cf.counter;
  if (cf.counter) step.counter_state_rep = t.states[static_cast<std::size_t>(cf.counter->state)].rep;
  v.trace.push_back(step);
  if (!cf.counter_free) return false;
  if (deg <= 0) return true;
  std::vector<Cplc> done;
  for (std::size_t q = 0; q < t.size(); ++q)
    for (std::size_t a = 0; a < t.alphabet.size(); ++a) {
      const Cplc& lab = t.label(static_cast<int>(q), static_cast<Letter>(a));
      if (lab.is_empty() || std::find(done.begin(), done.end(), lab) != done.end()) continue;
      done.push_back(lab);
      std::string sub = path + "/" + t.alphabet.show_word(t.states[q].rep) + ":" + t.alphabet.symbol(static_cast<Letter>(a));
      if (!decide(lab, sub, v)) return false;
    }
  return true;
}

}  // namespace

StarFreeVerdict star_free(const Cplc& f) {
  StarFreeVerdict v;
  v.answer = decide(f, "", v);
  return v;
}

// -------------------------------------------------------------------- export

nlohmann::json transducer_to_json(const ResidualTransducer& t) {
  nlohmann::json j;
  j["alphabet"] = t.alphabet.letters();
  j["level"] = t.level;
  j["initial"] = t.initial;
  nlohmann::json states = nlohmann::json::array();
  for (std::size_t q = 0; q < t.size(); ++q) {
    nlohmann::json edges = nlohmann::json::object();
    for (std::size_t a = 0; a < t.alphabet.size(); ++a) {
      const Letter l = static_cast<Letter>(a);
      edges[t.alphabet.symbol(l)] = {{"to", t.next(static_cast<int>(q), l)},
                                     {"label", cplc_to_json(t.label(static_cast<int>(q), l))}};
    }
    states.push_back({{"rep", t.alphabet.show_word(t.states[q].rep)},
                      {"output", t.states[q].output.get_str()},
                      {"residual", cplc_to_json(t.states[q].residual)},
                      {"edges", edges}});
  }
  j["states"] = states;
  return j;
}

ResidualTransducer transducer_from_json(const nlohmann::json& j) {
  try {
    ResidualTransducer t;
    t.alphabet = Alphabet(j.at("alphabet").get<std::vector<std::string>>());
    t.level = j.at("level").get<int>();
    t.initial = j.at("initial").get<int>();
    const auto& states = j.at("states");
    const std::size_t n = states.size(), k = t.alphabet.size();
    t.delta.assign(n * k, -1);
    t.labels.assign(n * k, Cplc(t.alphabet));
    for (std::size_t q = 0; q < n; ++q) {
      const auto& s = states[q];
      t.states.push_back(TransducerState{t.alphabet.parse_word(s.at("rep").get<std::string>()),
                                         cplc_from_json(s.at("residual")), BigInt(s.at("output").get<std::string>())});
      for (std::size_t a = 0; a < k; ++a) {
        const auto& e = s.at("edges").at(t.alphabet.symbol(static_cast<Letter>(a)));
        int to = e.at("to").get<int>();
        if (to < 0 || static_cast<std::size_t>(to) >= n) throw InputError("transducer edge to a missing state");
        t.delta[q * k + a] = to;
        t.labels[q * k + a] = cplc_from_json(e.at("label"));
      }
    }
    if (t.initial < 0 || static_cast<std::size_t>(t.initial) >= n) throw InputError("transducer initial state missing");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed transducer JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed transducer JSON: ") + e.what());
  }
}

std::string transducer_to_dot(const ResidualTransducer& t) {
  std::ostringstream os;
  os << "digraph transducer {\n  rankdir=LR;\n  node [shape=circle, fontname=\"monospace\"];\n";
  os << "  start [shape=point];\n  start -> q" << t.initial << ";\n";
  for (std::size_t q = 0; q < t.size(); ++q)
    os << "  q" << q << " [label=\"" << t.alphabet.show_word(t.states[q].rep) << " / " << t.states[q].output.get_str()
       << "\"];\n";
  for (std::size_t q = 0; q < t.size(); ++q)
    for (std::size_t a = 0; a < t.alphabet.size(); ++a) {
      const Letter l = static_cast<Letter>(a);
      os << "  q" << q << " -> q" << t.next(static_cast<int>(q), l) << " [label=\"" << t.alphabet.symbol(l) << " | "
         << cplc_to_string(t.label(static_cast<int>(q), l)) << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

nlohmann::json starfree_to_json(const StarFreeVerdict& v, const Alphabet& a) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& s : v.trace) {
    nlohmann::json step = {{"path", s.path},         {"function", s.function},
                           {"degree", s.degree},     {"states", s.states},
                           {"counter_free", s.counter_free}};
    if (s.counter)
      step["counter"] = {{"state", s.counter->state},
                         {"state_rep", a.show_word(s.counter_state_rep)},
                         {"u", a.show_word(s.counter->u)},
                         {"n", s.counter->n}};
    trace.push_back(step);
  }
  return {{"star_free", v.answer}, {"trace", trace}};
}

}  // namespace zpoly
