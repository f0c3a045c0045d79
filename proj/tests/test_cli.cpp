#include <sstream>

#include "doctest.h"
#include "zpoly/cli.hpp"

using namespace zpoly;

namespace {

struct Run {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "zpoly");
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return std::string(ZPOLY_CORPUS_DIR) + "/" + name; }

}  // namespace

TEST_CASE("equivalence of the signed-length pair") {
  Run r = run({"equiv", corpus("minus_one_size_lhs.zexpr"), corpus("minus_one_size_rhs.json")});
  CHECK(r.code == 0);
  CHECK(r.json()["equivalent"] == true);
  Run diff = run({"equiv", corpus("minus_one_size_lhs.zexpr"), "alphabet a\nind(a*) . ind(a*)"});
  CHECK(diff.code == 1);
  CHECK(diff.json()["witness"]["word"] == "ε");
  Run loose = run({"equiv", corpus("minus_one_size_lhs.zexpr"), "alphabet a\nind(a) . ind(a*)", "--k", "1"});
  CHECK(loose.code == 0);
  Run alph = run({"equiv", corpus("ab_product.zexpr"), corpus("minus_one_size_rhs.json")});
  CHECK(alph.code == 3);
}

TEST_CASE("growth command") {
  Run r = run({"growth", corpus("ab_product.zexpr")});
  CHECK(r.code == 0);
  CHECK(r.json()["degree"] == 2);
  CHECK(r.json()["budget_exhausted"] == false);
  Run tight = run({"growth", corpus("block_product.zexpr"), "--budget-pump-len", "1", "--budget-connector-len", "0",
                   "--samples", "0", "--budget-patterns", "1"});
  CHECK(tight.code == 2);
  CHECK(tight.json()["degree"] == 2);
  Run cert = run({"growth", corpus("block_product.zexpr"), "--certified"});
  CHECK(cert.code == 0);
  CHECK(cert.json()["mode"] == "certified");
  Run text = run({"growth", corpus("ab_product.zexpr"), "--format", "text"});
  CHECK(text.out.rfind("degree 2", 0) == 0);
  CHECK(run({"growth", corpus("odd_sets.zmso")}).code == 3);
}

TEST_CASE("star-freeness command") {
  Run r = run({"starfree", corpus("minus_one_size_lhs.zexpr")});
  CHECK(r.code == 1);
  CHECK(r.json()["trace"][0].contains("counter"));
  CHECK(run({"starfree", corpus("ab_product.zexpr")}).code == 0);
}

TEST_CASE("eval, compile and minimize") {
  Run e = run({"eval", corpus("pairs.zmso"), "aabb", "ε", "ba"});
  CHECK(e.code == 0);
  CHECK(e.out == "aabb\t4\nε\t0\nba\t1\n");
  Run ej = run({"eval", corpus("odd_sets.zmso"), "aaa", "aaaa", "--format", "json"});
  CHECK(ej.json()[0]["value"] == "1");
  CHECK(ej.json()[1]["value"] == "0");
  CHECK(run({"eval", corpus("pairs.zmso"), "abc"}).code == 3);
  CHECK(run({"eval", corpus("missing.zexpr"), "ab"}).code == 3);
  CHECK(run({"eval", "alphabet a\nstar(ind(a))", "aaa"}).out == "aaa\t1\n");

  Run c = run({"compile", corpus("pairs.zmso")});
  CHECK(c.code == 0);
  nlohmann::json cj = c.json();
  CHECK(cj["cplc"]["declared_level"] == 2);
  // Both artifacts reload to the same function.
  Cplc back = cplc_from_json(cj["cplc"]);
  CHECK(equivalent(to_linrep(back), linrep_from_json(cj["linrep"])));
  Run ct = run({"compile", corpus("ab_product.zexpr"), "--format", "text"});
  CHECK(ct.out.rfind("alphabet a b\n", 0) == 0);

  Run m = run({"minimize", corpus("minus_one_size_lhs.zexpr")});
  CHECK(m.json()["dimension"] == 2);
}

TEST_CASE("transducer, spectrum, forest and pump commands") {
  Run t = run({"rt", corpus("minus_one_size_lhs.zexpr")});
  CHECK(t.code == 0);
  CHECK(t.json()["states"].size() == 2);
  Run dot = run({"rt", corpus("prefix_a.zexpr"), "--k", "0", "--format", "dot"});
  CHECK(dot.out.rfind("digraph", 0) == 0);
  Run t1 = run({"rt", corpus("prefix_a.zexpr"), "--k", "1"});
  CHECK(t1.json()["states"].size() == 1);

  Run s = run({"spectrum", corpus("minus_one_size_rhs.json")});
  CHECK(s.code == 0);
  CHECK(run({"spectrum", corpus("minus_one_size_rhs.json"), "--mode", "zero_one"}).code == 1);

  Run f = run({"forest", corpus("signs_monoid.json"), "mmzmzzzzzz", "--format", "json"});
  CHECK(f.code == 0);
  CHECK(f.json()["valid"] == true);
  CHECK(f.json()["depth"].get<int>() <= 9);
  Run fe = run({"forest", corpus("ab_product.zexpr"), "abab"});
  CHECK(fe.code == 0);
  CHECK(fe.out.find("valid true") != std::string::npos);

  Run p = run({"pump", corpus("block_product.zexpr"), "--k", "2"});
  CHECK(p.code == 0);
  CHECK(p.json()["best"]["degree"] == 2);
  Run p1 = run({"pump", corpus("block_product.zexpr"), "--k", "1"});
  CHECK(p1.code == 0);
  CHECK(run({"pump", corpus("prefix_a.zexpr"), "--k", "1"}).code == 1);
}

TEST_CASE("argument errors and determinism") {
  CHECK(run({}).code == 3);
  CHECK(run({"frobnicate"}).code == 3);
  CHECK(run({"growth"}).code == 3);
  CHECK(run({"--help"}).code == 0);
  Run a = run({"growth", corpus("ab_product.zexpr"), "--seed", "5"});
  Run b = run({"growth", corpus("ab_product.zexpr"), "--seed", "5"});
  CHECK(a.out == b.out);
}
