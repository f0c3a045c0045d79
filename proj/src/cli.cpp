#include "zpoly/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace zpoly {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool names_file(const std::string& arg) {
  std::error_code ec;
  return std::filesystem::is_regular_file(arg, ec);
}

bool looks_like_path(const std::string& arg) {
  for (const char* ext : {".zexpr", ".zmso", ".json"})
    if (arg.size() > std::string(ext).size() && arg.ends_with(ext)) return true;
  return false;
}

nlohmann::json parse_json(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(source + ": invalid JSON: " + e.what());
  }
}

LoadedFunction from_expr(const std::string& text, const std::string& source) {
  ParsedExpr e = parse_zexpr(text);
  LoadedFunction f{source, e.alphabet, std::nullopt, {}};
  if (!e.uses_star) {
    f.cplc = expr_to_cplc(e);
    f.rep = to_linrep(*f.cplc);
  } else {
    f.rep = expr_to_linrep(e);
  }
  return f;
}

}  // namespace

LoadedFunction load_function(const std::string& arg) {
  if (!names_file(arg)) {
    if (looks_like_path(arg)) throw InputError("no such file: " + arg);
    return from_expr(arg, "<inline>");
  }
  const std::string text = read_file(arg);
  if (arg.ends_with(".zmso")) {
    MsoFormula phi = parse_formula(text);
    LoadedFunction f{arg, phi.alphabet, std::nullopt, {}};
    if (phi.free_so.empty()) {
      f.cplc = count_to_cplc(phi);
      f.rep = to_linrep(*f.cplc);
    } else if (phi.free_fo.empty()) {
      f.rep = count_sets_to_linrep(phi);
    } else {
      throw InputError(arg + ": counting mixes first-order and set variables");
    }
    return f;
  }
  if (arg.ends_with(".json")) {
    nlohmann::json j = parse_json(text, arg);
    if (j.is_object() && j.contains("terms")) {
      Cplc c = cplc_from_json(j);
      return LoadedFunction{arg, c.alphabet(), c, to_linrep(c)};
    }
    LinRep r = linrep_from_json(j);
    return LoadedFunction{arg, r.alphabet, std::nullopt, r};
  }
  return from_expr(text, arg);
}

namespace {

const Cplc& need_cplc(const LoadedFunction& f, const std::string& command) {
  if (!f.cplc)
    throw InputError(command + " needs a function given as a combination of indicator products; " + f.source +
                     " only has a linear representation");
  return *f.cplc;
}

MonoidMorphism load_morphism(const std::string& arg) {
  if (names_file(arg) && arg.ends_with(".json")) {
    nlohmann::json j = parse_json(read_file(arg), arg);
    if (j.contains("monoid")) {
      try {
        auto m = std::make_shared<FiniteMonoid>();
        m->size = j["monoid"].at("size").get<int>();
        m->unit = j["monoid"].at("unit").get<int>();
        m->table = j["monoid"].at("table").get<std::vector<int>>();
        if (m->size <= 0 || m->table.size() != static_cast<std::size_t>(m->size * m->size))
          throw InputError(arg + ": monoid table has the wrong size");
        for (int v : m->table)
          if (v < 0 || v >= m->size) throw InputError(arg + ": monoid table entry out of range");
        Alphabet a(j.at("alphabet").get<std::vector<std::string>>());
        std::vector<int> images = j.at("images").get<std::vector<int>>();
        if (images.size() != a.size()) throw InputError(arg + ": one image per letter is required");
        for (int v : images)
          if (v < 0 || v >= m->size) throw InputError(arg + ": letter image out of range");
        return MonoidMorphism{m, a, images};
      } catch (const nlohmann::json::exception& e) {
        throw InputError(arg + ": malformed monoid: " + e.what());
      }
    }
  }
  LoadedFunction f = load_function(arg);
  return product_monoid(need_cplc(f, "forest")).morphism;
}

struct Options {
  std::uint64_t seed = 0;
  std::string format;
  SearchBudget budget;
  bool certified = false;
};

void emit_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << "\n"; }

std::string show_value(const Rat& r) { return rat_to_string(r); }

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact decision procedures for integer-valued polyregular functions", "zpoly"};
  app.fallthrough();
  app.require_subcommand(1);
  Options opt;
  app.add_option("--seed", opt.seed, "Seed for every randomised choice")->default_val(0);
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "dot", "text"}));
  app.add_option("--budget-pump-len", opt.budget.pump_len, "Longest pump word in exhaustive search")
      ->default_val(opt.budget.pump_len);
  app.add_option("--budget-connector-len", opt.budget.connector_len, "Longest connector in exhaustive search")
      ->default_val(opt.budget.connector_len);
  app.add_option("--budget-patterns", opt.budget.max_patterns, "Patterns explored per pattern size")
      ->default_val(opt.budget.max_patterns);
  app.add_option("--samples", opt.budget.samples, "Random sample words for forest patterns")
      ->default_val(opt.budget.samples);
  app.add_flag("--certified", opt.certified, "Widen the witness search; the degree is certified either way");

  std::string in1, in2;
  std::vector<std::string> words;
  int k = -1;
  bool k_given = false;
  std::string mode = "zero_union_unity";
  std::size_t spectrum_len = 4, spectrum_samples = 4096;

  auto* compile = app.add_subcommand("compile", "Compile a formula or expression");
  compile->add_option("input", in1)->required();
  auto* evalc = app.add_subcommand("eval", "Evaluate a function on words");
  evalc->add_option("input", in1)->required();
  evalc->add_option("words", words)->required();
  auto* equiv = app.add_subcommand("equiv", "Decide f ~k g (k = -1 is equality)");
  equiv->add_option("f", in1)->required();
  equiv->add_option("g", in2)->required();
  equiv->add_option("--k", k, "Growth level")->default_val(-1);
  auto* minimize = app.add_subcommand("minimize", "Minimal linear representation");
  minimize->add_option("input", in1)->required();
  auto* growth = app.add_subcommand("growth", "Growth degree with a pumping witness");
  growth->add_option("input", in1)->required();
  auto* rt = app.add_subcommand("rt", "Residual transducer");
  rt->add_option("input", in1)->required();
  rt->add_option("--k", k, "Level; defaults to the growth degree")->each([&](const std::string&) { k_given = true; });
  auto* starfree = app.add_subcommand("starfree", "Decide star-freeness");
  starfree->add_option("input", in1)->required();
  auto* spectrum = app.add_subcommand("spectrum", "Spectral diagnostics on the minimal representation");
  spectrum->add_option("input", in1)->required();
  spectrum->add_option("--mode", mode)->check(CLI::IsMember({"zero_union_unity", "zero_one"}));
  spectrum->add_option("--len", spectrum_len)->default_val(4);
  spectrum->add_option("--words", spectrum_samples, "Word sample size")->default_val(4096);
  auto* forest = app.add_subcommand("forest", "Factorization forest of a word");
  forest->add_option("morphism", in1, "Monoid JSON or a function whose product monoid is used")->required();
  forest->add_option("word", in2)->required();
  auto* pump = app.add_subcommand("pump", "Search a pumping witness with k pumps");
  pump->add_option("input", in1)->required();
  pump->add_option("--k", k)->required();

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitTrue;
  } catch (const CLI::ParseError& e) {
    err << "zpoly: " << e.what() << "\n";
    return kExitInputError;
  }
  opt.budget.seed = opt.seed;
  auto fmt = [&](const char* fallback) { return opt.format.empty() ? std::string(fallback) : opt.format; };

  try {
    if (compile->parsed()) {
      LoadedFunction f = load_function(in1);
      if (fmt("json") == "text") {
        out << (f.cplc ? cplc_to_zexpr(*f.cplc) : linrep_to_json(f.rep).dump() + "\n");
      } else {
        nlohmann::json j;
        j["alphabet"] = f.alphabet.letters();
        j["cplc"] = f.cplc ? cplc_to_json(*f.cplc) : nlohmann::json(nullptr);
        j["linrep"] = linrep_to_json(f.rep);
        emit_json(out, j);
      }
      return kExitTrue;
    }
    if (evalc->parsed()) {
      LoadedFunction f = load_function(in1);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& text : words) {
        Word w = f.alphabet.parse_word(text);
        Rat v = eval(f.rep, w);
        if (f.cplc && Rat(eval(*f.cplc, w)) != v) throw std::logic_error("compiled forms disagree");
        if (fmt("text") == "text") out << f.alphabet.show_word(w) << "\t" << show_value(v) << "\n";
        arr.push_back({{"word", f.alphabet.show_word(w)}, {"value", show_value(v)}});
      }
      if (fmt("text") != "text") emit_json(out, arr);
      return kExitTrue;
    }
    if (equiv->parsed()) {
      LoadedFunction f = load_function(in1), g = load_function(in2);
      if (!(f.alphabet == g.alphabet)) throw InputError("the two functions use different alphabets");
      if (k < -1) throw InputError("--k must be at least -1");
      nlohmann::json j{{"k", k}};
      bool same;
      if (k == -1) {
        std::optional<Word> w = distinguishing_word(f.rep, g.rep);
        same = !w;
        if (w)
          j["witness"] = {{"word", f.alphabet.show_word(*w)},
                          {"f", show_value(eval(f.rep, *w))},
                          {"g", show_value(eval(g.rep, *w))}};
      } else {
        GrowthFiltration d = growth_filtration(difference(f.rep, g.rep));
        j["difference_degree"] = d.degree;
        same = d.degree <= k;
      }
      j["equivalent"] = same;
      emit_json(out, j);
      return same ? kExitTrue : kExitFalse;
    }
    if (minimize->parsed()) {
      LoadedFunction f = load_function(in1);
      Minimized m = reduce_minimize(f.rep);
      emit_json(out, {{"dimension", m.rep.dim}, {"input_dimension", f.rep.dim}, {"linrep", linrep_to_json(m.rep)}});
      return kExitTrue;
    }
    if (growth->parsed()) {
      LoadedFunction f = load_function(in1);
      GrowthVerdict v =
          growth_degree(need_cplc(f, "growth"), opt.budget, opt.certified ? GrowthMode::certified : GrowthMode::budgeted);
      if (fmt("json") == "text") {
        out << "degree " << v.degree << (v.budget_exhausted ? " (no witness within budget)" : "") << "\n";
        if (v.witness)
          out << "witness " << pattern_to_string(v.witness->pattern, f.alphabet) << " -> "
              << v.witness->poly.to_string() << "\n";
      } else {
        emit_json(out, verdict_to_json(v, f.alphabet));
      }
      return v.budget_exhausted ? kExitUncertain : kExitTrue;
    }
    if (rt->parsed()) {
      LoadedFunction f = load_function(in1);
      const Cplc& c = need_cplc(f, "rt");
      int level = k_given ? k : std::max(growth_filtration(f.rep).degree, 0);
      ResidualTransducer t = residual_transducer(c, level);
      if (fmt("json") == "dot") out << transducer_to_dot(t);
      else emit_json(out, transducer_to_json(t));
      return kExitTrue;
    }
    if (starfree->parsed()) {
      LoadedFunction f = load_function(in1);
      StarFreeVerdict v = star_free(need_cplc(f, "starfree"));
      emit_json(out, starfree_to_json(v, f.alphabet));
      return v.answer ? kExitTrue : kExitFalse;
    }
    if (spectrum->parsed()) {
      LoadedFunction f = load_function(in1);
      RootMode m = mode == "zero_one" ? RootMode::zero_one : RootMode::zero_union_unity;
      SpectrumReport r = spectrum_probe(f.rep, m, spectrum_len, spectrum_samples, opt.seed);
      nlohmann::json viol = nlohmann::json::array();
      for (const auto& v : r.violations)
        viol.push_back({{"word", f.alphabet.show_word(v.word)}, {"char_poly", v.char_poly.to_string()}});
      emit_json(out, {{"mode", mode},
                      {"pass", r.pass},
                      {"exhaustive", r.exhaustive},
                      {"words_checked", r.words_checked},
                      {"minimal_dim", r.minimal_dim},
                      {"violations", viol}});
      return r.pass ? kExitTrue : kExitFalse;
    }
    if (forest->parsed()) {
      MonoidMorphism mor = load_morphism(in1);
      Word w = mor.alphabet.parse_word(in2);
      FactForest fo = simon_forest(mor, w);
      if (fmt("text") == "dot") {
        out << forest_to_dot(fo);
        return kExitTrue;
      }
      SkeletonInfo s = skeleton_analysis(fo);
      DependencyRelation d = dependency(fo, s);
      std::set<int> roots(s.skel_root.begin(), s.skel_root.end());
      std::size_t most = 0;
      for (std::size_t x = 0; x < w.size(); ++x) most = std::max(most, d.dependents(x));
      nlohmann::json j{{"forest", forest_to_string(fo)},
                       {"depth", fo.depth()},
                       {"depth_bound", 3 * mor.monoid->size},
                       {"valid", validate(fo)},
                       {"monoid_size", mor.monoid->size},
                       {"skeleton_roots", roots.size()},
                       {"max_dependents", most}};
      if (fmt("text") == "text") {
        out << j["forest"].get<std::string>() << "\n";
        for (const char* key : {"depth", "depth_bound", "valid", "monoid_size", "skeleton_roots", "max_dependents"})
          out << key << " " << j[key].dump() << "\n";
      } else {
        emit_json(out, j);
      }
      return kExitTrue;
    }
    if (pump->parsed()) {
      LoadedFunction f = load_function(in1);
      if (k < 1) throw InputError("--k must be at least 1");
      PumpSearch s = pump_search(need_cplc(f, "pump"), static_cast<std::size_t>(k), k, opt.budget);
      nlohmann::json j{{"size", k},
                       {"reached", s.reached},
                       {"explored", s.explored},
                       {"budget_exhausted", s.budget_exhausted}};
      if (s.best)
        j["best"] = {{"pattern", pattern_to_json(s.best->pattern, f.alphabet)},
                     {"polynomial", s.best->poly.to_string()},
                     {"degree", s.best->poly.total_degree()}};
      else
        j["best"] = nullptr;
      emit_json(out, j);
      if (s.reached) return kExitTrue;
      return s.budget_exhausted ? kExitUncertain : kExitFalse;
    }
  } catch (const InputError& e) {
    err << "zpoly: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NotPolynomialGrowth& e) {
    err << "zpoly: " << e.what() << "\n";
    return kExitInputError;
  } catch (const CapExceeded& e) {
    err << "zpoly: " << e.what() << "\n";
    return kExitUncertain;
  } catch (const StarUndefined& e) {
    err << "zpoly: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace zpoly
