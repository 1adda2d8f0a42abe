#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "picwb/compilers.hpp"
#include "picwb/generators.hpp"
#include "picwb/model_check.hpp"
#include "picwb/normalize.hpp"
#include "picwb/perm.hpp"
#include "picwb/sorted_normalize.hpp"

namespace picwb {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f(read_file(path));
  } catch (const CapExceeded&) {
    throw;
  } catch (const Error& e) {
    std::string msg = e.what();
    if (msg.rfind(path + ":", 0) == 0) throw;
    throw Error(path + ": " + msg);
  }
}

Picture load_picture(const std::string& path) { return with_path(path, [](const std::string& t) { return parse_picture(t); }); }

struct SigFlags {
  std::string encoding = "coordinate";
  int d = 0;
  std::vector<std::string> alphabet;
};

struct Timing {
  int c = 0, c2 = 0;  // 0 = from file, else real time
};

struct Loaded {
  LanguageDef def;
  std::optional<int> d;
  std::optional<Alphabet> sigma;
};

bool looks_json(const std::string& text) {
  auto i = text.find_first_not_of(" \t\r\n");
  return i != std::string::npos && text[i] == '{';
}

Signature signature_of(const SigFlags& f, int d_fallback, const Alphabet* sigma_fallback) {
  Signature sig;
  sig.kind = parse_encoding(f.encoding);
  sig.d = f.d > 0 ? f.d : d_fallback;
  if (!f.alphabet.empty()) sig.alphabet = f.alphabet;
  else if (sigma_fallback) sig.alphabet = *sigma_fallback;
  else throw Error("--alphabet is required for sentences");
  if (sig.d < 1) throw Error("--d must be positive");
  return sig;
}

// Tiling or automaton JSON; anything else is a sentence.
Loaded load_def(const std::string& spec, const SigFlags& sf, const Timing& tm, int d_fallback, const Alphabet* sigma) {
  if (spec == "oracle:mirror" || spec == "oracle:sym") return {OracleDef{spec.substr(7)}, std::nullopt, std::nullopt};
  return with_path(spec, [&](const std::string& text) -> Loaded {
    if (looks_json(text)) {
      auto j = nlohmann::json::parse(text, nullptr, false);
      if (j.is_object() && j.contains("deltas")) {
        auto ts = tiling_from_json(text);
        return {ts, ts.dim(), ts.sigma};
      }
      if (j.is_object() && j.contains("delta")) {
        auto a = automaton_from_json(text);
        int c = 1, c2 = 1;
        if (j.contains("timing")) {
          c = j["timing"].value("c", 1);
          c2 = j["timing"].value("c2", 1);
        }
        if (tm.c) c = tm.c;
        if (tm.c2) c2 = tm.c2;
        return {AutomatonDef{a, c, c2}, a.d, a.sigma};
      }
      throw Error("JSON is neither a tiling system nor an automaton");
    }
    Signature sig = signature_of(sf, d_fallback, sigma);
    auto s = parse_sentence(text, sig);
    return {SentenceDef{s, sig.kind}, sig.d, sig.alphabet};
  });
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << "\n";
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(path + ": cannot write file");
  f << text;
  if (!text.empty() && text.back() != '\n') f << "\n";
}

void add_sig_flags(CLI::App* app, SigFlags& f) {
  app->add_option("--encoding", f.encoding, "pixel or coordinate (sentences only)")->check(CLI::IsMember({"pixel", "coordinate"}));
  app->add_option("--d", f.d, "picture dimension for sentences")->check(CLI::PositiveNumber);
  app->add_option("--alphabet", f.alphabet, "input letters, comma separated")->delimiter(',');
}

void add_timing_flags(CLI::App* app, Timing& t) {
  app->add_option("--c", t.c, "automaton time factor (time = c*n + c2)");
  app->add_option("--c2", t.c2, "automaton time offset");
}

std::string automaton_json_with_timing(const CellularAutomaton& a, int c, int c2) {
  auto j = nlohmann::json::parse(automaton_to_json(a));
  j["timing"] = {{"c", c}, {"c2", c2}};
  return j.dump(2);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Picture-language workbench: tilings, cellular automata and existential second-order logic", "picwb-cli"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.fallthrough();
  std::uint64_t seed = 1;
  int jobs = 1;
  app.add_option("--seed", seed, "seed for randomized commands")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for exhaustive checks")->check(CLI::PositiveNumber)->capture_default_str();

  SigFlags sf;
  Timing tm;
  std::string picture_path, def_path, tiling_path, automaton_path, sentence_path, oracle_name, in_path, out_path;
  std::string mode, a_path, b_path;
  std::size_t state_cap = kDefaultStateCap, work_cap = std::size_t{1} << 15;
  int max_n = 3, d = 1, max_k = kMaxThreshold, gamma_size = 3, sigma_size = 2;

  auto* check = app.add_subcommand("check", "membership of a picture");
  check->add_option("--picture", picture_path, "picture file")->required();
  auto* g = check->add_option_group("definition");
  g->add_option("--tiling", tiling_path, "tiling-system JSON");
  g->add_option("--automaton", automaton_path, "automaton JSON");
  g->add_option("--sentence", sentence_path, "sentence file");
  g->add_option("--oracle", oracle_name, "mirror or sym")->check(CLI::IsMember({"mirror", "sym"}));
  g->require_option(1);
  add_sig_flags(check, sf);
  add_timing_flags(check, tm);

  auto* compile = app.add_subcommand("compile", "translate between formalisms");
  compile->add_option("mode", mode, "tiling-to-eso | eso-to-tiling | ca-to-eso | eso-to-ca")
      ->required()
      ->check(CLI::IsMember({"tiling-to-eso", "eso-to-tiling", "ca-to-eso", "eso-to-ca"}));
  compile->add_option("--in", in_path, "input file")->required();
  compile->add_option("--out", out_path, "output file (default stdout)");
  compile->add_option("--state-cap", state_cap, "eso-to-ca: largest explicit state set")->capture_default_str();
  compile->add_option("--work-cap", work_cap, "eso-to-ca: largest number of solver queries")->capture_default_str();
  add_sig_flags(compile, sf);

  auto* normalize = app.add_subcommand("normalize", "rewrite a sentence into a normal form");
  normalize->add_option("mode", mode, "localize | cardinality | skolem | arity | sorted-pipeline")
      ->required()
      ->check(CLI::IsMember({"localize", "cardinality", "skolem", "arity", "sorted-pipeline"}));
  normalize->add_option("--in", in_path, "input file")->required();
  normalize->add_option("--out", out_path, "output file (default stdout)");
  normalize->add_option("--max-k", max_k, "largest accepted threshold (cardinality)")->capture_default_str();
  add_sig_flags(normalize, sf);

  auto* equiv = app.add_subcommand("equiv", "compare two language definitions on all pictures up to --max-n");
  equiv->add_option("--a", a_path, "first definition (file or oracle:mirror / oracle:sym)")->required();
  equiv->add_option("--b", b_path, "second definition")->required();
  equiv->add_option("--max-n", max_n, "largest side")->check(CLI::PositiveNumber)->capture_default_str();
  add_sig_flags(equiv, sf);
  add_timing_flags(equiv, tm);

  auto* tree = app.add_subcommand("perm-tree", "print the permutation tree");
  tree->add_option("--d", d, "number of coordinates")->required();

  auto* oracle = app.add_subcommand("oracle", "mirror or sym membership");
  oracle->add_option("name", oracle_name, "mirror | sym")->required()->check(CLI::IsMember({"mirror", "sym"}));
  oracle->add_option("--picture", picture_path, "picture file")->required();

  auto* random = app.add_subcommand("random", "emit a seeded random tiling system or automaton");
  random->add_option("kind", mode, "tiling | automaton")->required()->check(CLI::IsMember({"tiling", "automaton"}));
  random->add_option("--d", d, "dimension")->check(CLI::PositiveNumber)->capture_default_str();
  random->add_option("--gamma", gamma_size, "colors or states")->check(CLI::PositiveNumber)->capture_default_str();
  random->add_option("--sigma", sigma_size, "input letters")->check(CLI::PositiveNumber)->capture_default_str();
  random->add_option("--out", out_path, "output file (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  auto verdict = [&](bool member) {
    out << "VERDICT: " << (member ? "MEMBER" : "NON-MEMBER") << "\n";
    return member ? 0 : 1;
  };

  try {
    if (check->parsed()) {
      Picture p = load_picture(picture_path);
      std::string spec = !tiling_path.empty()      ? tiling_path
                         : !automaton_path.empty() ? automaton_path
                         : !sentence_path.empty()  ? sentence_path
                                                   : "oracle:" + oracle_name;
      Loaded l = load_def(spec, sf, tm, p.dim(), &p.alphabet());
      return verdict(member(l.def, p));
    }
    if (oracle->parsed()) {
      Picture p = load_picture(picture_path);
      return verdict(oracle_name == "mirror" ? mirror_member(p) : sym_member(p));
    }
    if (tree->parsed()) {
      out << dump_perm_tree(build_perm_tree(d));
      return 0;
    }
    if (random->parsed()) {
      std::mt19937_64 rng(seed);
      if (mode == "tiling") write_output(out_path, tiling_to_json(random_tiling_system(rng, d, gamma_size, sigma_size)), out);
      else write_output(out_path, automaton_to_json(random_automaton(rng, d, std::max(gamma_size, sigma_size), sigma_size)), out);
      return 0;
    }
    if (compile->parsed()) {
      if (mode == "tiling-to-eso") {
        auto ts = with_path(in_path, [](const std::string& t) { return tiling_from_json(t); });
        write_output(out_path, render_sentence(tiling_to_sentence(ts)), out);
      } else if (mode == "ca-to-eso") {
        auto a = with_path(in_path, [](const std::string& t) { return automaton_from_json(t); });
        write_output(out_path, render_sentence(automaton_to_sentence(a)), out);
      } else {
        if (sf.d == 0) sf.d = 1;
        Signature sig = signature_of(sf, 1, nullptr);
        if (mode == "eso-to-tiling") sig.kind = Encoding::Pixel;
        auto s = with_path(in_path, [&](const std::string& t) { return parse_sentence(t, sig); });
        if (mode == "eso-to-tiling") {
          write_output(out_path, tiling_to_json(sentence_to_tiling(s)), out);
        } else {
          auto ca = sentence_to_automaton(s);
          write_output(out_path, automaton_json_with_timing(to_explicit(ca.automaton, state_cap, work_cap), ca.c, ca.c2), out);
        }
      }
      return 0;
    }
    if (normalize->parsed()) {
      if (sf.d == 0) sf.d = 1;
      Signature sig = signature_of(sf, 1, nullptr);
      if (mode == "cardinality") {
        auto c = with_path(in_path, [&](const std::string& t) { return parse_cardinality(t, sig); });
        write_output(out_path, render_sentence(cardinality_to_monadic(c, max_k)), out);
        return 0;
      }
      auto s = with_path(in_path, [&](const std::string& t) { return parse_sentence(t, sig); });
      EsoSentence r = mode == "localize" ? localize_pixel_sentence(s).sentence
                      : mode == "skolem" ? skolemize_universal(s)
                      : mode == "arity"  ? reduce_arities(s)
                                         : sort_pipeline(s);
      write_output(out_path, render_sentence(r), out);
      return 0;
    }
    if (equiv->parsed()) {
      Loaded a = load_def(a_path, sf, tm, sf.d, nullptr);
      Loaded b = load_def(b_path, sf, tm, sf.d > 0 ? sf.d : a.d.value_or(0), a.sigma ? &*a.sigma : nullptr);
      if (!a.d && !b.d && sf.d == 0) throw Error("--d is required when neither definition fixes the dimension");
      if (!a.sigma && !b.sigma && sf.alphabet.empty()) throw Error("--alphabet is required");
      int dim = a.d ? *a.d : b.d ? *b.d : sf.d;
      Alphabet sigma = a.sigma ? *a.sigma : b.sigma ? *b.sigma : sf.alphabet;
      if ((a.d && *a.d != dim) || (b.d && *b.d != dim)) throw Error("definitions have different dimensions");
      EquivOptions opt;
      opt.jobs = jobs;
      auto cex = equivalent_up_to(a.def, b.def, dim, sigma, max_n, opt);
      if (!cex) {
        out << "EQUIVALENT up to n=" << max_n << "\n";
        return 0;
      }
      out << "VERDICT: INEQUIVALENT (a=" << (cex->verdict_a ? "member" : "non-member")
          << ", b=" << (cex->verdict_b ? "member" : "non-member") << ")\n";
      out << "COUNTEREXAMPLE: " << picture_inline(cex->picture) << "\n";
      return 1;
    }
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace picwb
