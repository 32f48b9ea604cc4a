// Workbench CLI: evaluation, counterexample verification, prefix games, and
// preservation checks over finite relational structures.
//
// Exit codes: 0 pass/true/Duplicator, 1 semantic fail/Spoiler, 2 input or
// usage error, 3 budget exceeded.

#include <cctype>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmtwb/counterexample.hpp"
#include "fmtwb/errors.hpp"
#include "fmtwb/eval.hpp"
#include "fmtwb/games.hpp"
#include "fmtwb/parser.hpp"
#include "fmtwb/prenex.hpp"
#include "fmtwb/preservation.hpp"
#include "fmtwb/report.hpp"
#include "fmtwb/structure_io.hpp"

namespace {

using namespace fmtwb;

constexpr std::uint64_t default_budget = 100000000;

std::uint64_t env_budget() {
  if (const char* env = std::getenv("FMT_WORKBENCH_BUDGET")) {
    try {
      return parse_number(env);
    } catch (const Error&) {
      fail(Errc::precondition_failed,
           std::string("FMT_WORKBENCH_BUDGET is not a number: ") + env);
    }
  }
  return default_budget;
}

// Built-in sentence names: phi, phi-prenex, xi1..xi5 (instantiated at --k),
// domset<digits>; anything else is parsed as formula text.
FormulaPtr named_formula(const std::string& text, int k, const Vocabulary* vocab) {
  if (text == "phi") return phi(k);
  if (text == "phi-prenex") return phi_prenex(k);
  if (text.size() == 3 && text.compare(0, 2, "xi") == 0 && text[2] >= '1' &&
      text[2] <= '5')
    return xi(text[2] - '0', k);
  if (text.compare(0, 6, "domset") == 0 && text.size() > 6 &&
      text.find_first_not_of("0123456789", 6) == std::string::npos)
    return dominating_set_sentence(std::stoi(text.substr(6)));
  if (vocab) return parse_formula(text, *vocab);
  return parse_formula_inferring(text).formula;
}

// Vocabulary a named or free-form sentence speaks, for family construction.
VocabularyPtr formula_vocabulary(const std::string& text, int k) {
  if (text == "phi" || text == "phi-prenex" ||
      (text.size() == 3 && text.compare(0, 2, "xi") == 0))
    return tau();
  if (text.compare(0, 6, "domset") == 0) return graph_vocabulary();
  (void)k;
  return std::make_shared<const Vocabulary>(parse_formula_inferring(text).vocab);
}

// Family specifications: `all` (with --max-size, over the sentence's
// vocabulary), `A<n><k>-lattice` (the block structure whose substructure
// lattice the hereditary checks explore), or a list of structure files.
std::vector<Structure> resolve_family(const std::string& spec, int max_size,
                                      const std::vector<std::string>& files,
                                      const std::string& formula_text, int k) {
  if (!spec.empty() && !files.empty())
    fail(Errc::precondition_failed, "give either --family or --family-file, not both");
  if (spec.empty() && files.empty())
    fail(Errc::precondition_failed, "a family is required (--family or --family-file)");
  std::vector<Structure> family;
  if (!files.empty()) {
    for (const std::string& path : files) family.push_back(read_structure_file(path));
    return family;
  }
  if (spec == "all") {
    if (max_size < 1)
      fail(Errc::precondition_failed, "--family all needs --max-size >= 1");
    return enumerate_family(formula_vocabulary(formula_text, k), max_size);
  }
  if (spec.size() >= 3 && spec.front() == 'A' && spec.size() > std::string("A-lattice").size() &&
      spec.substr(spec.size() - 8) == "-lattice") {
    const std::string digits = spec.substr(1, spec.size() - 9);
    if (digits.size() == 2 && std::isdigit(static_cast<unsigned char>(digits[0])) &&
        std::isdigit(static_cast<unsigned char>(digits[1]))) {
      CxParams p{digits[0] - '0', digits[1] - '0'};
      family.push_back(build_a(p));
      return family;
    }
  }
  fail(Errc::precondition_failed, "unknown family specification '" + spec + "'");
}

void print_structure_lines(Record& record, const std::string& prefix, const Structure& s) {
  std::istringstream text(write_structure(s));
  std::string line;
  while (std::getline(text, line)) record.add(prefix, line);
}

void emit(const Record& record, bool machine, const std::string& human) {
  if (machine)
    std::cout << record.serialize();
  else
    std::cout << human;
}

int cmd_eval(const std::string& structure_file, const std::string& formula_text,
             int k, bool machine) {
  const Structure s = read_structure_file(structure_file);
  const FormulaPtr f = named_formula(formula_text, k, &s.vocab());
  const bool verdict = evaluate(s, *f);
  Record record;
  record.add("kind", "eval");
  record.add("formula", render(*f));
  record.add_flag("verdict", verdict);
  emit(record, machine, std::string(verdict ? "true" : "false") + "\n");
  return 0;
}

int cmd_counterexample(int n, int k, bool exhaustive, std::uint64_t sample,
                       std::uint64_t seed, std::uint64_t budget, int jobs,
                       const std::string& export_dir, bool machine) {
  const CxParams p{n, k};
  validate(p);
  if (!export_dir.empty()) {
    write_structure_file(build_a(p), export_dir + "/A.struct");
    for (int i = 0; i <= k; ++i)
      write_structure_file(build_b(p, i), export_dir + "/B" + std::to_string(i) + ".struct");
  }
  VerifyOptions options;
  options.exhaustive = exhaustive;
  options.sample_count = sample;
  options.seed = seed;
  options.budget = budget;
  options.jobs = jobs;
  const VerifyReport report = verify_counterexample(p, options);

  std::ostringstream human;
  human << "counterexample n=" << n << " k=" << k
        << (report.exhaustive ? " exhaustive" : " sampled") << "\n";
  for (const CheckResult& c : report.checks) {
    human << "  " << c.name << ": "
          << (c.skipped ? "skipped" : (c.pass ? "pass" : "FAIL")) << " (" << c.checked
          << " checked)";
    if (!c.detail.empty()) human << " " << c.detail;
    human << "\n";
  }
  human << "  pairs=" << report.pairs_checked << " failures=" << report.strategy_failures
        << " plan-violations=" << report.plan_violations << "\n";
  human << (report.pass ? "PASS" : "FAIL") << "\n";
  emit(to_record(report), machine, human.str());
  return report.pass ? 0 : 1;
}

int cmd_game(const std::string& file_a, const std::string& file_b, int k, int n,
             std::uint64_t budget, bool machine) {
  const Structure a = read_structure_file(file_a);
  const Structure b = read_structure_file(file_b);
  const GameConfig cfg{k, n, budget};
  const GameOutcome outcome = solve_prefix_game(a, b, cfg);

  std::ostringstream human;
  human << (outcome.winner == Winner::duplicator ? "duplicator" : "spoiler") << " wins ("
        << outcome.positions << " positions)\n";
  if (outcome.certificate.elided)
    human << "certificate elided\n";
  else if (outcome.winner == Winner::spoiler) {
    human << "spoiler witness:";
    for (Element e : outcome.certificate.sp_a) human << ' ' << e;
    human << "\n";
  } else {
    human << "strategy table: " << outcome.certificate.dup_b.size() << " replies, "
          << outcome.certificate.dup_f.size() << " answers\n";
  }
  emit(to_record(outcome, cfg), machine, human.str());
  return outcome.winner == Winner::duplicator ? 0 : 1;
}

int preserve_exit(const PropertyVerdict& verdict, bool machine, const std::string& what) {
  Record record;
  record.add("kind", "preserve");
  record.add("property", what);
  record.add_flag("holds", verdict.holds);
  if (!verdict.detail.empty()) record.add("detail", verdict.detail);
  if (verdict.witness) print_structure_lines(record, "witness.line", *verdict.witness);
  // A substructure's universe is rarely 1..N, which the text format requires;
  // its kept-element set determines it relative to the witness.
  if (verdict.witness_substructure)
    record.add_tuple("witness.substructure.elements",
                     verdict.witness_substructure->universe());
  for (const Structure& member : verdict.witness_cover)
    print_structure_lines(record, "witness.cover.line", member);

  std::ostringstream human;
  human << what << ": " << (verdict.holds ? "holds" : "fails") << "\n";
  if (!verdict.detail.empty()) human << "  " << verdict.detail << "\n";
  if (verdict.witness) human << "offending structure:\n" << write_structure(*verdict.witness);
  if (verdict.witness_substructure) {
    human << "offending substructure keeps:";
    for (Element e : verdict.witness_substructure->universe()) human << ' ' << e;
    human << "\n";
  }
  if (!verdict.witness_cover.empty())
    human << "cover of " << verdict.witness_cover.size() << " members omitted from text output\n";
  emit(record, machine, human.str());
  return verdict.holds ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite model theory workbench"};
  app.require_subcommand(1);
  bool machine = false;
  app.add_flag("--machine", machine, "line-oriented machine-readable output");

  std::uint64_t budget = default_budget;
  try {
    budget = env_budget();
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::string eval_structure, eval_formula;
  int eval_k = 0;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a sentence on a structure");
  eval_cmd->add_option("structure", eval_structure, "structure file")->required();
  eval_cmd->add_option("formula", eval_formula, "sentence text or built-in name")->required();
  eval_cmd->add_option("--k", eval_k, "parameter for built-in sentence families");

  int cx_n = 1, cx_k = 0, cx_jobs = 1;
  bool cx_exhaustive = false;
  std::uint64_t cx_sample = 0, cx_seed = 0;
  std::string cx_export;
  CLI::App* cx_cmd = app.add_subcommand("counterexample", "verify the block construction");
  cx_cmd->add_option("--n", cx_n, "universal budget (>= 1)")->required();
  cx_cmd->add_option("--k", cx_k, "existential budget (>= 0)")->required();
  cx_cmd->add_flag("--exhaustive", cx_exhaustive, "check the full pair grid");
  cx_cmd->add_option("--sample", cx_sample, "sampled pair count");
  cx_cmd->add_option("--seed", cx_seed, "sample seed");
  cx_cmd->add_option("--budget", budget, "pair budget for exhaustive mode");
  cx_cmd->add_option("--jobs", cx_jobs, "worker threads");
  cx_cmd->add_option("--export-structures", cx_export, "directory for A/B text files");

  std::string game_a, game_b;
  int game_k = 0, game_n = 0;
  CLI::App* game_cmd = app.add_subcommand("game", "solve the prefix game on two structures");
  game_cmd->add_option("structA", game_a, "first structure file")->required();
  game_cmd->add_option("structB", game_b, "second structure file")->required();
  game_cmd->add_option("--k", game_k, "witness picks")->required();
  game_cmd->add_option("--n", game_n, "universal picks")->required();
  game_cmd->add_option("--budget", budget, "position budget");

  CLI::App* pres_cmd = app.add_subcommand("preserve", "preservation checks");
  pres_cmd->require_subcommand(1);
  std::string pres_formula, pres_family, pres_structure, pres_host, pres_base;
  std::vector<std::string> pres_family_files, pres_members;
  std::vector<int> pres_crux_set;
  int pres_k = 0, pres_max_size = 0;

  CLI::App* her_cmd = pres_cmd->add_subcommand("hereditary", "substructure preservation");
  her_cmd->add_option("--formula", pres_formula)->required();
  her_cmd->add_option("--k", pres_k, "crux budget; omit for plain hereditariness");
  her_cmd->add_option("--family", pres_family);
  her_cmd->add_option("--family-file", pres_family_files);
  her_cmd->add_option("--max-size", pres_max_size);
  bool her_use_k = false;
  her_cmd->add_flag("--k-hereditary", her_use_k, "check k-cruxes instead");

  CLI::App* crux_cmd = pres_cmd->add_subcommand("crux", "find or check crux sets");
  crux_cmd->add_option("--structure", pres_structure)->required();
  crux_cmd->add_option("--formula", pres_formula)->required();
  crux_cmd->add_option("--k", pres_k)->required();
  crux_cmd->add_option("--set", pres_crux_set, "check this element set instead of searching");

  CLI::App* cover_cmd = pres_cmd->add_subcommand("cover", "k-ary cover check");
  cover_cmd->add_option("--host", pres_host)->required();
  cover_cmd->add_option("--member", pres_members, "member structure files")->required();
  cover_cmd->add_option("--k", pres_k)->required();
  cover_cmd->add_option("--base", pres_base, "check a cover of this base inside the host");

  CLI::App* dual_cmd = pres_cmd->add_subcommand("duality", "hereditary/extension duality");
  dual_cmd->add_option("--formula", pres_formula)->required();
  dual_cmd->add_option("--k", pres_k)->required();
  dual_cmd->add_option("--family", pres_family);
  dual_cmd->add_option("--family-file", pres_family_files);
  dual_cmd->add_option("--max-size", pres_max_size);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems are input errors (exit 2); --help stays a success.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*eval_cmd) return cmd_eval(eval_structure, eval_formula, eval_k, machine);
    if (*cx_cmd) {
      if (cx_exhaustive == (cx_sample > 0))
        fail(Errc::precondition_failed, "choose exactly one of --exhaustive / --sample");
      return cmd_counterexample(cx_n, cx_k, cx_exhaustive, cx_sample, cx_seed, budget,
                                cx_jobs, cx_export, machine);
    }
    if (*game_cmd) return cmd_game(game_a, game_b, game_k, game_n, budget, machine);

    if (*her_cmd) {
      const FormulaPtr f = named_formula(pres_formula, pres_k, nullptr);
      const std::vector<Structure> family = resolve_family(
          pres_family, pres_max_size, pres_family_files, pres_formula, pres_k);
      const PropertyVerdict verdict = her_use_k
                                          ? is_k_hereditary_over(f, family, pres_k)
                                          : is_hereditary_over(f, family);
      return preserve_exit(verdict, machine, her_use_k ? "k-hereditary" : "hereditary");
    }
    if (*crux_cmd) {
      const Structure s = read_structure_file(pres_structure);
      const FormulaPtr f = named_formula(pres_formula, pres_k, &s.vocab());
      if (!pres_crux_set.empty() || crux_cmd->count("--set") > 0) {
        const bool ok = is_crux(s, pres_crux_set, f, pres_k);
        Record record;
        record.add("kind", "crux");
        record.add_tuple("set", pres_crux_set);
        record.add_flag("is.crux", ok);
        emit(record, machine, std::string(ok ? "true" : "false") + "\n");
        return ok ? 0 : 1;
      }
      const CruxReport report = find_k_cruxes(s, f, pres_k);
      Record record;
      record.add("kind", "crux");
      record.add("structure", report.structure_label);
      record.add_num("k", static_cast<std::uint64_t>(report.k));
      record.add_flag("exhaustive", report.exhaustive);
      record.add_num("crux.count", report.cruxes.size());
      std::ostringstream human;
      human << "cruxes (" << report.cruxes.size() << "):\n";
      for (const auto& c : report.cruxes) {
        record.add_tuple("crux", c);
        human << " ";
        if (c.empty()) human << " (empty set)";
        for (Element e : c) human << ' ' << e;
        human << "\n";
      }
      emit(record, machine, human.str());
      return report.cruxes.empty() ? 1 : 0;
    }
    if (*cover_cmd) {
      const Structure host = read_structure_file(pres_host);
      std::vector<Structure> members;
      for (const std::string& path : pres_members)
        members.push_back(read_structure_file(path));
      const bool ok = pres_base.empty()
                          ? is_k_ary_cover(host, members, pres_k)
                          : is_k_ary_cover_in(read_structure_file(pres_base), host,
                                              members, pres_k);
      Record record;
      record.add("kind", "cover");
      record.add_num("k", static_cast<std::uint64_t>(pres_k));
      record.add_flag("is.cover", ok);
      emit(record, machine, std::string(ok ? "true" : "false") + "\n");
      return ok ? 0 : 1;
    }
    if (*dual_cmd) {
      const FormulaPtr f = named_formula(pres_formula, pres_k, nullptr);
      const std::vector<Structure> family = resolve_family(
          pres_family, pres_max_size, pres_family_files, pres_formula, pres_k);
      return preserve_exit(check_duality(f, family, pres_k), machine, "duality");
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == Errc::budget_exceeded ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
