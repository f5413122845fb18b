#include <iostream>

#include <CLI11.hpp>

#include "spinscat/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spin integral equation scattering solver"};
  app.require_subcommand(1);

  spinscat::CliOptions opt;
  bool corrupt = false;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    CLI::Option* cfg =
        sub->add_option("--config", opt.config_path, "JSON configuration file");
    if (config_required) cfg->required();
    sub->add_option("--threads", opt.threads,
                    "worker threads (0 = runtime default)");
    sub->add_option("--out-dir", opt.out_dir,
                    "directory for output files (default .)");
  };

  CLI::App* selftest = app.add_subcommand(
      "selftest", "run the algebra and kernel property suites");
  add_common(selftest, false);
  selftest
      ->add_flag("--corrupt-structure-constants", corrupt,
                 "test hook: miswire one entry of the reference "
                 "multiplication table to prove failures are detected")
      ->group("");

  CLI::App* solve = app.add_subcommand(
      "solve", "solve a scattering problem; writes fields CSV and report JSON");
  add_common(solve, true);

  CLI::App* verify = app.add_subcommand(
      "verify", "interior-source verification; writes per-probe error CSV");
  add_common(verify, true);

  CLI::App* scan = app.add_subcommand(
      "resonance-scan",
      "smallest singular values of the spin and rotation systems over k_list");
  add_common(scan, true);

  CLI::App* compare = app.add_subcommand(
      "compare-classical",
      "block comparison against the classical boundary integral operators");
  add_common(compare, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (selftest->parsed()) {
    spinscat::apply_thread_count(opt.threads);
    return spinscat::cmd_selftest(corrupt, std::cout);
  }
  if (solve->parsed()) return spinscat::cmd_solve(opt);
  if (verify->parsed()) return spinscat::cmd_verify(opt);
  if (scan->parsed()) return spinscat::cmd_resonance_scan(opt);
  if (compare->parsed()) return spinscat::cmd_compare_classical(opt);
  return 2;
}
