#pragma once

#include <iosfwd>
#include <string>

namespace spinscat {

// Shared subcommand options. threads = 0 leaves the runtime defaults; output
// file names from the config are resolved against out_dir unless absolute.
struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
};

void apply_thread_count(int threads);

// Exit codes: 0 success, 1 selftest failure, 2 config error, 3 solve or
// evaluation failure, 4 tolerance not met.

// Algebra and kernel property suite; JSON summary {passed, failed, failures}
// on `out`. corrupt_structure_constants is a test hook that miswires one
// entry of the reference multiplication table to prove failures are caught.
int cmd_selftest(bool corrupt_structure_constants, std::ostream& out);

// Solve one scattering problem and write the field CSV and the report JSON.
int cmd_solve(const CliOptions& opt);

// Interior-source verification; writes the per-probe error CSV and a summary
// JSON, exit 4 when the max relative error exceeds the threshold.
int cmd_verify(const CliOptions& opt);

// Smallest singular values of the spin and rotation systems over k_list;
// CSV sorted by k.
int cmd_resonance_scan(const CliOptions& opt);

// Block comparison of the compressed Cauchy operator against the classical
// boundary integral operators; JSON output.
int cmd_compare_classical(const CliOptions& opt);

}  // namespace spinscat
