#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqlab/rational.hpp"

namespace seqlab {

enum class ExitCode : int { Success = 0, Negative = 1, InputError = 2 };

struct RunConfig {
  std::string command;  // spectral, triangle, ainfty-check, mc-solve, deform, index, dehn, novikov-eval, generate-fixture
  std::vector<std::string> inputs;
  std::optional<Rational> cap;
  std::uint64_t seed = 0;
  std::string out;                          // empty: report is only returned
  std::string tolerance_profile = "default";  // or "strict": dehn tolerances / 100

  std::string mode;  // index: loop | rs | mm | dim
  std::string kind;  // generate-fixture
  int n = 1;
  double lambda = 0.5;
  double delta = 0.1;
  int samples = 200;
};

struct RunResult {
  ExitCode code = ExitCode::Success;
  std::string report;  // JSON text
};

/// Runs one command. Errors never escape: bad input gives exit code 2 with a
/// report {"error", "kind", "pointer"}. The report is written to config.out when set.
RunResult run(const RunConfig& config);

}  // namespace seqlab
