#pragma once

// The four CLI commands. Each turns a JobSpec into a JSON report plus an exit
// code: 0 pass, 1 fail, 2 usage/parse/domain error.

#include <cstdint>
#include <map>
#include <string>

#include "hilbmult/cli/codec.hpp"

namespace hilbmult::cli {

struct JobSpec {
  std::string command;
  Json input;  // null when the command takes no payload
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  std::string suite = "all";
  std::string family = "mult";
};

struct Outcome {
  Json report;
  int exit_code = 0;
};

Outcome run_spectrum(const JobSpec& job);
Outcome run_eval(const JobSpec& job);
Outcome run_verify(const JobSpec& job);
Outcome run_norm(const JobSpec& job);

/// Dispatches on job.command; every engine error becomes an error report.
Outcome run_job(const JobSpec& job);

/// Report for a failure that happened before a JobSpec could be built.
Outcome error_outcome(const std::string& command, std::uint64_t seed, const std::string& message);

/// Canonical text of a report: two-space indent, trailing newline.
std::string render(const Json& report);

}  // namespace hilbmult::cli
