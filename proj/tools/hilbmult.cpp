#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "hilbmult/cli/commands.hpp"

namespace {

using namespace hilbmult::cli;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hilbmult::UsageError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& specs) {
  std::map<std::string, double> out;
  for (const auto& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw hilbmult::UsageError("--tol expects name=value, got '" + s + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() - eq - 1 || !(v >= 0.0))
      throw hilbmult::UsageError("--tol value for '" + s.substr(0, eq) + "' is not a nonnegative number");
    out[s.substr(0, eq)] = v;
  }
  return out;
}

int emit(const Outcome& outcome, const std::string& out_path) {
  const std::string text = render(outcome.report);
  if (out_path.empty() || out_path == "-") {
    std::cout << text << std::flush;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "hilbmult: cannot write '" << out_path << "'\n";
      return 2;
    }
    out << text;
  }
  if (outcome.exit_code == 2 && outcome.report.contains("error"))
    std::cerr << "hilbmult: " << outcome.report["error"].get<std::string>() << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilinear maps, spectral calculus and their invariant checks"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::vector<std::string> tols;
  std::string suite = "all", family = "mult", out_path, in_path;
  bool basis = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "64-bit seed for randomized steps");
    sub->add_option("--tol", tols, "tolerance override name=value (repeatable)");
    sub->add_option("--out", out_path, "report path (default: standard output)");
  };

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  add_common(verify);
  verify->add_option("--suite", suite, "axioms|duality|spectral|calculus|covariance|grid|all");
  verify->add_option("--family", family, "family for the calculus suite: mult|add");

  auto* eval = app.add_subcommand("eval", "evaluate the polynomial calculus on inputs");
  add_common(eval);
  eval->add_option("--family", family, "mult|add (a payload \"family\" field wins)");
  eval->add_option("input", in_path, "JSON payload file (default: standard input)");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of a Hermitian or normal matrix");
  add_common(spectrum);
  spectrum->add_flag("--basis", basis, "also report the eigenbasis");
  spectrum->add_option("input", in_path, "JSON payload file (default: standard input)");

  auto* norm = app.add_subcommand("norm", "norm bracket of a multilinear map");
  add_common(norm);
  norm->add_option("input", in_path, "JSON payload file (default: standard input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  JobSpec job;
  job.command = command;
  job.seed = seed;
  job.suite = suite;
  job.family = family;
  try {
    job.tolerances = parse_tolerances(tols);
    if (command != "verify") {
      job.input = parse_document(read_input(in_path));
      if (command == "spectrum" && basis) {
        if (job.input.is_array()) job.input = Json{{"matrix", job.input}};
        if (job.input.is_object()) job.input["basis"] = true;
      }
    }
  } catch (const hilbmult::Error& e) {
    return emit(error_outcome(command, seed, e.what()), out_path);
  }
  return emit(run_job(job), out_path);
}
