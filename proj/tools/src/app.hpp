#pragma once

// Command dispatch for the eqrh tool.  A Job is one command with its inputs
// and options; running it yields an exit code and a report.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace eqrh::cli {

inline constexpr double kGoldenTheta = 0.6180339887498949;

struct Options {
  Complex tau{1.0, -1.0};
  double theta = kGoldenTheta;
  double offset = 0.0;
  int truncation = 16;
  Tolerances tol;
  std::uint64_t seed = 0;
  int d_max = 64;

  Defaults defaults() const { return {tau, theta, offset}; }
};

struct Job {
  std::string command;
  std::vector<std::string> inputs;  // file paths, "-", inline JSON or plain tokens
  Options options;
  std::string base_dir;             // relative paths resolve against this
};

enum ExitCode : int { kOk = 0, kNumericFailure = 1, kInvalid = 2 };

struct Outcome {
  int exit_code = kOk;
  Json report;
};

const std::vector<std::string>& command_names();

Outcome run_job(const Job& job);

/// Independent jobs on a thread pool; results keep manifest order.
std::vector<Outcome> run_batch(const std::vector<Job>& jobs, unsigned threads = 0);

/// {"jobs": [...]} or a bare array of {"command", "inputs", "options"}.
std::vector<Job> read_manifest(const std::string& path, const Options& defaults);

/// Indented text for people; JSON reports are for pipelines.
std::string render_text(const Json& report);

/// Whole-process entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

// Building blocks exposed for tests.
Complex parse_complex_flag(const std::string& text);
std::string sha256_hex(const std::string& data);

}  // namespace eqrh::cli
