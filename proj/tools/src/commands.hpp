#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "app.hpp"

namespace eqrh::cli {

/// Resolved inputs of one job.  docs[i] is null for plain tokens.
struct Context {
  const Options& options;
  std::vector<std::string> args;
  std::vector<Json> docs;

  const Json& doc(std::size_t i) const;
  bq::NormalForm normal_form(std::size_t i) const;
  numkit::Transversal transversal() const { return numkit::Transversal(options.tau, options.offset); }
};

struct CommandResult {
  Json result;
  Json diagnostics = Json::object();
  int exit_code = kOk;
};

struct Command {
  std::size_t min_inputs = 0;
  std::size_t max_inputs = 0;
  bool json_inputs = true;  // false: inputs are plain tokens
  std::function<CommandResult(const Context&)> run;
};

const std::map<std::string, Command>& registry();

}  // namespace eqrh::cli
