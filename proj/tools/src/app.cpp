#include "app.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"

namespace eqrh::cli {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

bool looks_inline(const std::string& s) {
  const std::string t = trim(s);
  return !t.empty() && (t.front() == '{' || t.front() == '[');
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open input '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string resolve(const std::string& path, const std::string& base) {
  if (base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).string();
}

Json load_input(const std::string& arg, const std::string& base) {
  if (looks_inline(arg)) return parse_document(arg, "inline input");
  if (arg == "-") {
    const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    return parse_document(text, "stdin");
  }
  const std::string path = resolve(arg, base);
  return parse_document(read_file(path), arg);
}

Json tolerances_json(const Tolerances& t) {
  return {{"eps_spec", t.eps_spec}, {"eps_res", t.eps_res}, {"eps_key", t.eps_key}};
}

Json parameters_json(const Options& o) {
  return {{"tau", to_json(o.tau)},
          {"theta", o.theta},
          {"transversal_offset", o.offset},
          {"truncation", o.truncation},
          {"d_max", o.d_max}};
}

Json base_report(const Job& job) {
  return {{"command", job.command},
          {"parameters", parameters_json(job.options)},
          {"tolerances", tolerances_json(job.options.tol)},
          {"seed", job.options.seed}};
}

Outcome failure(Json report, int code, const std::string& kind, const std::string& message) {
  report["status"] = code == kInvalid ? "invalid" : "numeric_failure";
  report["error"] = {{"kind", kind}, {"message", message}};
  return {code, std::move(report)};
}

void apply_options(const Json& j, Options& o) {
  if (!j.is_object()) fail(ErrorKind::ParseError, "job options must be an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "tau") o.tau = complex_from(v, "tau");
    else if (key == "theta") o.theta = v.get<double>();
    else if (key == "transversal_offset") o.offset = v.get<double>();
    else if (key == "truncation") o.truncation = v.get<int>();
    else if (key == "tol_spec") o.tol.eps_spec = v.get<double>();
    else if (key == "tol_res") o.tol.eps_res = v.get<double>();
    else if (key == "tol_key") o.tol.eps_key = v.get<double>();
    else if (key == "seed") o.seed = v.get<std::uint64_t>();
    else if (key == "d_max") o.d_max = v.get<int>();
    else fail(ErrorKind::ParseError, "unknown job option '" + key + "'");
  }
}

void check_options(const Options& o) {
  o.tol.validate();
  if (!(o.theta > 0.0 && o.theta < 1.0)) fail(ErrorKind::InvalidArgument, "theta must lie in (0, 1)");
  if (o.tau.imag() == 0.0) fail(ErrorKind::InvalidArgument, "tau must not be real");
  if (o.truncation < 1) fail(ErrorKind::InvalidArgument, "truncation must be at least 1");
  if (o.d_max < 1) fail(ErrorKind::InvalidArgument, "d_max must be at least 1");
}

}  // namespace

Complex parse_complex_flag(const std::string& text) {
  const std::string t = trim(text);
  const auto comma = t.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(t, &used);
      if (used == t.size()) return {re, 0.0};
    } else {
      const std::string a = trim(t.substr(0, comma)), b = trim(t.substr(comma + 1));
      std::size_t ub = 0;
      const double re = std::stod(a, &used), im = std::stod(b, &ub);
      if (used == a.size() && ub == b.size()) return {re, im};
    }
  } catch (const std::exception&) {
  }
  fail(ErrorKind::InvalidArgument, "expected a complex number as 're,im', got '" + text + "'");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, cmd] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

Outcome run_job(const Job& job) {
  Json report = base_report(job);
  const auto& reg = registry();
  const auto it = reg.find(job.command);
  if (it == reg.end()) {
    std::string known;
    for (const auto& n : command_names()) known += (known.empty() ? "" : ", ") + n;
    return failure(std::move(report), kInvalid, "UnknownCommand",
                   "unknown command '" + job.command + "'; expected one of " + known);
  }
  const Command& cmd = it->second;
  try {
    check_options(job.options);
    if (job.inputs.size() < cmd.min_inputs || job.inputs.size() > cmd.max_inputs) {
      std::ostringstream os;
      os << job.command << " takes ";
      if (cmd.min_inputs == cmd.max_inputs) os << cmd.min_inputs;
      else os << cmd.min_inputs << " to " << cmd.max_inputs;
      os << " input(s), got " << job.inputs.size();
      fail(ErrorKind::InvalidArgument, os.str());
    }
    Context ctx{job.options, job.inputs, {}};
    std::string digest_source = job.command;
    for (const auto& arg : job.inputs) {
      digest_source.push_back('\0');
      if (cmd.json_inputs) {
        ctx.docs.push_back(load_input(arg, job.base_dir));
        digest_source += ctx.docs.back().dump();
      } else {
        digest_source += trim(arg);
      }
    }
    report["input_digest"] = "sha256:" + sha256_hex(digest_source);
    CommandResult r = cmd.run(ctx);
    report["result"] = std::move(r.result);
    report["diagnostics"] = std::move(r.diagnostics);
    report["status"] = r.exit_code == kOk ? "ok" : "check_failed";
    return {r.exit_code, std::move(report)};
  } catch (const Error& e) {
    const std::string kind(to_string(e.kind()));
    std::string message = e.what();
    if (message.rfind(kind + ": ", 0) == 0) message.erase(0, kind.size() + 2);
    return failure(std::move(report), is_input_error(e.kind()) ? kInvalid : kNumericFailure, kind, message);
  } catch (const Json::exception& e) {
    return failure(std::move(report), kInvalid, "ParseError", e.what());
  } catch (const std::exception& e) {
    return failure(std::move(report), kNumericFailure, "InternalError", e.what());
  }
}

std::vector<Outcome> run_batch(const std::vector<Job>& jobs, unsigned threads) {
  std::vector<Outcome> out(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) out[i] = run_job(jobs[i]);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::vector<Job> read_manifest(const std::string& path, const Options& defaults) {
  const Json doc = parse_document(read_file(path), path);
  const Json& list = doc.is_object() && doc.contains("jobs") ? doc["jobs"] : doc;
  if (!list.is_array()) fail(ErrorKind::ParseError, path + ": expected a list of jobs");
  const std::string base = fs::path(path).parent_path().string();
  std::vector<Job> jobs;
  for (const Json& j : list) {
    if (!j.is_object() || !j.contains("command") || !j["command"].is_string())
      fail(ErrorKind::ParseError, path + ": every job needs a \"command\" string");
    Job job{j["command"].get<std::string>(), {}, defaults, base};
    if (j.contains("inputs")) {
      if (!j["inputs"].is_array()) fail(ErrorKind::ParseError, path + ": \"inputs\" must be a list");
      for (const Json& in : j["inputs"]) job.inputs.push_back(in.is_string() ? in.get<std::string>() : in.dump());
    }
    if (j.contains("options")) apply_options(j["options"], job.options);
    jobs.push_back(std::move(job));
  }
  return jobs;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equivariant Riemann-Hilbert toolkit: normal forms, representations, tensor structure, K0."};
  app.set_version_flag("--version", "eqrh 0.1.0");

  std::string command;
  std::vector<std::string> inputs;
  std::string tau_text, batch, output;
  bool json = false;
  unsigned threads = 0;
  Options opt;

  std::string commands_help = "One of:";
  for (const auto& n : command_names()) commands_help += " " + n;
  app.add_option("command", command, commands_help);
  app.add_option("inputs", inputs, "JSON files, '-' for stdin, inline JSON, or plain arguments");
  app.add_option("--tau", tau_text, "tau as re,im (default 1,-1)");
  app.add_option("--theta", opt.theta, "theta in (0, 1) (default (sqrt 5 - 1) / 2)");
  app.add_option("--transversal-offset", opt.offset, "strip offset a");
  app.add_option("--truncation", opt.truncation, "series truncation order K");
  app.add_option("--tol-spec", opt.tol.eps_spec, "eigenvalue clustering radius");
  app.add_option("--tol-res", opt.tol.eps_res, "residual acceptance level");
  app.add_option("--tol-key", opt.tol.eps_key, "K0 key and divisor point radius");
  app.add_option("--seed", opt.seed, "seed recorded in reports and used by randomized searches");
  app.add_option("--d-max", opt.d_max, "largest root-of-unity order tried by nori");
  app.add_flag("--json", json, "emit JSON reports");
  app.add_option("--batch", batch, "run the jobs of a manifest in parallel");
  app.add_option("--threads", threads, "worker threads for --batch (default: all cores)");
  app.add_option("-o,--output", output, "write the report to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "eqrh: " << e.what() << "\n";
    return kInvalid;
  }

  try {
    if (!tau_text.empty()) opt.tau = parse_complex_flag(tau_text);
  } catch (const Error& e) {
    err << "eqrh: " << e.what() << "\n";
    return kInvalid;
  }

  std::vector<Outcome> outcomes;
  bool batched = !batch.empty();
  if (batched) {
    if (!command.empty()) {
      err << "eqrh: --batch takes no command\n";
      return kInvalid;
    }
    try {
      outcomes = run_batch(read_manifest(batch, opt), threads);
    } catch (const Error& e) {
      err << "eqrh: " << e.what() << "\n";
      return kInvalid;
    }
  } else {
    if (command.empty()) {
      err << "eqrh: missing command\n" << app.help();
      return kInvalid;
    }
    outcomes.push_back(run_job({command, inputs, opt, ""}));
  }

  std::ostringstream text;
  int code = kOk;
  for (const auto& o : outcomes) {
    if (o.exit_code == kInvalid || code == kInvalid) code = kInvalid;
    else code = std::max(code, o.exit_code);
  }
  if (json) {
    const Json doc = batched ? Json{{"jobs", [&] {
                                      Json a = Json::array();
                                      for (const auto& o : outcomes) a.push_back(o.report);
                                      return a;
                                    }()}}
                             : outcomes.front().report;
    text << doc.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (batched) text << (i ? "\n" : "") << "# job " << i + 1 << "\n";
      text << render_text(outcomes[i].report);
    }
  }
  for (const auto& o : outcomes)
    if (o.report.contains("error"))
      err << "eqrh: " << o.report["error"]["kind"].get<std::string>() << ": "
          << o.report["error"]["message"].get<std::string>() << "\n";

  if (!output.empty()) {
    std::ofstream f(output, std::ios::binary);
    if (!f) {
      err << "eqrh: cannot write '" << output << "'\n";
      return kInvalid;
    }
    f << text.str();
  } else {
    out << text.str();
  }
  return code;
}

}  // namespace eqrh::cli
