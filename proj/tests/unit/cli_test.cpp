#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "app.hpp"

using namespace eqrh;
using cli::Job;
using cli::Json;

namespace {

const Complex kTau{1.0, -1.0};

Job job(std::string command, std::vector<std::string> inputs = {}) {
  return {std::move(command), std::move(inputs), {}, ""};
}

Complex cx(const Json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

std::string line(Complex z, Complex b) {
  return Json{{"A0", {{cli::to_json(z)}}}, {"B0", {{cli::to_json(b)}}}}.dump();
}

// A = diag(0, tau) + z E12 with the compatible B = diag(1, q).
std::string shear_example() {
  const Complex q = std::exp(kTwoPiI * cli::kGoldenTheta);
  const Json zero = cli::to_json(Complex(0.0)), one = cli::to_json(Complex(1.0));
  Json a0 = {{zero, zero}, {zero, cli::to_json(kTau)}};
  Json a1 = {{zero, one}, {zero, zero}};
  Json b0 = {{one, zero}, {zero, cli::to_json(q)}};
  return Json{{"dim", 2},
              {"A", {{{"pow", 0}, {"coef", a0}}, {{"pow", 1}, {"coef", a1}}}},
              {"B", {{{"pow", 0}, {"coef", b0}}}}}
      .dump();
}

}  // namespace

TEST(Cli, WidthReportMatchesTheWidthFormula) {
  Job j = job("wd");
  j.options.tau = kTau;
  const auto o = cli::run_job(j);
  ASSERT_EQ(o.exit_code, cli::kOk);
  const Json& r = o.report["result"];
  EXPECT_NEAR(r["wd"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(r["g"]["N"].get<int>(), 1);
  EXPECT_NEAR(r["wd_g"].get<double>(), 0.5, 1e-12);
  EXPECT_LT(std::abs(cx(r["gtau"]) - Complex(-0.4, -0.2)), 1e-12);
}

TEST(Cli, HomBetweenLines) {
  const Complex z(0.3, -0.3);
  auto same = cli::run_job(job("hom", {line(z, 2.0), line(z, 2.0)}));
  ASSERT_EQ(same.exit_code, cli::kOk);
  EXPECT_EQ(same.report["result"]["dim"].get<int>(), 1);
  EXPECT_EQ(same.report["result"]["basis"].size(), 1u);
  auto other_b = cli::run_job(job("hom", {line(z, 2.0), line(z, 3.0)}));
  EXPECT_EQ(other_b.report["result"]["dim"].get<int>(), 0);
  auto other_z = cli::run_job(job("hom", {line(z, 2.0), line(0.5 * z, 2.0)}));
  EXPECT_EQ(other_z.report["result"]["dim"].get<int>(), 0);
}

TEST(Cli, NormalizeRemovesTheShear) {
  const auto o = cli::run_job(job("normalize", {shear_example()}));
  ASSERT_EQ(o.exit_code, cli::kOk) << o.report.dump();
  const Json& r = o.report["result"];
  const CMat a0 = cli::matrix_from(r["A0"]), b0 = cli::matrix_from(r["B0"]);
  CMat expected_a(2, 2);
  expected_a << 0.0, 1.0, 0.0, 0.0;
  EXPECT_LT((a0 - expected_a).norm(), 1e-12);
  EXPECT_LT((b0 - CMat::Identity(2, 2)).norm(), 1e-12);
  ASSERT_EQ(r["eigenvalues"].size(), 2u);
  const numkit::Transversal t(kTau, 0.0);
  for (const Json& ev : r["eigenvalues"]) EXPECT_TRUE(t.contains(cx(ev)));
}

TEST(Cli, ReportsAreValidInputs) {
  const Json rep = {{"M1", {{cli::to_json(Complex(2.0)), cli::to_json(Complex(1.0))},
                            {cli::to_json(Complex(0.0)), cli::to_json(Complex(2.0))}}},
                    {"M2", {{cli::to_json(Complex(0.0, 1.0)), cli::to_json(Complex(0.0))},
                            {cli::to_json(Complex(0.0)), cli::to_json(Complex(0.0, 1.0))}}}};
  const auto forward = cli::run_job(job("rh-from-rep", {rep.dump()}));
  ASSERT_EQ(forward.exit_code, cli::kOk);
  const auto back = cli::run_job(job("rh-to-rep", {forward.report.dump()}));
  ASSERT_EQ(back.exit_code, cli::kOk);
  const CMat m1 = cli::matrix_from(back.report["result"]["M1"]), m2 = cli::matrix_from(back.report["result"]["M2"]);
  EXPECT_LT((m1 - cli::matrix_from(rep["M1"])).norm(), 1e-12);
  EXPECT_LT((m2 - cli::matrix_from(rep["M2"])).norm(), 1e-12);

  const auto k0 = cli::run_job(job("k0", {forward.report.dump()}));
  ASSERT_EQ(k0.exit_code, cli::kOk);
  EXPECT_EQ(k0.report["result"]["rank"].get<int>(), 2);
  const auto km = cli::run_job(job("kmap", {k0.report.dump()}));
  ASSERT_EQ(km.exit_code, cli::kOk);
  EXPECT_EQ(km.report["result"]["degree"].get<int>(), 2);
  EXPECT_EQ(km.report["diagnostics"]["forgotten_b_labels"].get<int>(), 1);
  const auto eq = cli::run_job(job("divisor-eq", {km.report.dump(), km.report["result"].dump()}));
  EXPECT_TRUE(eq.report["result"]["equivalent"].get<bool>());
}

TEST(Cli, KernelOfTheZeroMapIsTheSource) {
  const std::string x = line(Complex(0.2, -0.1), 1.5);
  const Json phi = {{cli::to_json(Complex(0.0))}};
  const auto k = cli::run_job(job("kernel", {x, x, phi.dump()}));
  ASSERT_EQ(k.exit_code, cli::kOk) << k.report.dump();
  EXPECT_EQ(k.report["result"]["object"]["dim"].get<int>(), 1);
  const auto c = cli::run_job(job("cokernel", {x, x, phi.dump()}));
  EXPECT_EQ(c.report["result"]["object"]["dim"].get<int>(), 1);
  const auto bad = cli::run_job(job("kernel", {x, x}));
  EXPECT_EQ(bad.exit_code, cli::kInvalid);
}

TEST(Cli, ReportsAreDeterministic) {
  Job j = job("normalize", {shear_example()});
  j.options.seed = 42;
  const auto a = cli::run_job(j), b = cli::run_job(j);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.report["seed"].get<std::uint64_t>(), 42u);
  EXPECT_EQ(a.report["tolerances"]["eps_spec"].get<double>(), 1e-8);
  EXPECT_EQ(a.report["parameters"]["truncation"].get<int>(), 16);
  EXPECT_EQ(a.report["input_digest"].get<std::string>().rfind("sha256:", 0), 0u);

  const auto other = cli::run_job(job("normalize", {line(Complex(0.1, -0.1), 1.0)}));
  EXPECT_NE(a.report["input_digest"], other.report["input_digest"]);
}

TEST(Cli, WhitespaceDoesNotChangeTheDigest) {
  const auto a = cli::run_job(job("dual", {line(Complex(0.1, -0.1), 2.0)}));
  const auto b = cli::run_job(job("dual", {"  " + Json::parse(line(Complex(0.1, -0.1), 2.0)).dump(4)}));
  EXPECT_EQ(a.report["input_digest"], b.report["input_digest"]);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli::run_job(job("frobnicate")).exit_code, cli::kInvalid);

  const auto malformed = cli::run_job(job("normalize", {"{\"A0\": [[1, 2]"}));
  EXPECT_EQ(malformed.exit_code, cli::kInvalid);
  EXPECT_NE(malformed.report["error"]["message"].get<std::string>().find("line 1"), std::string::npos);

  const std::string pole = R"({"dim":1,"A":[{"pow":-1,"coef":[[1]]}],"B":[{"pow":0,"coef":[[1]]}]})";
  const auto invalid = cli::run_job(job("validate", {pole}));
  EXPECT_EQ(invalid.exit_code, cli::kInvalid);
  EXPECT_EQ(invalid.report["error"]["kind"].get<std::string>(), "RegularityViolation");

  EXPECT_EQ(cli::run_job(job("tensor", {line(0.0, 1.0)})).exit_code, cli::kInvalid);
  EXPECT_EQ(cli::run_job(job("phase", {"1", "x"})).exit_code, cli::kInvalid);

  Job strict = job("atheta-check");
  strict.options.tol.eps_res = 1e-30;
  EXPECT_EQ(cli::run_job(strict).exit_code, cli::kNumericFailure);
  EXPECT_EQ(cli::run_job(job("atheta-check")).exit_code, cli::kOk);
}

TEST(Cli, PlainTokenCommands) {
  const auto p = cli::run_job(job("phase", {"0", "5"}));
  ASSERT_EQ(p.exit_code, cli::kOk);
  EXPECT_NEAR(p.report["result"]["phase"].get<double>(), 0.5, 1e-15);

  const auto s = cli::run_job(job("std-bundle", {"1", "0"}));
  ASSERT_EQ(s.exit_code, cli::kOk);
  EXPECT_EQ(s.report["result"]["deg"].get<int>(), 1);
  EXPECT_NEAR(s.report["result"]["rk"].get<double>(), cli::kGoldenTheta, 1e-15);

  const auto r = cli::run_job(job("reduce-tau", {"1.5,-1.5", "-0.25,0.25"}));
  ASSERT_EQ(r.exit_code, cli::kOk);
  const Json& v = r.report["result"]["values"];
  EXPECT_LT(std::abs(cx(v[0]["representative"]) - Complex(0.5, -0.5)), 1e-15);
  EXPECT_EQ(v[0]["shift"].get<int>(), 1);
  EXPECT_EQ(v[1]["shift"].get<int>(), -1);
}

TEST(Cli, BatchKeepsManifestOrder) {
  std::vector<Job> jobs;
  for (int i = 0; i < 12; ++i) {
    const Complex z(0.05 * i, -0.05 * i);
    jobs.push_back(i % 3 == 0 ? job("phase", {std::to_string(i), "1"}) : job("k0", {line(z, 1.0 + i)}));
  }
  jobs.push_back(job("nope"));
  const auto serial = cli::run_batch(jobs, 1), parallel = cli::run_batch(jobs, 4);
  ASSERT_EQ(serial.size(), jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    EXPECT_EQ(serial[i].report.dump(), parallel[i].report.dump());
    EXPECT_EQ(serial[i].report["command"].get<std::string>(), jobs[i].command);
  }
  EXPECT_EQ(parallel.back().exit_code, cli::kInvalid);
}

TEST(Cli, ComplexFlags) {
  EXPECT_EQ(cli::parse_complex_flag("1,-1"), Complex(1.0, -1.0));
  EXPECT_EQ(cli::parse_complex_flag(" 0.5 , 2 "), Complex(0.5, 2.0));
  EXPECT_EQ(cli::parse_complex_flag("3"), Complex(3.0, 0.0));
  EXPECT_THROW(cli::parse_complex_flag("1;2"), Error);
  EXPECT_THROW(cli::parse_complex_flag("a,b"), Error);
}

TEST(Cli, Sha256KnownVector) {
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, MainEntryWritesJson) {
  std::string a0 = "wd", a1 = "--tau", a2 = "1,-1", a3 = "--json";
  char* argv[] = {a0.data(), a0.data(), a1.data(), a2.data(), a3.data()};
  std::ostringstream out, err;
  EXPECT_EQ(cli::main_entry(5, argv, out, err), 0);
  const Json doc = Json::parse(out.str());
  EXPECT_EQ(doc["command"].get<std::string>(), "wd");
  EXPECT_TRUE(err.str().empty());
}
