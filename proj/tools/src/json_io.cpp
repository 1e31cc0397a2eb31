#include "json_io.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace eqrh::cli {

namespace {

[[noreturn]] void schema(const std::string& what) { fail(ErrorKind::ParseError, what); }

const Json& member(const Json& j, const char* key, const char* owner) {
  if (!j.is_object() || !j.contains(key)) schema(std::string(owner) + " is missing \"" + key + "\"");
  return j.at(key);
}

std::int64_t integer_from(const Json& j, const char* what) {
  if (!j.is_number_integer()) schema(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

double real_from(const Json& j, const char* what) {
  if (!j.is_number()) schema(std::string(what) + " must be a number");
  return j.get<double>();
}

Json eigenvalues_json(const CMat& a) {
  Json out = Json::array();
  if (a.rows() == 0) return out;
  Eigen::ComplexEigenSolver<CMat> es(a, false);
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  for (Complex z : ev) out.push_back(to_json(z));
  return out;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const laurent::PolyMat& p) {
  Json terms = Json::array();
  for (const auto& [k, c] : p.terms()) terms.push_back({{"pow", k}, {"coef", to_json(c)}});
  return {{"dim", p.dim()}, {"terms", terms}};
}

Json to_json(const bq::BqObject& obj) {
  Json out{{"tau", to_json(obj.tau())}, {"theta", obj.theta}, {"dim", obj.dim()},
           {"A", to_json(obj.a)},       {"B", to_json(obj.b)}};
  if (obj.transversal_offset) out["transversal_offset"] = *obj.transversal_offset;
  return out;
}

Json to_json(const bq::NormalForm& nf) {
  const auto& d = nf.diagnostics;
  Json diag{{"b_residual", d.b_residual},
            {"gauge_residual", d.gauge_residual},
            {"first_discarded", d.first_discarded},
            {"commutator", d.commutator},
            {"snapped", d.snapped},
            {"boundary_margin", d.boundary_margin},
            {"shear_passes", d.shear_passes},
            {"warnings", d.warnings}};
  return {{"tau", to_json(nf.tau())},
          {"theta", nf.theta},
          {"transversal_offset", nf.transversal.offset()},
          {"dim", nf.dim()},
          {"A0", to_json(nf.a0)},
          {"B0", to_json(nf.b0)},
          {"eigenvalues", eigenvalues_json(nf.a0)},
          {"truncation", nf.gauge.truncation},
          {"diagnostics", diag}};
}

Json to_json(const bq::RepZ2& rep) { return {{"dim", rep.dim()}, {"M1", to_json(rep.m1)}, {"M2", to_json(rep.m2)}}; }

Json to_json(const bq::K0ClassB& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms())
    terms.push_back({{"b", to_json(t.b)}, {"zprime", to_json(t.zprime)}, {"mult", t.mult}});
  return {{"tau", to_json(c.ambient().tau())},
          {"transversal_offset", c.ambient().offset()},
          {"rank", c.rank()},
          {"terms", terms}};
}

Json to_json(const atheta::AElem& x) {
  Json coeffs = Json::array();
  for (const auto& [mono, c] : x.coeffs()) coeffs.push_back({{"n1", mono.first}, {"n2", mono.second}, {"c", to_json(c)}});
  return {{"theta", x.theta()}, {"coeffs", coeffs}};
}

Json to_json(const atheta::FrVectObj& f) {
  Json conn = Json::array();
  for (const auto& row : f.conn) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(to_json(x));
    conn.push_back(std::move(r));
  }
  Json diag = Json::array();
  for (Complex z : f.diagonal_parameters()) diag.push_back(to_json(z));
  return {{"n", f.n}, {"tau", to_json(f.tau)}, {"theta", f.theta}, {"conn", conn}, {"diagonal", diag}};
}

Json to_json(const atheta::DivisorXtau& d) {
  Json pts = Json::array();
  for (const auto& p : d.points()) pts.push_back({{"p", to_json(p.p)}, {"mult", p.mult}});
  return {{"tau", to_json(d.tau())}, {"points", pts}, {"degree", d.degree()}};
}

Json to_json(const numkit::FunctionDiagnostics& d) {
  return {{"warnings", d.warnings},
          {"boundary_margin", d.boundary_margin},
          {"near_boundary", d.near_boundary},
          {"condition_estimate", d.condition_estimate}};
}

// --- readers ------------------------------------------------------------------

Complex complex_from(const Json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  schema(std::string(what) + " must be a number or an [re, im] pair");
}

CMat matrix_from(const Json& j, const char* what) {
  if (!j.is_array()) schema(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return CMat(0, 0);
  if (!j[0].is_array()) schema(std::string(what) + " must be an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      schema(std::string(what) + " has ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

laurent::PolyMat polymat_from(const Json& j, int dim, laurent::Params params) {
  const Json* terms = &j;
  if (j.is_object()) {
    if (j.contains("dim") && integer_from(j["dim"], "dim") != dim) schema("PolyMat dim disagrees with the object");
    terms = &member(j, "terms", "PolyMat");
  }
  if (!terms->is_array()) schema("PolyMat terms must be an array");
  laurent::PolyMat p(dim, params);
  for (const Json& t : *terms) {
    const int k = static_cast<int>(integer_from(member(t, "pow", "PolyMat term"), "pow"));
    CMat c = matrix_from(member(t, "coef", "PolyMat term"), "coef");
    if (c.rows() != dim || c.cols() != dim) schema("PolyMat coefficient has the wrong shape");
    p.add_to(k, c);
  }
  return p;
}

atheta::AElem aelem_from(const Json& j, double theta) {
  const Json& src = payload(j);
  if (src.is_object() && src.contains("theta")) theta = real_from(src["theta"], "theta");
  atheta::AElem x(theta);
  for (const Json& t : member(src, "coeffs", "AElem"))
    x.add(integer_from(member(t, "n1", "coefficient"), "n1"), integer_from(member(t, "n2", "coefficient"), "n2"),
          complex_from(member(t, "c", "coefficient"), "c"));
  return x;
}

atheta::FrVectObj frvect_from(const Json& j, const Defaults& d) {
  const Json& src = payload(j);
  atheta::FrVectObj f;
  f.tau = tau_of(src, d);
  f.theta = theta_of(src, d);
  const Json& conn = member(src, "conn", "FrVect object");
  f.n = src.contains("n") ? static_cast<int>(integer_from(src["n"], "n")) : static_cast<int>(conn.size());
  if (!conn.is_array() || static_cast<int>(conn.size()) != f.n) schema("conn must have n rows");
  for (const Json& row : conn) {
    if (!row.is_array() || static_cast<int>(row.size()) != f.n) schema("conn must have n columns");
    std::vector<atheta::AElem> r;
    for (const Json& x : row) r.push_back(aelem_from(x, f.theta));
    f.conn.push_back(std::move(r));
  }
  f.validate();
  return f;
}

atheta::DivisorXtau divisor_from(const Json& j, const Defaults& d, const Tolerances& tol) {
  const Json& src = payload(j);
  atheta::DivisorXtau div(tau_of(src, d), tol);
  for (const Json& p : member(src, "points", "divisor"))
    div.add(complex_from(member(p, "p", "divisor point"), "p"), integer_from(member(p, "mult", "divisor point"), "mult"));
  return div;
}

bq::K0ClassB k0_from(const Json& j, const Defaults& d, const Tolerances& tol) {
  const Json& src = payload(j);
  bq::K0ClassB c(numkit::Transversal(tau_of(src, d), offset_of(src, d)), tol);
  for (const Json& t : member(src, "terms", "K0 class"))
    c.add(complex_from(member(t, "b", "K0 term"), "b"), complex_from(member(t, "zprime", "K0 term"), "zprime"),
          integer_from(member(t, "mult", "K0 term"), "mult"));
  return c;
}

const Json& payload(const Json& j) {
  if (j.is_object() && j.contains("result") && j["result"].is_object()) return j["result"];
  return j;
}

Complex tau_of(const Json& j, const Defaults& d) {
  return j.is_object() && j.contains("tau") ? complex_from(j["tau"], "tau") : d.tau;
}

double theta_of(const Json& j, const Defaults& d) {
  return j.is_object() && j.contains("theta") ? real_from(j["theta"], "theta") : d.theta;
}

double offset_of(const Json& j, const Defaults& d) {
  return j.is_object() && j.contains("transversal_offset") ? real_from(j["transversal_offset"], "transversal_offset")
                                                           : d.offset;
}

AnyObject object_from(const Json& j, const Defaults& d, const Tolerances& tol) {
  const Json& src = payload(j);
  if (!src.is_object()) schema("object description must be a JSON object");
  const Complex tau = tau_of(src, d);
  const double theta = theta_of(src, d);
  if (src.contains("A0")) {
    const numkit::Transversal t(tau, offset_of(src, d));
    return bq::make_normal_form(matrix_from(src["A0"], "A0"), matrix_from(member(src, "B0", "normal form"), "B0"), t,
                                theta, tol);
  }
  if (src.contains("A")) {
    const auto params = laurent::Params::from_theta(tau, theta);
    int dim = 0;
    if (src.contains("dim")) {
      dim = static_cast<int>(integer_from(src["dim"], "dim"));
    } else if (src["A"].is_object() && src["A"].contains("dim")) {
      dim = static_cast<int>(integer_from(src["A"]["dim"], "dim"));
    } else {
      schema("object is missing \"dim\"");
    }
    if (dim < 0) schema("dim must be nonnegative");
    std::optional<double> offset;
    if (src.contains("transversal_offset")) offset = offset_of(src, d);
    return bq::BqObject(polymat_from(src["A"], dim, params), polymat_from(member(src, "B", "object"), dim, params),
                        theta, offset);
  }
  if (src.contains("M1"))
    return bq::make_rep(matrix_from(src["M1"], "M1"), matrix_from(member(src, "M2", "representation"), "M2"), tol);
  schema("expected a normal form (\"A0\"), an object (\"A\") or a representation (\"M1\")");
}

Json parse_document(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t byte = std::min(e.byte, text.size() + 1);
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << origin << ": malformed JSON at line " << line << ", column " << col;
    fail(ErrorKind::ParseError, os.str());
  }
}

}  // namespace eqrh::cli
