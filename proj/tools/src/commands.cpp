#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace eqrh::cli {

namespace {

std::int64_t token_integer(const std::string& s, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) fail(ErrorKind::InvalidArgument, std::string(what) + " must be an integer, got '" + s + "'");
  return v;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double morphism_residual(const bq::Morphism& m) {
  return bq::intertwining_residual(m.phi, m.source, m.target);
}

bq::Morphism morphism_from(const Context& c) {
  if (c.docs.size() == 1) {
    const Json& src = payload(c.doc(0));
    if (!src.is_object() || !src.contains("source") || !src.contains("target") || !src.contains("phi"))
      fail(ErrorKind::ParseError, "a morphism needs \"source\", \"target\" and \"phi\"");
    auto to_nf = [&](const Json& j) {
      Context sub{c.options, {""}, {j}};
      return sub.normal_form(0);
    };
    return {to_nf(src["source"]), to_nf(src["target"]), matrix_from(src["phi"], "phi")};
  }
  if (c.docs.size() != 3) fail(ErrorKind::InvalidArgument, "expected a morphism document or source, target and phi");
  const Json& p = payload(c.doc(2));
  const CMat phi = matrix_from(p.is_object() ? p.at("phi") : p, "phi");
  return {c.normal_form(0), c.normal_form(1), phi};
}

Json subquotient_json(const bq::SubQuotient& s) {
  return {{"object", to_json(s.object)}, {"map", to_json(s.map.phi)}, {"k0", to_json(bq::k0_class(s.object))}};
}

atheta::Word parse_word(const std::string& s) {
  atheta::Word w;
  std::istringstream is(s);
  std::string letter;
  while (std::getline(is, letter, '.')) {
    if (letter == "g1") w.push_back(atheta::Gen::g1);
    else if (letter == "g2") w.push_back(atheta::Gen::g2);
    else if (letter == "g1_inv") w.push_back(atheta::Gen::g1_inv);
    else if (letter == "g2_inv") w.push_back(atheta::Gen::g2_inv);
    else fail(ErrorKind::InvalidArgument, "unknown generator '" + letter + "' (use g1, g2, g1_inv, g2_inv)");
  }
  return w;
}

// --- commands ---------------------------------------------------------------------

CommandResult cmd_validate(const Context& c) {
  const auto obj = object_from(c.doc(0), c.options.defaults(), c.options.tol);
  CommandResult r;
  if (const auto* o = std::get_if<bq::BqObject>(&obj)) {
    const auto v = bq::validate(*o, c.options.tol);
    r.result = {{"valid", true}, {"kind", "object"}, {"dim", o->dim()}};
    r.diagnostics = {{"negative_part", v.negative_part},
                     {"b0_min_singular", v.b0_min_singular},
                     {"equivariance", v.equivariance},
                     {"equivariance_scale", v.equivariance_scale}};
  } else if (const auto* nf = std::get_if<bq::NormalForm>(&obj)) {
    r.result = {{"valid", true}, {"kind", "normal_form"}, {"dim", nf->dim()}};
    r.diagnostics = {{"commutator", nf->diagnostics.commutator},
                     {"boundary_margin", nf->diagnostics.boundary_margin},
                     {"warnings", nf->diagnostics.warnings}};
  } else {
    const auto& rep = std::get<bq::RepZ2>(obj);
    r.result = {{"valid", true}, {"kind", "representation"}, {"dim", rep.dim()}};
    r.diagnostics = {{"commutator", numkit::commutator_norm(rep.m1, rep.m2)}};
  }
  return r;
}

CommandResult cmd_normalize(const Context& c) { return {to_json(c.normal_form(0))}; }

CommandResult cmd_rh_to_rep(const Context& c) {
  const auto nf = c.normal_form(0);
  const auto rep = bq::fiber_omega(nf);
  return {to_json(rep), {{"commutator", numkit::commutator_norm(rep.m1, rep.m2)}}};
}

CommandResult cmd_rh_from_rep(const Context& c) {
  const auto obj = object_from(c.doc(0), c.options.defaults(), c.options.tol);
  if (!std::holds_alternative<bq::RepZ2>(obj))
    fail(ErrorKind::InvalidArgument, "rh-from-rep expects a representation (\"M1\", \"M2\")");
  const auto nf = c.normal_form(0);
  const auto back = bq::fiber_omega(nf);
  const auto& rep = std::get<bq::RepZ2>(obj);
  const double err = (back.m1 - rep.m1).norm() / std::max(1.0, rep.m1.norm()) +
                     (back.m2 - rep.m2).norm() / std::max(1.0, rep.m2.norm());
  return {to_json(nf), {{"round_trip_error", err}}};
}

CommandResult cmd_tensor(const Context& c) {
  const auto t = bq::tensor(c.normal_form(0), c.normal_form(1), c.options.tol);
  return {to_json(t)};
}

CommandResult cmd_dual(const Context& c) {
  const auto x = c.normal_form(0);
  const auto r = bq::rigidity(x, c.options.tol);
  return {to_json(bq::dual(x, c.options.tol)),
          {{"triangle_left", r.triangle_left},
           {"triangle_right", r.triangle_right},
           {"evaluation_residual", r.evaluation_residual},
           {"coevaluation_residual", r.coevaluation_residual}}};
}

CommandResult cmd_hom(const Context& c) {
  const auto x = c.normal_form(0), y = c.normal_form(1);
  const auto basis = bq::hom_basis(x, y, c.options.tol);
  const auto scan = bq::hom_mode_scan(x, y, 8, c.options.tol);
  Json mats = Json::array(), modes = Json::array();
  double worst = 0.0;
  for (const auto& m : basis) {
    mats.push_back(to_json(m.phi));
    worst = std::max(worst, bq::intertwining_residual(m.phi, x, y));
  }
  for (const auto& [k, d] : scan.nonzero) modes.push_back({{"k", k}, {"dim", d}});
  return {{{"dim", basis.size()}, {"basis", mats}},
          {{"max_intertwining_residual", worst}, {"mode_scan", {{"k_scan", scan.k_scan}, {"nonzero", modes}}}}};
}

CommandResult cmd_kernel(const Context& c) {
  const auto m = morphism_from(c);
  return {subquotient_json(bq::kernel(m, c.options.tol)), {{"morphism_residual", morphism_residual(m)}}};
}

CommandResult cmd_cokernel(const Context& c) {
  const auto m = morphism_from(c);
  return {subquotient_json(bq::cokernel(m, c.options.tol)), {{"morphism_residual", morphism_residual(m)}}};
}

CommandResult cmd_decompose(const Context& c) {
  const auto nf = c.normal_form(0);
  Json factors = Json::array();
  for (const auto& f : bq::decompose(nf, c.options.tol))
    factors.push_back({{"lambda", to_json(f.lambda)}, {"b", to_json(f.b)}});
  return {{{"dim", nf.dim()}, {"factors", factors}}};
}

CommandResult cmd_k0(const Context& c) {
  const auto nf = c.normal_form(0);
  Json out = to_json(bq::k0_class(nf, c.options.tol));
  out["h0"] = bq::h0_dim(nf, c.options.tol);
  return {out};
}

CommandResult cmd_kmap(const Context& c) {
  const Json& src = payload(c.doc(0));
  const bq::K0ClassB cls = src.is_object() && src.contains("terms")
                               ? k0_from(src, c.options.defaults(), c.options.tol)
                               : bq::k0_class(c.normal_form(0), c.options.tol);
  std::vector<Complex> labels;
  for (const auto& t : cls.terms())
    if (std::none_of(labels.begin(), labels.end(),
                     [&](Complex b) { return std::abs(b - t.b) <= c.options.tol.eps_key * std::max(1.0, std::abs(b)); }))
      labels.push_back(t.b);
  return {to_json(atheta::kmap(cls)),
          {{"forgotten_b_labels", labels.size()}, {"note", "the b labels of the K0 class are not recorded in the divisor"}}};
}

CommandResult cmd_divisor_eq(const Context& c) {
  const auto d1 = divisor_from(c.doc(0), c.options.defaults(), c.options.tol);
  const auto d2 = divisor_from(c.doc(1), c.options.defaults(), c.options.tol);
  const bool eq = atheta::divisor_equivalent(d1, d2, c.options.tol);
  return {{{"equivalent", eq}, {"degrees", {d1.degree(), d2.degree()}}},
          {{"sum_difference", to_json(d1.weighted_sum() - d2.weighted_sum())}}};
}

CommandResult cmd_psi_star(const Context& c) {
  const auto ps = atheta::psi_star(c.normal_form(0));
  Json out = to_json(ps.bundle);
  out["basis"] = to_json(ps.basis);
  return {out};
}

CommandResult cmd_extension(const Context& c) {
  const Json& src = payload(c.doc(0));
  if (!src.is_object() || !src.contains("zprime") || !src.contains("row") || !src.contains("sub"))
    fail(ErrorKind::ParseError, "an extension needs \"zprime\", \"row\" and \"sub\"");
  const Defaults d = c.options.defaults();
  const auto sub = frvect_from(src["sub"], d);
  std::vector<atheta::AElem> row;
  for (const Json& x : src["row"]) row.push_back(aelem_from(x, sub.theta));
  const auto ext = atheta::build_extension(complex_from(src["zprime"], "zprime"), row, sub);
  return {to_json(ext.bundle), {{"iota_residual", ext.iota_residual}, {"pi_residual", ext.pi_residual}}};
}

CommandResult cmd_std_bundle(const Context& c) {
  const auto m = token_integer(c.args[0], "m"), n = token_integer(c.args[1], "n");
  const double theta = c.options.theta;
  const auto d = atheta::std_bundle_data(m, n, theta);
  const auto s = atheta::ps_k_swap(m, n, theta);
  return {{{"m", m},
           {"n", n},
           {"theta", theta},
           {"deg", d.deg},
           {"rk", d.rk},
           {"slope", finite_or_null(d.slope)},
           {"phase", atheta::phase(m, n, theta)},
           {"swap", {{"image_rank", s.image_rank}, {"image_degree", s.image_degree}, {"torsion", s.torsion}}}}};
}

CommandResult cmd_phase(const Context& c) {
  const auto m = token_integer(c.args[0], "m"), n = token_integer(c.args[1], "n");
  const double theta = c.options.theta;
  return {{{"m", m},
           {"n", n},
           {"theta", theta},
           {"Z", to_json(atheta::stability_Z(m, n, theta))},
           {"phase", atheta::phase(m, n, theta)}}};
}

CommandResult cmd_nori(const Context& c) {
  const Json& src = payload(c.doc(0));
  atheta::NoriReport rep;
  if (src.is_object() && src.contains("M")) {
    rep = atheta::nori_check(matrix_from(src["M"], "M"), c.options.d_max, c.options.tol);
  } else {
    const auto obj = object_from(src, c.options.defaults(), c.options.tol);
    rep = atheta::nori_check(std::holds_alternative<bq::RepZ2>(obj) ? std::get<bq::RepZ2>(obj)
                                                                     : bq::fiber_omega(c.normal_form(0)),
                             c.options.d_max, c.options.tol);
  }
  return {{{"finite", rep.finite}, {"order", rep.order}, {"d_max", c.options.d_max}, {"reasons", rep.reasons}}};
}

CommandResult cmd_atheta_check(const Context& c) {
  const double theta = c.options.theta;
  const Complex tau = c.options.tau;
  atheta::AElem x = atheta::AElem::u1(theta) + atheta::AElem::monomial(-1, 2, Complex(0.5, -1.0), theta);
  atheta::AElem y = atheta::AElem::u2(theta) + atheta::AElem::monomial(2, -1, Complex(-2.0, 0.25), theta);
  if (!c.docs.empty()) x = aelem_from(c.doc(0), theta);
  if (c.docs.size() > 1) y = aelem_from(c.doc(1), theta);

  const auto u1 = atheta::AElem::u1(theta), u2 = atheta::AElem::u2(theta);
  Json res;
  res["relation"] =
      (atheta::a_mul(u2, u1) - atheta::a_mul(u1, u2).scaled(atheta::q_power(theta, 1))).max_abs();
  const auto xy = atheta::a_mul(x, y);
  auto leibniz = [&](auto&& d) { return (d(xy) - atheta::a_mul(d(x), y) - atheta::a_mul(x, d(y))).max_abs(); };
  res["derivation_delta_1"] = leibniz([](const atheta::AElem& e) { return atheta::delta_j(e, 1); });
  res["derivation_delta_2"] = leibniz([](const atheta::AElem& e) { return atheta::delta_j(e, 2); });
  res["derivation_delta_tau"] = leibniz([&](const atheta::AElem& e) { return atheta::delta_tau(e, tau); });

  double mult = 0.0, inv = 0.0, inter = 0.0;
  for (const char* name : {"g1", "g2", "g1_inv", "g2_inv", "g1.g2", "g2.g1_inv.g2"}) {
    const auto w = parse_word(name);
    mult = std::max(mult, (atheta::sigma_apply(w, xy) -
                           atheta::a_mul(atheta::sigma_apply(w, x), atheta::sigma_apply(w, y)))
                              .max_abs());
    inv = std::max(inv, (atheta::sigma_apply(atheta::inverse_word(w), atheta::sigma_apply(w, x)) - x).max_abs());
    inter = std::max(inter, atheta::check_intertwine(w, {tau, 1.0}, 3, theta));
  }
  res["sigma_multiplicative"] = mult;
  res["sigma_inverse"] = inv;
  res["sigma_intertwine"] = inter;
  res["psi_intertwining"] = atheta::psi_intertwining_residual({{-2, 1.5}, {1, Complex(0.0, 1.0)}, {3, -0.5}}, tau, theta);

  double worst = 0.0;
  for (const auto& [k, v] : res.items()) worst = std::max(worst, v.get<double>());
  const double bound = c.options.tol.eps_res * std::max(1.0, x.max_abs() * y.max_abs()) * 100.0;
  CommandResult r{{{"pass", worst <= bound}, {"max_residual", worst}, {"bound", bound}}, res};
  if (worst > bound) r.exit_code = kNumericFailure;
  return r;
}

CommandResult cmd_wd(const Context& c) {
  const Complex tau = c.options.tau;
  const auto s = numkit::find_small_width(tau);
  return {{{"tau", to_json(tau)},
           {"wd", finite_or_null(numkit::wd(tau))},
           {"g", {{"N", s.translation}, {"matrix", {{s.g.a, s.g.b}, {s.g.c, s.g.d}}}}},
           {"gtau", to_json(s.gtau)},
           {"wd_g", s.width}}};
}

CommandResult cmd_reduce_tau(const Context& c) {
  const auto t = c.transversal();
  Json values = Json::array();
  for (const auto& a : c.args) {
    const Complex z = parse_complex_flag(a);
    const auto r = numkit::reduce_mod_transversal(z, t);
    values.push_back({{"input", to_json(z)}, {"representative", to_json(r.representative)}, {"shift", r.shift}});
  }
  return {{{"tau", to_json(t.tau())}, {"transversal_offset", t.offset()}, {"values", values}}};
}

}  // namespace

const Json& Context::doc(std::size_t i) const {
  if (i >= docs.size() || docs[i].is_discarded())
    fail(ErrorKind::InvalidArgument, "missing JSON input #" + std::to_string(i + 1));
  return docs[i];
}

bq::NormalForm Context::normal_form(std::size_t i) const {
  const Json* src = &payload(doc(i));
  // Kernel and cokernel reports carry their object one level down.
  if (src->is_object() && !src->contains("A0") && !src->contains("A") && !src->contains("M1") &&
      src->contains("object"))
    src = &(*src)["object"];
  const Defaults d = options.defaults();
  const auto obj = object_from(*src, d, options.tol);
  if (const auto* nf = std::get_if<bq::NormalForm>(&obj)) return *nf;
  if (const auto* o = std::get_if<bq::BqObject>(&obj)) {
    const numkit::Transversal t(o->tau(), o->transversal_offset.value_or(options.offset));
    return bq::normalize(*o, t, options.truncation, options.tol);
  }
  const numkit::Transversal t(tau_of(*src, d), offset_of(*src, d));
  return bq::functor_F(std::get<bq::RepZ2>(obj), t, theta_of(*src, d), options.tol);
}

const std::map<std::string, Command>& registry() {
  static const std::map<std::string, Command> r{
      {"validate", {1, 1, true, cmd_validate}},
      {"normalize", {1, 1, true, cmd_normalize}},
      {"rh-to-rep", {1, 1, true, cmd_rh_to_rep}},
      {"rh-from-rep", {1, 1, true, cmd_rh_from_rep}},
      {"tensor", {2, 2, true, cmd_tensor}},
      {"dual", {1, 1, true, cmd_dual}},
      {"hom", {2, 2, true, cmd_hom}},
      {"kernel", {1, 3, true, cmd_kernel}},
      {"cokernel", {1, 3, true, cmd_cokernel}},
      {"decompose", {1, 1, true, cmd_decompose}},
      {"k0", {1, 1, true, cmd_k0}},
      {"kmap", {1, 1, true, cmd_kmap}},
      {"divisor-eq", {2, 2, true, cmd_divisor_eq}},
      {"psi-star", {1, 1, true, cmd_psi_star}},
      {"extension", {1, 1, true, cmd_extension}},
      {"std-bundle", {2, 2, false, cmd_std_bundle}},
      {"phase", {2, 2, false, cmd_phase}},
      {"nori", {1, 1, true, cmd_nori}},
      {"atheta-check", {0, 2, true, cmd_atheta_check}},
      {"wd", {0, 0, false, cmd_wd}},
      {"reduce-tau", {1, 64, false, cmd_reduce_tau}},
  };
  return r;
}

}  // namespace eqrh::cli
