#include "eqrh/atheta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eqrh::atheta {

AElem::AElem(double theta) : theta_(theta) {
  if (!std::isfinite(theta)) fail(ErrorKind::InvalidArgument, "theta must be finite");
}

AElem AElem::monomial(std::int64_t n1, std::int64_t n2, Complex c, double theta) {
  AElem x(theta);
  x.add(n1, n2, c);
  return x;
}

Complex AElem::coeff(std::int64_t n1, std::int64_t n2) const {
  auto it = coeffs_.find({n1, n2});
  return it == coeffs_.end() ? Complex(0.0) : it->second;
}

void AElem::add(std::int64_t n1, std::int64_t n2, Complex c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    fail(ErrorKind::InvalidArgument, "non-finite coefficient");
  if (c == Complex(0.0)) return;
  auto [it, inserted] = coeffs_.try_emplace({n1, n2}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) coeffs_.erase(it);
  }
}

double AElem::max_abs() const {
  double m = 0.0;
  for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

AElem AElem::scaled(Complex s) const {
  AElem out(theta_);
  for (const auto& [k, c] : coeffs_) out.add(k.first, k.second, s * c);
  return out;
}

namespace {

void require_theta(const AElem& x, const AElem& y) {
  if (x.theta() != y.theta()) {
    std::ostringstream os;
    os << "theta differs: " << x.theta() << " vs " << y.theta();
    fail(ErrorKind::ParameterMismatch, os.str());
  }
}

}  // namespace

AElem operator+(const AElem& x, const AElem& y) {
  require_theta(x, y);
  AElem out = x;
  for (const auto& [k, c] : y.coeffs()) out.add(k.first, k.second, c);
  return out;
}

AElem operator-(const AElem& x, const AElem& y) {
  require_theta(x, y);
  AElem out = x;
  for (const auto& [k, c] : y.coeffs()) out.add(k.first, k.second, -c);
  return out;
}

Complex q_power(double theta, std::int64_t k) {
  const double t = theta * static_cast<double>(k);
  return std::exp(kTwoPiI * (t - std::floor(t)));
}

AElem a_mul(const AElem& x, const AElem& y) {
  require_theta(x, y);
  AElem out(x.theta());
  // (U1^a U2^b)(U1^c U2^d) = e^{2 pi i theta b c} U1^{a+c} U2^{b+d}
  for (const auto& [kx, cx] : x.coeffs())
    for (const auto& [ky, cy] : y.coeffs())
      out.add(kx.first + ky.first, kx.second + ky.second, q_power(x.theta(), kx.second * ky.first) * cx * cy);
  return out;
}

AElem a_pow(const AElem& x, std::int64_t k) {
  if (k < 0) {
    if (x.coeffs().size() != 1) fail(ErrorKind::InvalidArgument, "only monomials have inverses");
    const auto& [m, c] = *x.coeffs().begin();
    // (c U1^a U2^b)^{-1} = c^{-1} U2^{-b} U1^{-a}
    const AElem inv = a_mul(AElem::monomial(0, -m.second, 1.0 / c, x.theta()),
                            AElem::monomial(-m.first, 0, 1.0, x.theta()));
    return a_pow(inv, -k);
  }
  AElem out = AElem::unit(x.theta());
  for (std::int64_t i = 0; i < k; ++i) out = a_mul(out, x);
  return out;
}

AElem delta_j(const AElem& x, int j) {
  if (j != 1 && j != 2) fail(ErrorKind::InvalidArgument, "derivation index must be 1 or 2");
  AElem out(x.theta());
  for (const auto& [k, c] : x.coeffs())
    out.add(k.first, k.second, kTwoPiI * static_cast<double>(j == 1 ? k.first : k.second) * c);
  return out;
}

AElem delta_omega(const AElem& x, const Omega& w) {
  AElem out(x.theta());
  for (const auto& [k, c] : x.coeffs())
    out.add(k.first, k.second,
            kTwoPiI * (w.w1 * static_cast<double>(k.first) + w.w2 * static_cast<double>(k.second)) * c);
  return out;
}

AElem delta_tau(const AElem& x, Complex tau) { return delta_omega(x, {tau, 1.0}); }

// --- SL(2, Z) automorphisms -------------------------------------------------------

namespace {

// Images of U1 and U2 under a single letter.
std::pair<AElem, AElem> generator_images(Gen g, double theta) {
  switch (g) {
    case Gen::g1: return {AElem::monomial(1, 1, 1.0, theta), AElem::u2(theta)};
    case Gen::g1_inv: return {AElem::monomial(1, -1, 1.0, theta), AElem::u2(theta)};
    case Gen::g2: return {AElem::monomial(0, -1, 1.0, theta), AElem::u1(theta)};
    case Gen::g2_inv: return {AElem::u2(theta), AElem::monomial(-1, 0, 1.0, theta)};
  }
  fail(ErrorKind::InvalidArgument, "unknown generator");
}

numkit::SL2Z generator_matrix(Gen g) {
  switch (g) {
    case Gen::g1: return {1, 1, 0, 1};
    case Gen::g1_inv: return {1, -1, 0, 1};
    case Gen::g2: return {0, -1, 1, 0};
    case Gen::g2_inv: return {0, 1, -1, 0};
  }
  fail(ErrorKind::InvalidArgument, "unknown generator");
}

AElem apply_letter(Gen g, const AElem& x) {
  const auto [i1, i2] = generator_images(g, x.theta());
  AElem out(x.theta());
  for (const auto& [k, c] : x.coeffs())
    out = out + a_mul(a_pow(i1, k.first), a_pow(i2, k.second)).scaled(c);
  return out;
}

}  // namespace

Word inverse_word(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    switch (*it) {
      case Gen::g1: out.push_back(Gen::g1_inv); break;
      case Gen::g1_inv: out.push_back(Gen::g1); break;
      case Gen::g2: out.push_back(Gen::g2_inv); break;
      case Gen::g2_inv: out.push_back(Gen::g2); break;
    }
  }
  return out;
}

AElem sigma_apply(const Word& w, const AElem& x) {
  AElem out = x;
  for (Gen g : w) out = apply_letter(g, out);
  return out;
}

numkit::SL2Z word_matrix(const Word& w) {
  numkit::SL2Z g;
  for (Gen letter : w) g = g * generator_matrix(letter);
  return g;
}

Omega act(const numkit::SL2Z& g, const Omega& w) {
  return {static_cast<double>(g.a) * w.w1 + static_cast<double>(g.b) * w.w2,
          static_cast<double>(g.c) * w.w1 + static_cast<double>(g.d) * w.w2};
}

double check_intertwine(const Word& w, const Omega& omega, int bound, double theta) {
  if (bound < 0) fail(ErrorKind::InvalidArgument, "support bound must be nonnegative");
  const Word inv = inverse_word(w);
  const Omega gw = act(word_matrix(w), omega);
  double worst = 0.0;
  for (int n1 = -bound; n1 <= bound; ++n1)
    for (int n2 = -bound; n2 <= bound; ++n2) {
      const AElem x = AElem::monomial(n1, n2, 1.0, theta);
      const AElem lhs = sigma_apply(inv, delta_omega(sigma_apply(w, x), omega));
      worst = std::max(worst, (lhs - delta_omega(x, gw)).max_abs());
    }
  return worst;
}

// --- psi --------------------------------------------------------------------------

AElem psi_embed(const Laurent1& f, double theta) {
  AElem out(theta);
  for (const auto& [k, c] : f) out.add(k, 0, c);
  return out;
}

double psi_intertwining_residual(const Laurent1& f, Complex tau, double theta) {
  Laurent1 df;
  for (const auto& [k, c] : f) df[k] = kTwoPiI * tau * static_cast<double>(k) * c;
  const AElem lhs = psi_embed(df, theta);
  const AElem rhs = delta_j(psi_embed(f, theta), 1).scaled(tau);
  return (lhs - rhs).max_abs();
}

}  // namespace eqrh::atheta
