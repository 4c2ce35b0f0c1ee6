#include "isospec/twolevel.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace isospec {

namespace {

constexpr Complex kI{0.0, 1.0};

// Relative quality of the closed-form eigenvectors in a given basis: the
// biorthonormality identities divide by |E| |a + E|, while rounding enters
// at the scale |a|^2 + |b| |c|.
double conditioning(const TwoLevelParams& p, Complex e) {
  const double num = std::abs(e) * std::abs(p.a + e);
  const double den = std::norm(p.a) + std::abs(p.b) * std::abs(p.c) + std::norm(e);
  return num / den;
}

// Below this the closed forms are evaluated in a 45-degree rotated basis.
constexpr double kMinConditioning = 1e-3;

TwoLevelParams params_of(const ComplexMatrix& h) {
  return {0.5 * (h(0, 0) - h(1, 1)), h(0, 1), h(1, 0)};
}

Eigen::Matrix2cd rotation(double sign) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << r, -sign * r, sign * r, r;
  return m;
}

ComplexMatrix outer(const ComplexVector& u, const ComplexVector& v) { return u * v.adjoint(); }

}  // namespace

Complex TwoLevelParams::energy(const Tolerance& tol) const {
  Complex e = std::sqrt(a * a + b * c);
  if (e.real() < 0.0) e = -e;
  if (std::abs(e.real()) <= tol.atol * (1.0 + std::abs(e)) && e.imag() < 0.0) e = -e;
  return e;
}

Complex TwoLevelParams::normalization(const Tolerance& tol) const {
  const Complex e = energy(tol);
  return 2.0 * e * (a + e);
}

ComplexMatrix TwoLevelParams::matrix() const {
  ComplexMatrix h(2, 2);
  h << a, b, c, -a;
  return h;
}

TracelessForm normalize_traceless(const ComplexMatrix& h, const Tolerance& tol) {
  if (h.rows() != 2 || h.cols() != 2) throw DimensionMismatch("two-level Hamiltonian must be 2x2");
  const Complex shift = 0.5 * (h(0, 0) + h(1, 1));
  const ComplexMatrix traceless = h - shift * ComplexMatrix::Identity(2, 2);
  TracelessForm out{params_of(traceless), shift};
  const auto& p = out.params;
  const double scale = 1.0 + std::max({std::abs(p.a), std::abs(p.b), std::abs(p.c)});
  if (std::abs(p.energy(tol)) <= tol.atol * scale) {
    throw DegenerateTwoLevel("a^2 + bc vanishes: the two levels coincide");
  }
  return out;
}

TwoLevelSystem closed_form_system(const TwoLevelParams& params, const Tolerance& tol) {
  const Complex e = params.energy(tol);
  const double scale =
      1.0 + std::max({std::abs(params.a), std::abs(params.b), std::abs(params.c)});
  if (std::abs(e) <= tol.atol * scale) {
    throw DegenerateTwoLevel("a^2 + bc vanishes: the two levels coincide");
  }

  TwoLevelSystem out;
  out.params = params;
  out.energy = e;

  // Work in a rotated basis when a + E nearly cancels; E is basis independent.
  TwoLevelParams p = params;
  Eigen::Matrix2cd basis = Eigen::Matrix2cd::Identity();
  if (conditioning(p, e) < kMinConditioning) {
    double best = -1.0;
    for (double sign : {1.0, -1.0}) {
      const Eigen::Matrix2cd r = rotation(sign);
      const ComplexMatrix rotated = r.transpose() * params.matrix() * r;
      const TwoLevelParams candidate = params_of(rotated);
      const double q = conditioning(candidate, e);
      if (q > best) {
        best = q;
        p = candidate;
        basis = r;
      }
    }
    out.rotated = true;
  }

  const Complex a_plus_e = p.a + e;
  const Complex n_conj = std::conj(2.0 * e * a_plus_e);
  ComplexVector psi1(2), psi2(2), phi1(2), phi2(2);
  psi1 << -p.b, a_plus_e;
  psi2 << a_plus_e, p.c;
  phi1 << -std::conj(p.c), std::conj(a_plus_e);
  phi2 << std::conj(a_plus_e), std::conj(p.b);
  phi1 /= n_conj;
  phi2 /= n_conj;

  out.psi1 = basis * psi1;
  out.psi2 = basis * psi2;
  out.phi1 = basis * phi1;
  out.phi2 = basis * phi2;

  ComplexMatrix psi(2, 2), phi(2, 2);
  psi << out.psi1, out.psi2;
  phi << out.phi1, out.phi2;
  const std::array<Complex, 2> values{-e, e};
  out.system = system_from_eigenvectors(values, psi, phi, tol);
  out.system.hamiltonian = params.matrix();
  return out;
}

TwoLevelFactorization two_level_factorization(const TwoLevelParams& params,
                                              const Tolerance& tol) {
  TwoLevelSystem closed = closed_form_system(params, tol);
  const Complex e = closed.energy;
  const double band = tol.atol * (1.0 + std::abs(e));
  const auto& s = closed;

  TwoLevelCase which;
  ComplexMatrix l, eta1, eta1_inv, eta2, eta2_inv;
  std::vector<Complex> alpha;
  if (std::abs(e.imag()) <= band) {
    which = TwoLevelCase::RealEnergy;
    const double root = std::sqrt(std::abs(e));
    l = root * ComplexMatrix::Identity(2, 2);
    eta1 = -outer(s.phi1, s.phi1) + outer(s.phi2, s.phi2);
    eta1_inv = -outer(s.psi1, s.psi1) + outer(s.psi2, s.psi2);
    eta2 = outer(s.phi1, s.phi1) + outer(s.phi2, s.phi2);
    eta2_inv = outer(s.psi1, s.psi1) + outer(s.psi2, s.psi2);
    alpha = {root, root};
  } else if (std::abs(e.real()) <= band) {
    which = TwoLevelCase::ImaginaryEnergy;
    l = outer(s.psi1, s.phi1) + e * outer(s.psi2, s.phi2);
    eta1 = outer(s.phi1, s.phi2) + outer(s.phi2, s.phi1);
    eta1_inv = outer(s.psi1, s.psi2) + outer(s.psi2, s.psi1);
    eta2 = eta1;
    eta2_inv = eta1_inv;
    // Cluster order puts the upper eigenvalue +E first.
    alpha = {e, 1.0};
  } else {
    throw NonRealDeterminant("E = sqrt(a^2 + bc) is neither real nor purely imaginary");
  }

  const ComplexMatrix h = params.matrix();
  const ComplexMatrix l_sharp = eta1_inv * l.adjoint() * eta2;
  const double threshold = factorization_threshold(s.system, s.system, tol);
  Factorization f{Intertwiner{l, alpha, match_spectra(s.system, s.system, tol)},
                  make_eta(eta1, eta1_inv),
                  make_eta(eta2, eta2_inv),
                  l_sharp,
                  {norm2(h - l_sharp * l), threshold},
                  {norm2(h - l * l_sharp), threshold}};
  return {which, std::move(closed), std::move(f)};
}

OscillatorClosedForms oscillator_closed_forms(double omega) {
  const double w = omega, w2 = w * w, w4 = w2 * w2;
  const double rw = std::sqrt(w);
  OscillatorClosedForms f;
  f.h_o = ComplexMatrix(2, 2);
  f.h_o << 0.0, kI, -kI * w2, 0.0;
  f.h_s = ComplexMatrix(2, 2);
  f.h_s << w, 0.0, 0.0, -w;

  f.eta1 = ComplexMatrix(2, 2);
  f.eta1 << w2 * (1.0 - w2), kI * w * (1.0 + w2), -kI * w * (1.0 + w2), 1.0 - w2;
  f.eta1 /= 4.0 * w4;
  f.eta1_inv = ComplexMatrix(2, 2);
  f.eta1_inv << -1.0 + w2, kI * w * (1.0 + w2), -kI * w * (1.0 + w2), w2 * (-1.0 + w2);
  f.eta2 = ComplexMatrix(2, 2);
  f.eta2 << w2 * (1.0 + w2), kI * w * (1.0 - w2), -kI * w * (1.0 - w2), 1.0 + w2;
  f.eta2 /= 4.0 * w4;

  f.l_self = rw * ComplexMatrix::Identity(2, 2);
  f.l_self_sharp = f.h_o / rw;

  f.l_spin = ComplexMatrix(2, 2);
  f.l_spin << 1.0 / w, kI / w2, kI, 1.0 / w;
  f.l_spin *= rw / 2.0;
  f.l_spin_sharp = ComplexMatrix(2, 2);
  f.l_spin_sharp << w, kI, -kI * w2, -w;
  f.l_spin_sharp *= rw;
  return f;
}

double max_entry_gap(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("entrywise comparison of differently shaped matrices");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

namespace {

void require_positive(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("omega must be a positive finite number");
  }
}

TwoLevelParams oscillator_params(double omega) { return {0.0, kI, -kI * omega * omega}; }

}  // namespace

OscillatorDemo oscillator_demo(double omega, const Tolerance& tol) {
  require_positive(omega);
  TwoLevelFactorization tf = two_level_factorization(oscillator_params(omega), tol);
  const auto& f = tf.factorization;
  const OscillatorClosedForms ref = oscillator_closed_forms(omega);

  OscillatorDemo d{omega,   tf.closed,  f.eta1, f.eta2, f.l.l, f.l_sharp,
                   f.residual_h1, {norm2(ref.h_o - f.l.l * f.l_sharp), f.residual_h1.threshold},
                   0.0};
  d.closed_form_deviation = std::max({max_entry_gap(f.eta1.matrix(), ref.eta1),
                                      max_entry_gap(f.eta1.inverse(), ref.eta1_inv),
                                      max_entry_gap(f.eta2.matrix(), ref.eta2),
                                      max_entry_gap(f.l.l, ref.l_self),
                                      max_entry_gap(f.l_sharp, ref.l_self_sharp)});
  return d;
}

SpinDemo spin_intertwine_demo(double omega, const Tolerance& tol) {
  require_positive(omega);
  const OscillatorClosedForms ref = oscillator_closed_forms(omega);
  BiorthonormalSystem osc = closed_form_system(oscillator_params(omega), tol).system;

  // Standard basis: (0, 1) for -w and (1, 0) for +w; self-dual.
  ComplexMatrix basis(2, 2);
  basis << 0.0, 1.0, 1.0, 0.0;
  const std::array<Complex, 2> values{-omega, omega};
  BiorthonormalSystem spin = system_from_eigenvectors(values, basis, basis, tol);
  spin.hamiltonian = ref.h_s;

  Factorization f = canonical_factorization(osc, spin, tol);
  SpinDemo d{omega,
             osc,
             spin,
             f,
             f.residual_h1,
             f.residual_h2,
             verify_intertwining(f.l.l, ref.h_o, ref.h_s, tol),
             std::max(max_entry_gap(f.l.l, ref.l_spin), max_entry_gap(f.l_sharp, ref.l_spin_sharp)),
             from_factorization(f)};
  return d;
}

}  // namespace isospec
