#include "isospec/psusy.hpp"

#include <cmath>

namespace isospec {

namespace {

ComplexMatrix block_diag(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

ComplexMatrix odd_lower(const ComplexMatrix& d) {
  const Eigen::Index np = d.cols(), nm = d.rows();
  ComplexMatrix q = ComplexMatrix::Zero(np + nm, np + nm);
  q.bottomLeftCorner(nm, np) = d;
  return q;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b + b * a;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

}  // namespace

PseudoSusySystem assemble(const ComplexMatrix& d, const EtaOperator& eta_plus,
                          const EtaOperator& eta_minus) {
  if (d.cols() != eta_plus.dim() || d.rows() != eta_minus.dim()) {
    throw DimensionMismatch("D must map the plus sector (" + std::to_string(eta_plus.dim()) +
                            ") into the minus sector (" + std::to_string(eta_minus.dim()) + ")");
  }
  if (!all_finite(d)) throw DimensionMismatch("D contains non-finite entries");
  PseudoSusySystem s;
  s.d = d;
  s.eta_plus = eta_plus;
  s.eta_minus = eta_minus;
  s.d_sharp = pseudo_adjoint(d, eta_plus, eta_minus);
  s.h_plus = 0.5 * (s.d_sharp * d);
  s.h_minus = 0.5 * (d * s.d_sharp);

  const Eigen::Index np = d.cols(), nm = d.rows();
  s.tau = ComplexMatrix::Identity(np + nm, np + nm);
  s.tau.bottomRightCorner(nm, nm) *= -1.0;
  s.q = odd_lower(d);
  s.h = block_diag(s.h_plus, s.h_minus);
  s.eta = make_eta(block_diag(eta_plus.matrix(), eta_minus.matrix()),
                   block_diag(eta_plus.inverse(), eta_minus.inverse()));
  s.q_sharp = s.eta.inverse() * s.q.adjoint() * s.eta.matrix();
  return s;
}

PseudoSusySystem from_factorization(const Factorization& fact) {
  return assemble(std::sqrt(2.0) * fact.l.l, fact.eta1, fact.eta2);
}

bool AlgebraReport::passed() const {
  return q_squared == 0.0 && q_sharp_squared.passed() && anticommutator.passed() &&
         grading.passed() && metric_even.passed() && charge_conserved.passed() &&
         intertwine_plus.passed() && intertwine_minus.passed();
}

AlgebraReport verify_algebra(const PseudoSusySystem& psys, const Tolerance& tol) {
  const double dn = norm2(psys.d);
  const double dsn = norm2(psys.d_sharp);
  const double hn = norm2(psys.h);
  const double threshold = tol.rtol * (1.0 + hn + dn * dsn) * psys.eta.condition();

  AlgebraReport r;
  r.q_squared = norm2(psys.q * psys.q);
  r.q_sharp_squared = {norm2(psys.q_sharp * psys.q_sharp), threshold};
  r.anticommutator = {norm2(anticommutator(psys.q, psys.q_sharp) - 2.0 * psys.h), threshold};
  r.grading = {norm2(anticommutator(psys.tau, psys.q)), threshold};
  r.metric_even = {norm2(commutator(psys.eta.matrix(), psys.tau)), threshold};
  r.charge_conserved = {norm2(commutator(psys.q, psys.h)), threshold * (1.0 + dn)};
  r.intertwine_plus = {norm2(psys.d * psys.h_plus - psys.h_minus * psys.d), threshold * (1.0 + dn)};
  r.intertwine_minus = {norm2(psys.d_sharp * psys.h_minus - psys.h_plus * psys.d_sharp),
                        threshold * (1.0 + dsn)};
  return r;
}

ExtendedAlgebraReport verify_extended_algebra(const std::vector<ComplexMatrix>& generators,
                                              const EtaOperator& eta_plus,
                                              const EtaOperator& eta_minus,
                                              const Tolerance& tol) {
  if (generators.empty()) throw std::invalid_argument("at least one generator required");
  std::vector<PseudoSusySystem> systems;
  for (const auto& d : generators) systems.push_back(assemble(d, eta_plus, eta_minus));
  const ComplexMatrix& h = systems.front().h;
  const Eigen::Index dim = h.rows();

  double scale = 1.0 + norm2(h);
  for (const auto& s : systems) scale += norm2(s.d) * norm2(s.d_sharp);
  const double threshold = tol.rtol * scale * systems.front().eta.condition();

  // Pseudo-Hermitian combinations (Q + Q#)/sqrt2 and (Q - Q#)/(sqrt2 i).
  std::vector<ComplexMatrix> hermitian;
  const double r2 = std::sqrt(2.0);
  for (const auto& s : systems) {
    hermitian.push_back((s.q + s.q_sharp) / r2);
    hermitian.push_back((s.q - s.q_sharp) / (r2 * Complex(0.0, 1.0)));
  }

  double nil = 0.0, mixed = 0.0, herm = 0.0;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    nil = std::max({nil, norm2(systems[i].q * systems[i].q),
                    norm2(systems[i].q_sharp * systems[i].q_sharp)});
    for (std::size_t j = 0; j < systems.size(); ++j) {
      ComplexMatrix target = i == j ? ComplexMatrix(2.0 * h) : ComplexMatrix::Zero(dim, dim);
      mixed = std::max(mixed, norm2(anticommutator(systems[i].q, systems[j].q_sharp) - target));
    }
  }
  for (std::size_t a = 0; a < hermitian.size(); ++a) {
    for (std::size_t b = 0; b < hermitian.size(); ++b) {
      ComplexMatrix target = a == b ? ComplexMatrix(2.0 * h) : ComplexMatrix::Zero(dim, dim);
      herm = std::max(herm, norm2(anticommutator(hermitian[a], hermitian[b]) - target));
    }
  }
  return {{nil, threshold}, {mixed, threshold}, {herm, threshold}};
}

bool restricted_form_non_null(const ComplexMatrix& kernel, const EtaOperator& eta,
                              const Tolerance& tol, Eigen::VectorXd* form_eigenvalues) {
  if (kernel.cols() == 0) {
    if (form_eigenvalues) form_eigenvalues->resize(0);
    return true;
  }
  ComplexMatrix form = kernel.adjoint() * eta.matrix() * kernel;
  form = 0.5 * (form + form.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(form, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  if (form_eigenvalues) *form_eigenvalues = ev;
  const double cutoff = tol.atol * norm2(eta.matrix());
  return ev.cwiseAbs().minCoeff() > cutoff;
}

namespace {

struct ZeroModes {
  ComplexMatrix plus;
  ComplexMatrix minus;
};

ZeroModes zero_modes(const PseudoSusySystem& psys, const Tolerance& tol) {
  return {kernel_basis(psys.h_plus, tol), kernel_basis(psys.h_minus, tol)};
}

}  // namespace

NullKernelReport null_kernel_check(const PseudoSusySystem& psys, const Tolerance& tol) {
  const ZeroModes k = zero_modes(psys, tol);
  NullKernelReport r;
  r.plus_non_null = restricted_form_non_null(k.plus, psys.eta_plus, tol, &r.plus_form);
  r.minus_non_null = restricted_form_non_null(k.minus, psys.eta_minus, tol, &r.minus_form);
  return r;
}

WittenReport witten_index(const PseudoSusySystem& psys, const Tolerance& tol) {
  tol.validate();
  const ZeroModes k = zero_modes(psys, tol);
  const double dn = norm2(psys.d);
  const double dsn = norm2(psys.d_sharp);

  WittenReport r;
  r.d0_plus = k.plus.cols();
  r.d0_minus = k.minus.cols();
  r.delta = r.d0_plus - r.d0_minus;

  // D restricted to the zero-mode spaces, in orthonormal kernel coordinates.
  // In the bases K+ of H+^(0) and eta- K- of eta- H-^(0), A+ = eta- D0 has the
  // same coordinate matrix as D0, and A- = eta+^-1 D~0^dagger that of D0-flat.
  const ComplexMatrix d0 = k.minus.adjoint() * psys.d * k.plus;
  const ComplexMatrix d0_flat = k.plus.adjoint() * psys.d_sharp * k.minus;

  const Eigen::Index np = psys.plus_dim(), nm = psys.minus_dim();
  const double map_threshold = tol.rtol * (1.0 + dn * dsn) * std::max(dn, dsn) *
                               static_cast<double>(std::max<Eigen::Index>(np + nm, 1));
  r.kernel_mapping_plus = {
      norm2((ComplexMatrix::Identity(nm, nm) - k.minus * k.minus.adjoint()) * psys.d * k.plus),
      std::max(map_threshold, tol.atol)};
  r.kernel_mapping_minus = {
      norm2((ComplexMatrix::Identity(np, np) - k.plus * k.plus.adjoint()) * psys.d_sharp * k.minus),
      std::max(map_threshold, tol.atol)};
  const double complex_threshold = std::max(tol.atol, tol.rtol * (1.0 + dn * dsn));
  r.complex_a_plus_a_minus = {norm2(d0 * d0_flat), complex_threshold};
  r.complex_a_minus_a_plus = {norm2(d0_flat * d0), complex_threshold};

  r.rank_a_plus = rank(d0, tol, dn);
  r.rank_a_minus = rank(d0_flat, tol, dsn);
  r.ker_d0 = r.d0_plus - r.rank_a_plus;
  r.ker_d0_flat = r.d0_minus - r.rank_a_minus;
  r.betti_plus = r.ker_d0 - r.rank_a_minus;
  r.betti_minus = r.ker_d0_flat - r.rank_a_plus;
  r.analytic_index_sigma = r.betti_plus - r.betti_minus;

  const Eigen::Index rank_d = rank(psys.d, tol);
  r.ker_d = np - rank_d;
  r.ker_d_dagger = nm - rank_d;
  r.analytic_index_d = r.ker_d - r.ker_d_dagger;

  r.non_null_kernels = restricted_form_non_null(k.plus, psys.eta_plus, tol) &&
                       restricted_form_non_null(k.minus, psys.eta_minus, tol);
  return r;
}

}  // namespace isospec
