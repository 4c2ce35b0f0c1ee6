// Two-component pseudo-supersymmetric systems: block assembly, algebra
// residuals and the Witten index with its index identities.
#pragma once

#include <vector>

#include "isospec/intertwiner.hpp"

namespace isospec {

/// tau = diag(1, -1), Q = [[0, 0], [D, 0]], H = diag(H+, H-), eta = diag(eta+, eta-).
struct PseudoSusySystem {
  ComplexMatrix d;        // plus sector -> minus sector
  ComplexMatrix d_sharp;  // eta+^-1 D^dagger eta-
  EtaOperator eta_plus;
  EtaOperator eta_minus;
  ComplexMatrix h_plus;   // D# D / 2
  ComplexMatrix h_minus;  // D D# / 2

  ComplexMatrix tau;
  ComplexMatrix q;
  ComplexMatrix q_sharp;
  ComplexMatrix h;
  EtaOperator eta;

  Eigen::Index plus_dim() const { return d.cols(); }
  Eigen::Index minus_dim() const { return d.rows(); }
};

PseudoSusySystem assemble(const ComplexMatrix& d, const EtaOperator& eta_plus,
                          const EtaOperator& eta_minus);

/// D = sqrt(2) L with the factorization's metrics; H+ = H1 and H- = H2.
PseudoSusySystem from_factorization(const Factorization& fact);

struct AlgebraReport {
  double q_squared = 0.0;  // exact zero expected
  Check q_sharp_squared;
  Check anticommutator;   // ||{Q, Q#} - 2H||
  Check grading;          // ||{tau, Q}||
  Check metric_even;      // ||[eta, tau]||
  Check charge_conserved; // ||[Q, H]||
  Check intertwine_plus;  // ||D H+ - H- D||
  Check intertwine_minus; // ||D# H- - H+ D#||
  bool passed() const;
};

AlgebraReport verify_algebra(const PseudoSusySystem& psys, const Tolerance& tol = {});

/// Several odd generators Q_i = [[0,0],[D_i,0]] sharing one metric, with H
/// defined by the first one.
struct ExtendedAlgebraReport {
  Check nilpotency;          // max ||Q_i^2||, ||(Q_i#)^2||
  Check mixed_anticommutator; // max ||{Q_i, Q_j#} - 2 delta_ij H||
  Check hermitian_generators; // max ||{Q^a_i, Q^b_j} - 2 delta_ij delta_ab H||
  bool passed() const {
    return nilpotency.passed() && mixed_anticommutator.passed() && hermitian_generators.passed();
  }
};

ExtendedAlgebraReport verify_extended_algebra(const std::vector<ComplexMatrix>& generators,
                                              const EtaOperator& eta_plus,
                                              const EtaOperator& eta_minus,
                                              const Tolerance& tol = {});

struct NullKernelReport {
  bool plus_non_null = true;
  bool minus_non_null = true;
  /// Eigenvalues of eta restricted to each zero-mode space.
  Eigen::VectorXd plus_form;
  Eigen::VectorXd minus_form;
  bool non_null() const { return plus_non_null && minus_non_null; }
};

/// Non-null iff the restriction of eta_pm to ker H_pm has no zero eigenvalue.
NullKernelReport null_kernel_check(const PseudoSusySystem& psys, const Tolerance& tol = {});

/// Same criterion for an explicit kernel basis.
bool restricted_form_non_null(const ComplexMatrix& kernel, const EtaOperator& eta,
                              const Tolerance& tol, Eigen::VectorXd* form_eigenvalues = nullptr);

struct WittenReport {
  Eigen::Index d0_plus = 0;
  Eigen::Index d0_minus = 0;
  Eigen::Index delta = 0;
  Eigen::Index ker_d = 0;
  Eigen::Index ker_d_dagger = 0;
  Eigen::Index ker_d0 = 0;
  Eigen::Index ker_d0_flat = 0;
  Eigen::Index rank_a_plus = 0;
  Eigen::Index rank_a_minus = 0;
  Eigen::Index betti_plus = 0;
  Eigen::Index betti_minus = 0;
  Eigen::Index analytic_index_sigma = 0;
  Eigen::Index analytic_index_d = 0;
  bool non_null_kernels = true;
  Check kernel_mapping_plus;   // ||(I - K-K-^dagger) D K+||
  Check kernel_mapping_minus;  // ||(I - K+K+^dagger) D# K-||
  Check complex_a_plus_a_minus;
  Check complex_a_minus_a_plus;

  bool sigma_identity_holds() const { return delta == analytic_index_sigma; }
  bool d_identity_holds() const { return !non_null_kernels || delta == analytic_index_d; }
};

WittenReport witten_index(const PseudoSusySystem& psys, const Tolerance& tol = {});

}  // namespace isospec
