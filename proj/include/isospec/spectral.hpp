// Complete biorthonormal eigensystems of diagonalizable matrices, grouped
// into degenerate clusters and labeled real / conjugate-pair.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isospec/numkernel.hpp"

namespace isospec {

enum class ClusterKind { Real, PairUpper, PairLower };

std::string to_string(ClusterKind kind);

struct EigenCluster {
  Complex value;
  Eigen::Index multiplicity = 1;
  ClusterKind kind = ClusterKind::Real;
  /// Index of the conjugate partner cluster, when one was found.
  std::optional<std::size_t> partner;
  /// First column of this cluster in Psi / Phi.
  Eigen::Index offset = 0;
};

/// Right eigenvectors Psi and their duals Phi = (Psi^-1)^dagger, with
/// columns grouped by cluster. Clusters are ordered by (Re E, Im E); a
/// PairLower cluster immediately follows its PairUpper partner.
struct BiorthonormalSystem {
  std::vector<EigenCluster> clusters;
  ComplexMatrix psi;
  ComplexMatrix phi;
  /// The operator the system diagonalizes (the input matrix for decompose).
  ComplexMatrix hamiltonian;
  /// Eigenvalue merge / real-axis threshold used to build the clusters.
  double cluster_tol = 0.0;

  Eigen::Index dim() const { return psi.rows(); }

  /// Columns of Psi / Phi belonging to cluster n.
  ComplexMatrix psi_block(std::size_t n) const;
  ComplexMatrix phi_block(std::size_t n) const;

  /// Spectral projector Psi_n Phi_n^dagger of cluster n.
  ComplexMatrix projector(std::size_t n) const;
};

enum class SpectrumTag { AllReal, ConjugatePaired, Mixed, Unpairable };

std::string to_string(SpectrumTag tag);

struct SpectrumClass {
  SpectrumTag tag = SpectrumTag::AllReal;
  std::vector<ClusterKind> detail;
};

struct BiorthonormalityReport {
  Check left;   // ||Phi^dagger Psi - I||
  Check right;  // ||Psi Phi^dagger - I||
  bool passed() const { return left.passed() && right.passed(); }
};

/// max(atol, rtol * ||H||_2).
double cluster_tolerance(const ComplexMatrix& h, const Tolerance& tol);

/// Diagonalize H into a biorthonormal system. Throws NonDiagonalizable for
/// ill-conditioned or defective input.
BiorthonormalSystem decompose(const ComplexMatrix& h, const Tolerance& tol = {});

/// Build a system from known eigenvectors. `values[j]` is the eigenvalue of
/// column j of psi. phi defaults to (psi^-1)^dagger. Columns are regrouped
/// into the canonical cluster order.
BiorthonormalSystem system_from_eigenvectors(std::span<const Complex> values,
                                             const ComplexMatrix& psi,
                                             std::optional<ComplexMatrix> phi,
                                             const Tolerance& tol = {});

SpectrumClass classify_spectrum(const BiorthonormalSystem& sys, const Tolerance& tol = {});

BiorthonormalityReport verify_biorthonormality(const BiorthonormalSystem& sys,
                                               const Tolerance& tol = {});

/// Sum of E_n times the spectral projectors.
ComplexMatrix reconstruct(const BiorthonormalSystem& sys);

/// cond(Psi).
double eigenvector_condition(const BiorthonormalSystem& sys);

}  // namespace isospec
