// Pseudo-metric operators (eta), pseudo-adjoints, and the antilinear and
// Hermitian-similarity structures attached to a biorthonormal system.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "isospec/spectral.hpp"

namespace isospec {

/// One +/-1 sign per eigenvector of every Real cluster, indexed by cluster.
/// Entries for non-real clusters are empty.
struct SignAssignment {
  std::vector<std::vector<int>> per_cluster;

  static SignAssignment all_positive(const BiorthonormalSystem& sys);

  /// Signs listed positionally over the real-cluster eigenvectors in
  /// canonical cluster order. Throws std::invalid_argument on a length
  /// mismatch or an entry other than +/-1.
  static SignAssignment from_flat(const BiorthonormalSystem& sys, const std::vector<int>& flat);

  std::vector<int> flatten() const;
};

/// Hermitian invertible metric together with its inverse.
class EtaOperator {
 public:
  /// Validates Hermiticity and invertibility; throws InvalidEta.
  static EtaOperator from_matrix(const ComplexMatrix& m, const Tolerance& tol = {});

  static EtaOperator identity(Eigen::Index n);

  const ComplexMatrix& matrix() const { return matrix_; }
  const ComplexMatrix& inverse() const { return inverse_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  double condition() const;

  const std::optional<SignAssignment>& signs() const { return signs_; }
  const std::shared_ptr<const BiorthonormalSystem>& source() const { return source_; }

 private:
  friend EtaOperator make_eta(ComplexMatrix, ComplexMatrix, std::optional<SignAssignment>,
                              std::shared_ptr<const BiorthonormalSystem>);
  ComplexMatrix matrix_;
  ComplexMatrix inverse_;
  std::optional<SignAssignment> signs_;
  std::shared_ptr<const BiorthonormalSystem> source_;
};

/// Assemble an eta whose inverse is already known (no validation).
EtaOperator make_eta(ComplexMatrix matrix, ComplexMatrix inverse,
                     std::optional<SignAssignment> signs = std::nullopt,
                     std::shared_ptr<const BiorthonormalSystem> source = nullptr);

/// v -> S * conj(v).
struct AntilinearOperator {
  ComplexMatrix linear_part;

  ComplexVector apply(const ComplexVector& v) const { return linear_part * v.conjugate(); }
};

/// eta_plus^-1 A^dagger eta_minus, for A mapping the plus space into the minus space.
ComplexMatrix pseudo_adjoint(const ComplexMatrix& a, const EtaOperator& eta_plus,
                             const EtaOperator& eta_minus);

/// Canonical metric: sign-weighted dual projectors on real clusters, swap
/// terms on conjugate pairs. Throws NotPseudoHermitian for Unpairable spectra.
EtaOperator canonical_eta(const BiorthonormalSystem& sys, const SignAssignment& signs);
EtaOperator canonical_eta(const BiorthonormalSystem& sys);

/// General metric from per-cluster blocks. `blocks[n]` must be a Hermitian
/// invertible d_n x d_n matrix for Real clusters and an invertible d_n x d_n
/// matrix for PairUpper clusters; PairLower entries are ignored.
EtaOperator eta_from_blocks(const BiorthonormalSystem& sys,
                            const std::vector<ComplexMatrix>& blocks,
                            const Tolerance& tol = {});

/// ||eta H eta^-1 - H^dagger|| against rtol (1 + ||H||) cond(eta).
Check verify_pseudo_hermiticity(const ComplexMatrix& h, const EtaOperator& eta,
                                const Tolerance& tol = {});

/// S = Psi P Phi^T with P swapping conjugate-pair columns.
AntilinearOperator antilinear_symmetry(const BiorthonormalSystem& sys);

/// ||H S - S conj(H)|| against rtol ||H|| cond(Psi)^2.
Check verify_antilinear_symmetry(const BiorthonormalSystem& sys, const AntilinearOperator& s,
                                 const Tolerance& tol = {});

struct HermitianSimilarity {
  ComplexMatrix o;  // Psi^-1
  ComplexMatrix h;  // real diagonal
  EtaOperator eta;  // O^dagger O
};

/// Requires an AllReal spectrum (throws RealSpectrumRequired).
HermitianSimilarity hermitian_similarity(const BiorthonormalSystem& sys);

}  // namespace isospec
