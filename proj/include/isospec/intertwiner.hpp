// Intertwining operators between isospectral systems and the canonical
// factorization H1 = L# L, H2 = L L#.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "isospec/pseudoherm.hpp"

namespace isospec {

struct MatchedClusters {
  std::size_t source;  // cluster index in the first system
  std::size_t target;  // cluster index in the second system
  Eigen::Index mu;     // min of the two multiplicities
  Complex value;       // eigenvalue taken from the first system
};

/// Cluster-by-cluster correspondence of two spectra. Zero clusters may be
/// unmatched or carry unequal multiplicities.
struct SpectralPairing {
  std::shared_ptr<const BiorthonormalSystem> source;
  std::shared_ptr<const BiorthonormalSystem> target;
  std::vector<MatchedClusters> matches;
  std::optional<std::size_t> unmatched_zero_source;
  std::optional<std::size_t> unmatched_zero_target;
  double match_tol = 0.0;
};

struct Intertwiner {
  ComplexMatrix l;
  std::vector<Complex> alpha;  // one per entry of pairing.matches
  SpectralPairing pairing;
};

struct Factorization {
  Intertwiner l;
  EtaOperator eta1;
  EtaOperator eta2;
  ComplexMatrix l_sharp;  // eta1^-1 L^dagger eta2
  Check residual_h1;      // ||H1 - L# L||
  Check residual_h2;      // ||H2 - L L#||
  bool passed() const { return residual_h1.passed() && residual_h2.passed(); }
};

/// Greedy nearest-eigenvalue matching. Throws NotIsospectral when a nonzero
/// cluster is unmatched or has mismatched multiplicity.
SpectralPairing match_spectra(const BiorthonormalSystem& sys1, const BiorthonormalSystem& sys2,
                              const Tolerance& tol = {});

/// L = sum_n alpha_n sum_{a <= mu_n} |psi2_n,a><phi1_n,a|.
Intertwiner build_intertwiner(const SpectralPairing& pairing, const std::vector<Complex>& alpha);

/// Coefficients sqrt|E| on real clusters, E on the upper member of each
/// conjugate pair and 1 on the lower one.
std::vector<Complex> canonical_alpha(const SpectralPairing& pairing);

/// Signs -1 on real clusters with negative eigenvalue, +1 elsewhere.
SignAssignment canonical_source_signs(const BiorthonormalSystem& sys);

Factorization canonical_factorization(const BiorthonormalSystem& sys1,
                                      const BiorthonormalSystem& sys2,
                                      const Tolerance& tol = {});

/// canonical_factorization(sys, sys).
Factorization self_factorization(const BiorthonormalSystem& sys, const Tolerance& tol = {});

/// ||L H1 - H2 L|| against rtol (1 + max ||H_i||) ||L||.
Check verify_intertwining(const ComplexMatrix& l, const ComplexMatrix& h1, const ComplexMatrix& h2,
                          const Tolerance& tol = {});

/// Threshold scale shared by factorization residuals:
/// rtol (1 + max ||H_i||) cond(Psi1) cond(Psi2).
double factorization_threshold(const BiorthonormalSystem& sys1, const BiorthonormalSystem& sys2,
                               const Tolerance& tol);

}  // namespace isospec
