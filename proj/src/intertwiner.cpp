#include "isospec/intertwiner.hpp"

#include <cmath>
#include <stdexcept>

namespace isospec {

namespace {

std::string describe(Complex z) {
  return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

}  // namespace

SpectralPairing match_spectra(const BiorthonormalSystem& sys1, const BiorthonormalSystem& sys2,
                              const Tolerance& tol) {
  SpectralPairing p;
  p.source = std::make_shared<const BiorthonormalSystem>(sys1);
  p.target = std::make_shared<const BiorthonormalSystem>(sys2);
  p.match_tol = std::max({tol.atol, sys1.cluster_tol, sys2.cluster_tol});
  const double mtol = p.match_tol;

  std::vector<bool> used(sys2.clusters.size(), false);
  for (std::size_t i = 0; i < sys1.clusters.size(); ++i) {
    const auto& c1 = sys1.clusters[i];
    std::optional<std::size_t> best;
    double best_dist = mtol;
    for (std::size_t j = 0; j < sys2.clusters.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(sys2.clusters[j].value - c1.value);
      if (d <= best_dist) {
        best = j;
        best_dist = d;
      }
    }
    const bool zero = std::abs(c1.value) <= mtol;
    if (!best) {
      if (!zero) throw NotIsospectral("eigenvalue " + describe(c1.value) + " has no partner");
      p.unmatched_zero_source = i;
      continue;
    }
    const auto& c2 = sys2.clusters[*best];
    if (!zero && c1.multiplicity != c2.multiplicity) {
      throw NotIsospectral("eigenvalue " + describe(c1.value) + " has multiplicities " +
                           std::to_string(c1.multiplicity) + " and " +
                           std::to_string(c2.multiplicity));
    }
    used[*best] = true;
    p.matches.push_back({i, *best, std::min(c1.multiplicity, c2.multiplicity), c1.value});
  }
  for (std::size_t j = 0; j < sys2.clusters.size(); ++j) {
    if (used[j]) continue;
    if (std::abs(sys2.clusters[j].value) > mtol) {
      throw NotIsospectral("eigenvalue " + describe(sys2.clusters[j].value) +
                           " of the second system has no partner");
    }
    p.unmatched_zero_target = j;
  }
  return p;
}

Intertwiner build_intertwiner(const SpectralPairing& pairing, const std::vector<Complex>& alpha) {
  if (alpha.size() != pairing.matches.size()) {
    throw std::invalid_argument("one coefficient per matched cluster required");
  }
  const auto& s1 = *pairing.source;
  const auto& s2 = *pairing.target;
  ComplexMatrix l = ComplexMatrix::Zero(s2.dim(), s1.dim());
  for (std::size_t k = 0; k < pairing.matches.size(); ++k) {
    const auto& m = pairing.matches[k];
    const auto& c1 = s1.clusters[m.source];
    const auto& c2 = s2.clusters[m.target];
    l += alpha[k] * s2.psi.middleCols(c2.offset, m.mu) * s1.phi.middleCols(c1.offset, m.mu).adjoint();
  }
  return {std::move(l), alpha, pairing};
}

std::vector<Complex> canonical_alpha(const SpectralPairing& pairing) {
  std::vector<Complex> alpha;
  for (const auto& m : pairing.matches) {
    const auto& c = pairing.source->clusters[m.source];
    switch (c.kind) {
      case ClusterKind::Real: alpha.emplace_back(std::sqrt(std::abs(c.value.real())), 0.0); break;
      case ClusterKind::PairUpper: alpha.push_back(c.value); break;
      case ClusterKind::PairLower: alpha.emplace_back(1.0, 0.0); break;
    }
  }
  return alpha;
}

SignAssignment canonical_source_signs(const BiorthonormalSystem& sys) {
  SignAssignment s = SignAssignment::all_positive(sys);
  for (std::size_t k = 0; k < sys.clusters.size(); ++k) {
    if (sys.clusters[k].kind == ClusterKind::Real && sys.clusters[k].value.real() < 0.0) {
      for (int& v : s.per_cluster[k]) v = -1;
    }
  }
  return s;
}

double factorization_threshold(const BiorthonormalSystem& sys1, const BiorthonormalSystem& sys2,
                               const Tolerance& tol) {
  const double scale = 1.0 + std::max(norm2(sys1.hamiltonian), norm2(sys2.hamiltonian));
  return tol.rtol * scale * eigenvector_condition(sys1) * eigenvector_condition(sys2);
}

Factorization canonical_factorization(const BiorthonormalSystem& sys1,
                                      const BiorthonormalSystem& sys2, const Tolerance& tol) {
  tol.validate();
  // Metrics first: Unpairable spectra are rejected before isospectrality.
  EtaOperator eta1 = canonical_eta(sys1, canonical_source_signs(sys1));
  EtaOperator eta2 = canonical_eta(sys2, SignAssignment::all_positive(sys2));
  const SpectralPairing pairing = match_spectra(sys1, sys2, tol);
  Intertwiner l = build_intertwiner(pairing, canonical_alpha(pairing));
  ComplexMatrix l_sharp = pseudo_adjoint(l.l, eta1, eta2);

  const double threshold = factorization_threshold(sys1, sys2, tol);
  Check r1{norm2(sys1.hamiltonian - l_sharp * l.l), threshold};
  Check r2{norm2(sys2.hamiltonian - l.l * l_sharp), threshold};
  return {std::move(l), std::move(eta1), std::move(eta2), std::move(l_sharp), r1, r2};
}

Factorization self_factorization(const BiorthonormalSystem& sys, const Tolerance& tol) {
  return canonical_factorization(sys, sys, tol);
}

Check verify_intertwining(const ComplexMatrix& l, const ComplexMatrix& h1, const ComplexMatrix& h2,
                          const Tolerance& tol) {
  require_square(h1, "H1");
  require_square(h2, "H2");
  if (l.rows() != h2.rows() || l.cols() != h1.rows()) {
    throw DimensionMismatch("intertwiner shape does not match H1 -> H2");
  }
  const double residual = norm2(l * h1 - h2 * l);
  const double scale = 1.0 + std::max(norm2(h1), norm2(h2));
  return {residual, tol.rtol * scale * std::max(norm2(l), 1.0)};
}

}  // namespace isospec
