#include "isospec/pseudoherm.hpp"

#include <cmath>
#include <stdexcept>

namespace isospec {

SignAssignment SignAssignment::all_positive(const BiorthonormalSystem& sys) {
  SignAssignment s;
  for (const auto& c : sys.clusters) {
    s.per_cluster.emplace_back(c.kind == ClusterKind::Real ? c.multiplicity : 0, 1);
  }
  return s;
}

SignAssignment SignAssignment::from_flat(const BiorthonormalSystem& sys,
                                         const std::vector<int>& flat) {
  SignAssignment s;
  std::size_t k = 0;
  for (const auto& c : sys.clusters) {
    std::vector<int> block;
    if (c.kind == ClusterKind::Real) {
      for (Eigen::Index a = 0; a < c.multiplicity; ++a, ++k) {
        if (k >= flat.size()) {
          throw std::invalid_argument("too few signs for the real-eigenvalue eigenvectors");
        }
        if (flat[k] != 1 && flat[k] != -1) throw std::invalid_argument("signs must be +1 or -1");
        block.push_back(flat[k]);
      }
    }
    s.per_cluster.push_back(std::move(block));
  }
  if (k != flat.size()) {
    throw std::invalid_argument("got " + std::to_string(flat.size()) + " signs but only " +
                                std::to_string(k) + " real-eigenvalue eigenvectors");
  }
  return s;
}

std::vector<int> SignAssignment::flatten() const {
  std::vector<int> out;
  for (const auto& b : per_cluster) out.insert(out.end(), b.begin(), b.end());
  return out;
}

EtaOperator make_eta(ComplexMatrix matrix, ComplexMatrix inverse,
                     std::optional<SignAssignment> signs,
                     std::shared_ptr<const BiorthonormalSystem> source) {
  EtaOperator e;
  e.matrix_ = std::move(matrix);
  e.inverse_ = std::move(inverse);
  e.signs_ = std::move(signs);
  e.source_ = std::move(source);
  return e;
}

EtaOperator EtaOperator::from_matrix(const ComplexMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) throw InvalidEta("metric must be square");
  if (!all_finite(m)) throw InvalidEta("metric contains non-finite entries");
  const double scale = norm2(m);
  if (norm2(m - m.adjoint()) > tol.rtol * std::max(scale, tol.atol)) {
    throw InvalidEta("metric is not Hermitian");
  }
  if (rank(m, tol) < m.rows()) throw InvalidEta("metric is singular");
  return make_eta(m, m.fullPivLu().inverse());
}

EtaOperator EtaOperator::identity(Eigen::Index n) {
  return make_eta(ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(n, n));
}

double EtaOperator::condition() const { return condition_number(matrix_); }

ComplexMatrix pseudo_adjoint(const ComplexMatrix& a, const EtaOperator& eta_plus,
                             const EtaOperator& eta_minus) {
  if (a.cols() != eta_plus.dim() || a.rows() != eta_minus.dim()) {
    throw DimensionMismatch("operator shape does not match the metric dimensions");
  }
  return eta_plus.inverse() * a.adjoint() * eta_minus.matrix();
}

namespace {

void require_pairable(const BiorthonormalSystem& sys) {
  if (classify_spectrum(sys).tag == SpectrumTag::Unpairable) {
    throw NotPseudoHermitian("a complex eigenvalue lacks a conjugate partner of equal multiplicity");
  }
}

}  // namespace

EtaOperator canonical_eta(const BiorthonormalSystem& sys, const SignAssignment& signs) {
  require_pairable(sys);
  if (signs.per_cluster.size() != sys.clusters.size()) {
    throw std::invalid_argument("sign assignment does not match the cluster layout");
  }
  const Eigen::Index n = sys.dim();
  ComplexMatrix eta = ComplexMatrix::Zero(n, n);
  ComplexMatrix inv = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < sys.clusters.size(); ++k) {
    const auto& c = sys.clusters[k];
    const ComplexMatrix phi = sys.phi_block(k);
    const ComplexMatrix psi = sys.psi_block(k);
    switch (c.kind) {
      case ClusterKind::Real: {
        const auto& s = signs.per_cluster[k];
        if (static_cast<Eigen::Index>(s.size()) != c.multiplicity) {
          throw std::invalid_argument("sign count differs from cluster multiplicity");
        }
        Eigen::VectorXcd d(c.multiplicity);
        for (Eigen::Index a = 0; a < c.multiplicity; ++a) d(a) = static_cast<double>(s[a]);
        eta += phi * d.asDiagonal() * phi.adjoint();
        inv += psi * d.asDiagonal() * psi.adjoint();
        break;
      }
      case ClusterKind::PairUpper: {
        const ComplexMatrix phi_low = sys.phi_block(*c.partner);
        const ComplexMatrix psi_low = sys.psi_block(*c.partner);
        const ComplexMatrix cross = phi * phi_low.adjoint();
        const ComplexMatrix cross_inv = psi_low * psi.adjoint();
        eta += cross + cross.adjoint();
        inv += cross_inv + cross_inv.adjoint();
        break;
      }
      case ClusterKind::PairLower:
        break;
    }
  }
  return make_eta(std::move(eta), std::move(inv), signs,
                  std::make_shared<const BiorthonormalSystem>(sys));
}

EtaOperator canonical_eta(const BiorthonormalSystem& sys) {
  return canonical_eta(sys, SignAssignment::all_positive(sys));
}

EtaOperator eta_from_blocks(const BiorthonormalSystem& sys,
                            const std::vector<ComplexMatrix>& blocks, const Tolerance& tol) {
  require_pairable(sys);
  if (blocks.size() != sys.clusters.size()) {
    throw std::invalid_argument("one block per cluster required");
  }
  const Eigen::Index n = sys.dim();
  ComplexMatrix eta = ComplexMatrix::Zero(n, n);
  ComplexMatrix inv = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < sys.clusters.size(); ++k) {
    const auto& c = sys.clusters[k];
    if (c.kind == ClusterKind::PairLower) continue;
    const ComplexMatrix& m = blocks[k];
    if (m.rows() != c.multiplicity || m.cols() != c.multiplicity) {
      throw InvalidEta("block " + std::to_string(k) + " has the wrong size");
    }
    if (rank(m, tol) < c.multiplicity) throw InvalidEta("block " + std::to_string(k) + " is singular");
    const ComplexMatrix m_inv = m.fullPivLu().inverse();
    const ComplexMatrix phi = sys.phi_block(k);
    const ComplexMatrix psi = sys.psi_block(k);
    if (c.kind == ClusterKind::Real) {
      if (norm2(m - m.adjoint()) > tol.rtol * norm2(m)) {
        throw InvalidEta("block " + std::to_string(k) + " of a real cluster must be Hermitian");
      }
      eta += phi * m * phi.adjoint();
      inv += psi * m_inv * psi.adjoint();
    } else {
      const ComplexMatrix phi_low = sys.phi_block(*c.partner);
      const ComplexMatrix psi_low = sys.psi_block(*c.partner);
      const ComplexMatrix cross = phi * m * phi_low.adjoint();
      const ComplexMatrix cross_inv = psi_low * m_inv * psi.adjoint();
      eta += cross + cross.adjoint();
      inv += cross_inv + cross_inv.adjoint();
    }
  }
  return make_eta(std::move(eta), std::move(inv), std::nullopt,
                  std::make_shared<const BiorthonormalSystem>(sys));
}

Check verify_pseudo_hermiticity(const ComplexMatrix& h, const EtaOperator& eta,
                                const Tolerance& tol) {
  require_square(h, "Hamiltonian");
  if (h.rows() != eta.dim()) throw DimensionMismatch("metric and Hamiltonian dimensions differ");
  const double residual = norm2(eta.matrix() * h * eta.inverse() - h.adjoint());
  return {residual, tol.rtol * (1.0 + norm2(h)) * eta.condition()};
}

AntilinearOperator antilinear_symmetry(const BiorthonormalSystem& sys) {
  require_pairable(sys);
  ComplexMatrix swapped = sys.psi;
  for (const auto& c : sys.clusters) {
    if (c.kind != ClusterKind::PairUpper) continue;
    const auto& low = sys.clusters[*c.partner];
    swapped.middleCols(low.offset, low.multiplicity) = sys.psi.middleCols(c.offset, c.multiplicity);
    swapped.middleCols(c.offset, c.multiplicity) = sys.psi.middleCols(low.offset, low.multiplicity);
  }
  // Psi P with P the pair swap, followed by Phi^T.
  return {swapped * sys.phi.transpose()};
}

Check verify_antilinear_symmetry(const BiorthonormalSystem& sys, const AntilinearOperator& s,
                                 const Tolerance& tol) {
  const ComplexMatrix& h = sys.hamiltonian;
  const double residual = norm2(h * s.linear_part - s.linear_part * h.conjugate());
  const double cond = eigenvector_condition(sys);
  return {residual, tol.rtol * std::max(norm2(h), tol.atol) * cond * cond};
}

HermitianSimilarity hermitian_similarity(const BiorthonormalSystem& sys) {
  if (classify_spectrum(sys).tag != SpectrumTag::AllReal) {
    throw RealSpectrumRequired("Hermitian similarity needs an all-real spectrum");
  }
  const Eigen::Index n = sys.dim();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (const auto& c : sys.clusters) {
    h.diagonal().segment(c.offset, c.multiplicity).setConstant(Complex(c.value.real(), 0.0));
  }
  ComplexMatrix eta = sys.phi * sys.phi.adjoint();
  ComplexMatrix eta_inv = sys.psi * sys.psi.adjoint();
  return {sys.phi.adjoint(), std::move(h),
          make_eta(std::move(eta), std::move(eta_inv), std::nullopt,
                   std::make_shared<const BiorthonormalSystem>(sys))};
}

}  // namespace isospec
