#include "isospec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isospec {

std::string to_string(ClusterKind kind) {
  switch (kind) {
    case ClusterKind::Real: return "Real";
    case ClusterKind::PairUpper: return "PairUpper";
    case ClusterKind::PairLower: return "PairLower";
  }
  return "?";
}

std::string to_string(SpectrumTag tag) {
  switch (tag) {
    case SpectrumTag::AllReal: return "AllReal";
    case SpectrumTag::ConjugatePaired: return "ConjugatePaired";
    case SpectrumTag::Mixed: return "Mixed";
    case SpectrumTag::Unpairable: return "Unpairable";
  }
  return "?";
}

ComplexMatrix BiorthonormalSystem::psi_block(std::size_t n) const {
  const auto& c = clusters.at(n);
  return psi.middleCols(c.offset, c.multiplicity);
}

ComplexMatrix BiorthonormalSystem::phi_block(std::size_t n) const {
  const auto& c = clusters.at(n);
  return phi.middleCols(c.offset, c.multiplicity);
}

ComplexMatrix BiorthonormalSystem::projector(std::size_t n) const {
  return psi_block(n) * phi_block(n).adjoint();
}

double cluster_tolerance(const ComplexMatrix& h, const Tolerance& tol) {
  return std::max(tol.atol, tol.rtol * norm2(h));
}

double eigenvector_condition(const BiorthonormalSystem& sys) {
  return condition_number(sys.psi);
}

namespace {

struct Group {
  Complex value;
  std::vector<Eigen::Index> members;
  ClusterKind kind = ClusterKind::Real;
  std::optional<std::size_t> partner;  // index into the group list
};

// Single-linkage grouping of eigenvalues closer than ctol.
std::vector<Group> group_values(std::span<const Complex> values, double ctol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= ctol) parent[find(i)] = find(j);
    }
  }
  std::vector<Group> groups;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[root])].members.push_back(static_cast<Eigen::Index>(i));
  }
  for (auto& g : groups) {
    Complex sum = 0.0;
    for (auto m : g.members) sum += values[static_cast<std::size_t>(m)];
    g.value = sum / static_cast<double>(g.members.size());
  }
  return groups;
}

// Labels groups, pairs conjugates, snaps labeled values onto the real axis /
// exact conjugates and returns the canonical order of group indices.
std::vector<std::size_t> label_and_order(std::vector<Group>& groups, double ctol) {
  for (auto& g : groups) {
    const double im = g.value.imag();
    if (std::abs(im) <= ctol) {
      g.kind = ClusterKind::Real;
      g.value = Complex(g.value.real(), 0.0);
    } else {
      g.kind = im > 0 ? ClusterKind::PairUpper : ClusterKind::PairLower;
    }
  }

  // Greedy nearest-conjugate pairing, processing upper clusters in a fixed order.
  std::vector<std::size_t> uppers;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].kind == ClusterKind::PairUpper) uppers.push_back(i);
  }
  auto by_value = [&](std::size_t a, std::size_t b) {
    const Complex va = groups[a].value, vb = groups[b].value;
    if (va.real() != vb.real()) return va.real() < vb.real();
    return va.imag() < vb.imag();
  };
  std::sort(uppers.begin(), uppers.end(), by_value);
  for (std::size_t u : uppers) {
    std::optional<std::size_t> best;
    double best_dist = ctol;
    for (std::size_t l = 0; l < groups.size(); ++l) {
      if (groups[l].kind != ClusterKind::PairLower || groups[l].partner) continue;
      const double d = std::abs(groups[l].value - std::conj(groups[u].value));
      if (d <= best_dist) {
        best = l;
        best_dist = d;
      }
    }
    if (!best) continue;
    groups[u].partner = *best;
    groups[*best].partner = u;
    if (groups[u].members.size() == groups[*best].members.size()) {
      const Complex mid = 0.5 * (groups[u].value + std::conj(groups[*best].value));
      groups[u].value = mid;
      groups[*best].value = std::conj(mid);
    }
  }

  std::vector<std::size_t> heads;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const bool trailing = groups[i].kind == ClusterKind::PairLower && groups[i].partner;
    if (!trailing) heads.push_back(i);
  }
  std::sort(heads.begin(), heads.end(), by_value);
  std::vector<std::size_t> order;
  for (std::size_t h : heads) {
    order.push_back(h);
    if (groups[h].kind == ClusterKind::PairUpper && groups[h].partner) {
      order.push_back(*groups[h].partner);
    }
  }
  return order;
}

// Emits clusters in `order`, remapping partner indices.
std::vector<EigenCluster> make_clusters(const std::vector<Group>& groups,
                                        const std::vector<std::size_t>& order) {
  std::vector<std::size_t> position(groups.size());
  for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = k;
  std::vector<EigenCluster> clusters;
  Eigen::Index offset = 0;
  for (std::size_t g : order) {
    EigenCluster c;
    c.value = groups[g].value;
    c.multiplicity = static_cast<Eigen::Index>(groups[g].members.size());
    c.kind = groups[g].kind;
    if (groups[g].partner) c.partner = position[*groups[g].partner];
    c.offset = offset;
    offset += c.multiplicity;
    clusters.push_back(c);
  }
  return clusters;
}

}  // namespace

BiorthonormalSystem decompose(const ComplexMatrix& h, const Tolerance& tol) {
  tol.validate();
  require_square(h, "Hamiltonian");
  const Eigen::Index n = h.rows();
  BiorthonormalSystem sys;
  sys.hamiltonian = h;
  sys.psi = ComplexMatrix(n, n);
  if (n == 0) {
    sys.phi = ComplexMatrix(0, 0);
    return sys;
  }

  const EigenPairs pairs = eig(h);
  const double hnorm = norm2(h);
  const double ctol = std::max(tol.atol, tol.rtol * hnorm);
  sys.cluster_tol = ctol;

  std::vector<Complex> values(pairs.values.data(), pairs.values.data() + n);
  std::vector<Group> groups = group_values(values, ctol);

  // Eigenvectors of each cluster come from the null space of (H - E I),
  // which also certifies the geometric multiplicity.
  const double geometric_cutoff =
      std::max(tol.atol, static_cast<double>(n) * tol.rtol * hnorm);
  std::vector<ComplexMatrix> vectors(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Eigen::Index d = static_cast<Eigen::Index>(groups[g].members.size());
    ComplexMatrix shifted = h - groups[g].value * ComplexMatrix::Identity(n, n);
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
    const double largest_null = svd.singularValues()(n - d);
    if (largest_null > geometric_cutoff) {
      throw NonDiagonalizable("eigenvalue " + std::to_string(groups[g].value.real()) + "+" +
                              std::to_string(groups[g].value.imag()) +
                              "i has geometric multiplicity below its algebraic multiplicity " +
                              std::to_string(d));
    }
    vectors[g] = svd.matrixV().rightCols(d);
  }

  const std::vector<std::size_t> order = label_and_order(groups, ctol);
  sys.clusters = make_clusters(groups, order);
  for (std::size_t k = 0; k < order.size(); ++k) {
    sys.psi.middleCols(sys.clusters[k].offset, sys.clusters[k].multiplicity) = vectors[order[k]];
  }
  fix_column_phases(sys.psi);

  const double cond = condition_number(sys.psi);
  if (!(cond <= tol.cond_max)) {
    throw NonDiagonalizable("eigenvector matrix condition number " + std::to_string(cond) +
                            " exceeds cond_max");
  }
  sys.phi = sys.psi.inverse().adjoint();
  return sys;
}

BiorthonormalSystem system_from_eigenvectors(std::span<const Complex> values,
                                             const ComplexMatrix& psi,
                                             std::optional<ComplexMatrix> phi,
                                             const Tolerance& tol) {
  tol.validate();
  require_square(psi, "eigenvector matrix");
  const Eigen::Index n = psi.rows();
  if (static_cast<Eigen::Index>(values.size()) != n) {
    throw DimensionMismatch("one eigenvalue per eigenvector column required");
  }
  const double cond = condition_number(psi);
  if (!(cond <= tol.cond_max)) {
    throw NonDiagonalizable("eigenvector matrix condition number exceeds cond_max");
  }
  ComplexMatrix dual = phi ? *phi : ComplexMatrix(psi.inverse().adjoint());
  if (dual.rows() != n || dual.cols() != n) {
    throw DimensionMismatch("dual basis shape differs from eigenvector matrix");
  }

  ComplexVector diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = values[static_cast<std::size_t>(i)];
  const ComplexMatrix h = psi * diag.asDiagonal() * dual.adjoint();

  BiorthonormalSystem sys;
  sys.cluster_tol = cluster_tolerance(h, tol);
  std::vector<Group> groups = group_values(values, sys.cluster_tol);
  const std::vector<std::size_t> order = label_and_order(groups, sys.cluster_tol);
  sys.clusters = make_clusters(groups, order);
  sys.psi = ComplexMatrix(n, n);
  sys.phi = ComplexMatrix(n, n);
  Eigen::Index col = 0;
  for (std::size_t g : order) {
    for (Eigen::Index m : groups[g].members) {
      sys.psi.col(col) = psi.col(m);
      sys.phi.col(col) = dual.col(m);
      ++col;
    }
  }
  sys.hamiltonian = reconstruct(sys);
  return sys;
}

SpectrumClass classify_spectrum(const BiorthonormalSystem& sys, const Tolerance&) {
  SpectrumClass out;
  bool any_real = false;
  bool any_complex = false;
  bool unpaired = false;
  for (const auto& c : sys.clusters) {
    out.detail.push_back(c.kind);
    if (c.kind == ClusterKind::Real) {
      any_real = true;
      continue;
    }
    any_complex = true;
    if (!c.partner || sys.clusters[*c.partner].multiplicity != c.multiplicity) unpaired = true;
  }
  if (unpaired) {
    out.tag = SpectrumTag::Unpairable;
  } else if (any_real && any_complex) {
    out.tag = SpectrumTag::Mixed;
  } else if (any_complex) {
    out.tag = SpectrumTag::ConjugatePaired;
  } else {
    out.tag = SpectrumTag::AllReal;
  }
  return out;
}

BiorthonormalityReport verify_biorthonormality(const BiorthonormalSystem& sys,
                                               const Tolerance& tol) {
  const Eigen::Index n = sys.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const double threshold = tol.rtol * static_cast<double>(std::max<Eigen::Index>(n, 1));
  BiorthonormalityReport r;
  r.left = {norm2(sys.phi.adjoint() * sys.psi - id), threshold};
  r.right = {norm2(sys.psi * sys.phi.adjoint() - id), threshold};
  return r;
}

ComplexMatrix reconstruct(const BiorthonormalSystem& sys) {
  const Eigen::Index n = sys.dim();
  ComplexVector diag(n);
  for (const auto& c : sys.clusters) diag.segment(c.offset, c.multiplicity).setConstant(c.value);
  return sys.psi * diag.asDiagonal() * sys.phi.adjoint();
}

}  // namespace isospec
