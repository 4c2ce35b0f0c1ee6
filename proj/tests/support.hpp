// Random test matrices with known spectral data.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "isospec/numkernel.hpp"

namespace testing_support {

using isospec::Complex;
using isospec::ComplexMatrix;
using isospec::ComplexVector;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline ComplexMatrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix unitary(Eigen::Index n, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(n, n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

// U diag(s) V with singular values in [1, kappa].
inline ComplexMatrix well_conditioned(Eigen::Index n, Rng& rng, double kappa = 10.0) {
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::exp(uniform(rng, 0.0, std::log(kappa)));
  return unitary(n, rng) * s.cast<Complex>().asDiagonal() * unitary(n, rng);
}

inline ComplexMatrix positive_definite(Eigen::Index n, Rng& rng, double kappa = 10.0) {
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::exp(uniform(rng, 0.0, std::log(kappa)));
  const ComplexMatrix u = unitary(n, rng);
  return u * s.cast<Complex>().asDiagonal() * u.adjoint();
}

// Exactly rank r (generically): product of n x r and r x m Gaussian factors.
inline ComplexMatrix rank_deficient(Eigen::Index rows, Eigen::Index cols, Eigen::Index r,
                                    Rng& rng) {
  if (r == 0) return ComplexMatrix::Zero(rows, cols);
  return gaussian(rows, r, rng) * gaussian(r, cols, rng);
}

// n eigenvalues made of real values and conjugate pairs, separated by at
// least `gap` from each other.
inline std::vector<Complex> paired_spectrum(Eigen::Index n, Rng& rng, bool allow_pairs = true,
                                            double gap = 0.25) {
  std::vector<Complex> values;
  auto far_enough = [&](Complex z) {
    for (Complex v : values)
      if (std::abs(v - z) < gap) return false;
    return true;
  };
  while (static_cast<Eigen::Index>(values.size()) < n) {
    const bool pair = allow_pairs && static_cast<Eigen::Index>(values.size()) + 2 <= n &&
                      uniform_int(rng, 0, 1) == 1;
    if (pair) {
      const Complex z(uniform(rng, -3.0, 3.0), uniform(rng, 0.3, 3.0));
      if (far_enough(z) && far_enough(std::conj(z))) {
        values.push_back(z);
        values.push_back(std::conj(z));
      }
    } else {
      const Complex z(uniform(rng, -3.0, 3.0), 0.0);
      if (far_enough(z)) values.push_back(z);
    }
  }
  return values;
}

inline ComplexMatrix diag(const std::vector<Complex>& values) {
  ComplexVector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v.asDiagonal();
}

// W diag(values) W^-1.
inline ComplexMatrix similar(const std::vector<Complex>& values, const ComplexMatrix& w) {
  return w * diag(values) * w.inverse();
}

}  // namespace testing_support
