#include "isospec/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isospec {

void Tolerance::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0) || !(cond_max > 0.0)) {
    throw std::invalid_argument("tolerance fields must be strictly positive");
  }
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + " must be square, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

double norm2(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double condition_number(const ComplexMatrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

EigenPairs eig(const ComplexMatrix& m) {
  require_square(m, "eig input");
  if (!all_finite(m)) throw NumericalFailure("eig input contains non-finite entries");
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("complex Schur iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double rank_cutoff(const Eigen::VectorXd& singular_values, Eigen::Index rows,
                   Eigen::Index cols, const Tolerance& tol) {
  const double smax = singular_values.size() > 0 ? singular_values(0) : 0.0;
  const double scale = static_cast<double>(std::max(rows, cols));
  return std::max(tol.atol, scale * tol.rtol * smax);
}

namespace {

double cutoff_for(const Eigen::VectorXd& s, Eigen::Index rows, Eigen::Index cols,
                  const Tolerance& tol, const double* reference_norm) {
  if (!reference_norm) return rank_cutoff(s, rows, cols, tol);
  const double scale = static_cast<double>(std::max(rows, cols));
  return std::max(tol.atol, scale * tol.rtol * *reference_norm);
}

ComplexMatrix kernel_impl(const ComplexMatrix& m, const Tolerance& tol, const double* ref) {
  const Eigen::Index n = m.cols();
  if (n == 0) return ComplexMatrix(0, 0);
  if (m.rows() == 0) return ComplexMatrix::Identity(n, n);

  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = cutoff_for(s, m.rows(), m.cols(), tol, ref);

  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;

  ComplexMatrix k = svd.matrixV().rightCols(n - r);
  fix_column_phases(k);
  return k;
}

Eigen::Index rank_impl(const ComplexMatrix& m, const Tolerance& tol, const double* ref) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = cutoff_for(s, m.rows(), m.cols(), tol, ref);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return r;
}

}  // namespace

ComplexMatrix kernel_basis(const ComplexMatrix& m, const Tolerance& tol) {
  return kernel_impl(m, tol, nullptr);
}

ComplexMatrix kernel_basis(const ComplexMatrix& m, const Tolerance& tol, double reference_norm) {
  return kernel_impl(m, tol, &reference_norm);
}

Eigen::Index rank(const ComplexMatrix& m, const Tolerance& tol) {
  return rank_impl(m, tol, nullptr);
}

Eigen::Index rank(const ComplexMatrix& m, const Tolerance& tol, double reference_norm) {
  return rank_impl(m, tol, &reference_norm);
}

void fix_column_phases(ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double big = m.col(j).cwiseAbs().maxCoeff();
    if (big == 0.0) continue;
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) >= big * (1.0 - 1e-12)) {
        pivot = i;
        break;
      }
    }
    const Complex phase = std::conj(m(pivot, j)) / std::abs(m(pivot, j));
    m.col(j) *= phase;
    m(pivot, j) = Complex(m(pivot, j).real(), 0.0);
  }
}

}  // namespace isospec
