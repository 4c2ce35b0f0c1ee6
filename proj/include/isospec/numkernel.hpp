// Dense complex linear algebra backbone: eigendecomposition, numerical rank
// and kernels under one shared tolerance policy.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace isospec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Base class for every mathematical/structural failure reported by the
/// library. The CLI maps these to exit code 1.
class MathError : public std::runtime_error {
 public:
  MathError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ISOSPEC_DEFINE_ERROR(Name)                                      \
  class Name : public MathError {                                       \
   public:                                                              \
    explicit Name(const std::string& what) : MathError(#Name, what) {} \
  }

ISOSPEC_DEFINE_ERROR(NumericalFailure);
ISOSPEC_DEFINE_ERROR(NonDiagonalizable);
ISOSPEC_DEFINE_ERROR(NotPseudoHermitian);
ISOSPEC_DEFINE_ERROR(InvalidEta);
ISOSPEC_DEFINE_ERROR(RealSpectrumRequired);
ISOSPEC_DEFINE_ERROR(NotIsospectral);
ISOSPEC_DEFINE_ERROR(DegenerateTwoLevel);
ISOSPEC_DEFINE_ERROR(NonRealDeterminant);
ISOSPEC_DEFINE_ERROR(DimensionMismatch);

#undef ISOSPEC_DEFINE_ERROR

/// Tolerance policy shared by every numerical decision in the library.
struct Tolerance {
  double rtol = 1e-8;
  double atol = 1e-12;
  double cond_max = 1e12;

  /// Throws std::invalid_argument unless all fields are strictly positive.
  void validate() const;
};

/// A residual together with the threshold it was judged against.
struct Check {
  double residual = 0.0;
  double threshold = 0.0;
  bool passed() const noexcept { return residual <= threshold; }
};

struct EigenPairs {
  ComplexVector values;
  ComplexMatrix right_vectors;
};

/// Throws DimensionMismatch unless M is square.
void require_square(const ComplexMatrix& m, const char* what);

/// True when every entry is finite.
bool all_finite(const ComplexMatrix& m);

/// Spectral norm (largest singular value); 0 for empty matrices.
double norm2(const ComplexMatrix& m);

/// Ratio of extreme singular values; +inf for singular input.
double condition_number(const ComplexMatrix& m);

/// Eigenvalues and right eigenvectors of a square matrix. Ordering is not
/// meaningful; callers sort or cluster explicitly.
EigenPairs eig(const ComplexMatrix& m);

/// Singular-value cutoff below which a direction is treated as null:
/// max(atol, max(rows, cols) * rtol * sigma_max).
double rank_cutoff(const Eigen::VectorXd& singular_values, Eigen::Index rows,
                   Eigen::Index cols, const Tolerance& tol);

/// Orthonormal basis of the numerical kernel (possibly zero columns).
ComplexMatrix kernel_basis(const ComplexMatrix& m, const Tolerance& tol);

/// Numerical rank; rank(m) + kernel_basis(m).cols() == m.cols().
Eigen::Index rank(const ComplexMatrix& m, const Tolerance& tol);

/// Variants judging singular values against an external scale instead of
/// sigma_max(m), for restrictions of a larger operator of that norm.
ComplexMatrix kernel_basis(const ComplexMatrix& m, const Tolerance& tol, double reference_norm);
Eigen::Index rank(const ComplexMatrix& m, const Tolerance& tol, double reference_norm);

/// Rotate every column by a unit phase so that its largest-magnitude entry
/// (first one on ties within 1e-12 relative) is real and positive.
void fix_column_phases(ComplexMatrix& m);

}  // namespace isospec
