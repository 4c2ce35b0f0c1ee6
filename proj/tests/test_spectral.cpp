#include <doctest.h>

#include <array>

#include "isospec/spectral.hpp"
#include "support.hpp"

using namespace isospec;
using namespace testing_support;

namespace {

const Complex I{0.0, 1.0};

ComplexMatrix oscillator(double w) {
  ComplexMatrix h(2, 2);
  h << 0.0, I, -I * w * w, 0.0;
  return h;
}

// |<u, v>| = |u| |v| up to rounding.
bool parallel(const ComplexVector& u, const ComplexVector& v) {
  return std::abs(std::abs(u.dot(v)) - u.norm() * v.norm()) < 1e-12 * u.norm() * v.norm();
}

}  // namespace

TEST_CASE("decompose diag(1, 2, 3)") {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h.diagonal() << 1.0, 2.0, 3.0;
  const BiorthonormalSystem sys = decompose(h);
  REQUIRE(sys.clusters.size() == 3);
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK(sys.clusters[n].kind == ClusterKind::Real);
    CHECK(sys.clusters[n].value == Complex(double(n + 1), 0.0));
  }
  CHECK((sys.psi - ComplexMatrix::Identity(3, 3)).norm() < 1e-14);
  CHECK((sys.phi - ComplexMatrix::Identity(3, 3)).norm() < 1e-14);
  CHECK(classify_spectrum(sys).tag == SpectrumTag::AllReal);
  CHECK((reconstruct(sys) - h).norm() < 1e-14);
}

TEST_CASE("decompose the oscillator at omega 2") {
  const BiorthonormalSystem sys = decompose(oscillator(2.0));
  REQUIRE(sys.clusters.size() == 2);
  CHECK(std::abs(sys.clusters[0].value + 2.0) < 1e-12);
  CHECK(std::abs(sys.clusters[1].value - 2.0) < 1e-12);
  CHECK(sys.clusters[0].value.imag() == 0.0);
  ComplexVector psi1(2), psi2(2);
  psi1 << -I, 2.0;
  psi2 << 2.0, -4.0 * I;
  CHECK(parallel(sys.psi.col(0), psi1));
  CHECK(parallel(sys.psi.col(1), psi2));
  CHECK(verify_biorthonormality(sys).passed());
  CHECK((reconstruct(sys) - oscillator(2.0)).norm() < 1e-12);
}

TEST_CASE("defective input is rejected") {
  ComplexMatrix j(2, 2);
  j << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(decompose(j), NonDiagonalizable);
  ComplexMatrix j3 = ComplexMatrix::Identity(3, 3) * 2.0;
  j3(1, 2) = 1.0;
  CHECK_THROWS_AS(decompose(j3), NonDiagonalizable);
  CHECK_THROWS_AS(decompose(ComplexMatrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("spectrum classification") {
  SUBCASE("conjugate pair from a real-determinant two-level system") {
    ComplexMatrix h(2, 2);
    h << 0.0, 1.0, -4.0, 0.0;  // E = 2i
    const BiorthonormalSystem sys = decompose(h);
    CHECK(classify_spectrum(sys).tag == SpectrumTag::ConjugatePaired);
    REQUIRE(sys.clusters.size() == 2);
    CHECK(sys.clusters[0].kind == ClusterKind::PairUpper);
    CHECK(sys.clusters[1].kind == ClusterKind::PairLower);
    CHECK(sys.clusters[0].value == std::conj(sys.clusters[1].value));
    CHECK(std::abs(sys.clusters[0].value - 2.0 * I) < 1e-12);
    CHECK(*sys.clusters[0].partner == 1);
    CHECK(*sys.clusters[1].partner == 0);
  }
  SUBCASE("unpaired complex eigenvalue") {
    const std::array<Complex, 2> values{1.0, Complex(2, 3)};
    const BiorthonormalSystem sys =
        system_from_eigenvectors(values, ComplexMatrix::Identity(2, 2), std::nullopt);
    CHECK(classify_spectrum(sys).tag == SpectrumTag::Unpairable);
  }
  SUBCASE("mixed") {
    const std::array<Complex, 3> values{Complex(1, 1), 5.0, Complex(1, -1)};
    const BiorthonormalSystem sys =
        system_from_eigenvectors(values, ComplexMatrix::Identity(3, 3), std::nullopt);
    const SpectrumClass c = classify_spectrum(sys);
    CHECK(c.tag == SpectrumTag::Mixed);
    REQUIRE(c.detail.size() == 3);
    // (Re, Im) order with the lower partner right after the upper one.
    CHECK(c.detail[0] == ClusterKind::PairUpper);
    CHECK(c.detail[1] == ClusterKind::PairLower);
    CHECK(c.detail[2] == ClusterKind::Real);
  }
  SUBCASE("uneven multiplicities cannot pair") {
    const std::array<Complex, 3> values{Complex(0, 1), Complex(0, 1), Complex(0, -1)};
    const BiorthonormalSystem sys =
        system_from_eigenvectors(values, ComplexMatrix::Identity(3, 3), std::nullopt);
    CHECK(classify_spectrum(sys).tag == SpectrumTag::Unpairable);
  }
}

TEST_CASE("degenerate clusters") {
  Rng rng(21);
  const std::vector<Complex> e{3.0, 3.0, -1.0, Complex(2, 1), Complex(2, 1), Complex(2, -1),
                               Complex(2, -1)};
  const ComplexMatrix h = similar(e, well_conditioned(7, rng));
  const BiorthonormalSystem sys = decompose(h);
  REQUIRE(sys.clusters.size() == 4);
  CHECK(sys.clusters[0].multiplicity == 1);
  CHECK(sys.clusters[1].multiplicity == 2);
  CHECK(sys.clusters[1].kind == ClusterKind::PairUpper);
  CHECK(sys.clusters[2].kind == ClusterKind::PairLower);
  CHECK(sys.clusters[3].multiplicity == 2);
  CHECK(sys.clusters[3].value == Complex(sys.clusters[3].value.real(), 0.0));
  CHECK(classify_spectrum(sys).tag == SpectrumTag::Mixed);
  CHECK(verify_biorthonormality(sys).passed());
  CHECK((reconstruct(sys) - h).norm() <= 1e-8 * norm2(h));
  Eigen::Index offset = 0;
  for (std::size_t n = 0; n < sys.clusters.size(); ++n) {
    CHECK(sys.clusters[n].offset == offset);
    offset += sys.clusters[n].multiplicity;
    const ComplexMatrix p = sys.projector(n);
    CHECK((p * p - p).norm() < 1e-8 * (1.0 + p.norm()));
    CHECK((h * sys.psi_block(n) - sys.clusters[n].value * sys.psi_block(n)).norm() <
          1e-8 * norm2(h));
  }
}

TEST_CASE("biorthonormality residuals") {
  SUBCASE("identity system") {
    const std::array<Complex, 2> values{1.0, 2.0};
    const BiorthonormalSystem sys =
        system_from_eigenvectors(values, ComplexMatrix::Identity(2, 2), std::nullopt);
    const BiorthonormalityReport r = verify_biorthonormality(sys);
    CHECK(r.left.residual == 0.0);
    CHECK(r.right.residual == 0.0);
  }
  SUBCASE("oscillator from closed-form vectors") {
    ComplexMatrix psi(2, 2), phi(2, 2);
    psi << -I, 2.0, 2.0, -4.0 * I;
    phi << -0.5 * I, 0.25, 0.25, -0.125 * I;
    const std::array<Complex, 2> values{-2.0, 2.0};
    const BiorthonormalSystem sys = system_from_eigenvectors(values, psi, phi);
    const BiorthonormalityReport r = verify_biorthonormality(sys);
    CHECK(r.left.residual <= 1e-12);
    CHECK(r.right.residual <= 1e-12);
    CHECK((reconstruct(sys) - oscillator(2.0)).norm() < 1e-12);
  }
  SUBCASE("perturbed duals fail") {
    Rng rng(8);
    BiorthonormalSystem sys = decompose(similar({1.0, 2.0, 3.0}, well_conditioned(3, rng)));
    ComplexMatrix dp = gaussian(3, 3, rng);
    dp *= 1e-3 / norm2(dp);
    sys.phi += dp;
    const BiorthonormalityReport r = verify_biorthonormality(sys);
    CHECK_FALSE(r.passed());
    CHECK(r.left.residual > 1e-5);
    CHECK(r.left.residual < 1e-1);
  }
}

TEST_CASE("random round trips") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = uniform_int(rng, 1, 8);
    const ComplexMatrix h = similar(paired_spectrum(n, rng), well_conditioned(n, rng));
    const BiorthonormalSystem sys = decompose(h);
    CHECK((reconstruct(sys) - h).norm() <= 1e-8 * norm2(h));
    CHECK(verify_biorthonormality(sys).passed());
    const SpectrumTag tag = classify_spectrum(sys).tag;
    CHECK(tag != SpectrumTag::Unpairable);
  }
}

TEST_CASE("system_from_eigenvectors regroups columns") {
  const std::array<Complex, 3> values{2.0, -1.0, 2.0};
  ComplexMatrix psi = ComplexMatrix::Identity(3, 3);
  const BiorthonormalSystem sys = system_from_eigenvectors(values, psi, std::nullopt);
  REQUIRE(sys.clusters.size() == 2);
  CHECK(sys.clusters[0].value == Complex(-1.0, 0.0));
  CHECK(sys.clusters[1].multiplicity == 2);
  CHECK(std::abs(sys.psi(1, 0)) == 1.0);
  CHECK((reconstruct(sys) - sys.hamiltonian).norm() == 0.0);
}
