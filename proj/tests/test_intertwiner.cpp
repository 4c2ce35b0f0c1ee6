#include <doctest.h>

#include "isospec/intertwiner.hpp"
#include "isospec/twolevel.hpp"
#include "support.hpp"

using namespace isospec;
using namespace testing_support;

namespace {

const Complex I{0.0, 1.0};

ComplexMatrix diag_real(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(v.size(), v.size());
  Eigen::Index i = 0;
  for (double x : v) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("match_spectra") {
  Rng rng(41);
  SUBCASE("similar matrices") {
    const BiorthonormalSystem s1 = decompose(diag_real({1.0, 2.0}));
    const BiorthonormalSystem s2 = decompose(similar({1.0, 2.0}, well_conditioned(2, rng)));
    const SpectralPairing p = match_spectra(s1, s2);
    REQUIRE(p.matches.size() == 2);
    for (const auto& m : p.matches) CHECK(m.mu == 1);
    CHECK(std::abs(p.matches[0].value - 1.0) < 1e-12);
  }
  SUBCASE("oscillator against spin") {
    const BiorthonormalSystem osc = closed_form_system({0.0, I, -4.0 * I}).system;
    const BiorthonormalSystem spin = decompose(diag_real({2.0, -2.0}));
    const SpectralPairing p = match_spectra(osc, spin);
    REQUIRE(p.matches.size() == 2);
    for (const auto& m : p.matches) {
      CHECK(std::abs(osc.clusters[m.source].value - spin.clusters[m.target].value) < 1e-12);
    }
    CHECK(std::abs(p.matches[0].value + 2.0) < 1e-12);
  }
  SUBCASE("zero clusters") {
    const BiorthonormalSystem a = decompose(diag_real({0.0, 0.0, 1.0}));
    const BiorthonormalSystem b = decompose(diag_real({0.0, 1.0, 0.0}));
    const SpectralPairing p = match_spectra(a, b);
    CHECK(p.matches.size() == 2);
    CHECK(p.matches[0].mu == 2);
    // Different dimensions: the zero clusters may differ in size.
    const SpectralPairing q = match_spectra(a, decompose(diag_real({0.0, 1.0})));
    CHECK(q.matches.size() == 2);
    CHECK(q.matches[0].mu == 1);
    const SpectralPairing r = match_spectra(a, decompose(diag_real({1.0})));
    CHECK(r.matches.size() == 1);
    CHECK(r.unmatched_zero_source.has_value());
  }
  SUBCASE("mismatched spectra") {
    CHECK_THROWS_AS(match_spectra(decompose(diag_real({1.0, 2.0})), decompose(diag_real({1.0, 3.0}))),
                    NotIsospectral);
    CHECK_THROWS_AS(
        match_spectra(decompose(diag_real({1.0, 1.0, 2.0})), decompose(diag_real({1.0, 2.0, 2.0}))),
        NotIsospectral);
  }
}

TEST_CASE("build_intertwiner") {
  Rng rng(42);
  SUBCASE("unit coefficients on a system and itself give the identity") {
    const ComplexMatrix h = similar({1.0, Complex(0, 2), Complex(0, -2)}, well_conditioned(3, rng));
    const BiorthonormalSystem s = decompose(h);
    const SpectralPairing p = match_spectra(s, s);
    const Intertwiner l = build_intertwiner(p, std::vector<Complex>(p.matches.size(), 1.0));
    CHECK((l.l - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
  }
  SUBCASE("oscillator to spin at omega 2") {
    const BiorthonormalSystem osc = closed_form_system({0.0, I, -4.0 * I}).system;
    const std::array<Complex, 2> values{-2.0, 2.0};
    const BiorthonormalSystem spin = system_from_eigenvectors(
        values, (ComplexMatrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished(), std::nullopt);
    const SpectralPairing p = match_spectra(osc, spin);
    const Intertwiner l = build_intertwiner(p, {std::sqrt(2.0), std::sqrt(2.0)});
    const ComplexMatrix expected =
        std::sqrt(2.0) / 2.0 * (ComplexMatrix(2, 2) << 0.5, 0.25 * I, I, 0.5).finished();
    CHECK((l.l - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("random isospectral pairs and coefficients") {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = uniform_int(rng, 1, 8);
      const auto e = paired_spectrum(n, rng);
      const ComplexMatrix h1 = similar(e, well_conditioned(n, rng));
      const ComplexMatrix h2 = similar(e, well_conditioned(n, rng));
      const SpectralPairing p = match_spectra(decompose(h1), decompose(h2));
      std::vector<Complex> alpha;
      for (std::size_t k = 0; k < p.matches.size(); ++k) alpha.emplace_back(uniform(rng, -2, 2), uniform(rng, -2, 2));
      const Intertwiner l = build_intertwiner(p, alpha);
      CHECK(verify_intertwining(l.l, h1, h2).residual <= 1e-8 * (1.0 + norm2(l.l)) * (1.0 + norm2(h1)));
    }
    CHECK_THROWS_AS(build_intertwiner(match_spectra(decompose(diag_real({1.0})), decompose(diag_real({1.0}))),
                                      {1.0, 2.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("canonical_factorization") {
  SUBCASE("diag(2, -3) with itself") {
    const BiorthonormalSystem s = decompose(diag_real({2.0, -3.0}));
    const Factorization f = self_factorization(s);
    const ComplexMatrix l = diag_real({std::sqrt(2.0), std::sqrt(3.0)});
    const ComplexMatrix l_sharp = diag_real({std::sqrt(2.0), -std::sqrt(3.0)});
    CHECK((f.l.l - l).norm() < 1e-14);
    CHECK((f.l_sharp - l_sharp).norm() < 1e-14);
    CHECK((f.l_sharp * f.l.l - diag_real({2.0, -3.0})).norm() < 1e-14);
    CHECK((f.eta2.matrix() - ComplexMatrix::Identity(2, 2)).norm() < 1e-15);
    CHECK((f.eta1.matrix() - diag_real({1.0, -1.0})).norm() < 1e-15);
    CHECK(f.passed());
  }
  SUBCASE("Hermitian diag(1, 4)") {
    const Factorization f = self_factorization(decompose(diag_real({1.0, 4.0})));
    CHECK((f.l.l - diag_real({1.0, 2.0})).norm() < 1e-14);
    CHECK((f.eta1.matrix() - ComplexMatrix::Identity(2, 2)).norm() < 1e-15);
    CHECK((f.l_sharp - f.l.l.adjoint()).norm() < 1e-14);
  }
  SUBCASE("oscillator with itself reduces to sqrt(w) I") {
    for (double w : {0.5, 1.0, 2.0, 5.0}) {
      const OscillatorClosedForms ref = oscillator_closed_forms(w);
      const Factorization f = self_factorization(decompose(ref.h_o));
      CHECK((f.l.l - std::sqrt(w) * ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
      CHECK((f.l_sharp * f.l.l - ref.h_o).norm() <= f.residual_h1.threshold);
      // L# L = E eta1^-1 eta2.
      CHECK((f.l_sharp * f.l.l - w * f.eta1.inverse() * f.eta2.matrix()).norm() < 1e-10 * (1 + w * w));
    }
  }
  SUBCASE("oscillator to spin at omega 2") {
    const SpinDemo d = spin_intertwine_demo(2.0);
    CHECK(d.factorization.residual_h1.residual <= 1e-10);
    CHECK(d.factorization.residual_h2.residual <= 1e-10);
    CHECK(d.closed_form_deviation < 1e-12);
  }
  SUBCASE("Case II two-level with itself") {
    const BiorthonormalSystem s = decompose((ComplexMatrix(2, 2) << 0.0, 1.0, -4.0, 0.0).finished());
    const Factorization f = self_factorization(s);
    CHECK(f.passed());
    CHECK(f.residual_h1.residual <= 1e-12);
  }
  SUBCASE("spectrum {+-1, 2 +- i, 3, 3}") {
    Rng rng(43);
    const ComplexMatrix h =
        similar({1.0, -1.0, Complex(2, 1), Complex(2, -1), 3.0, 3.0}, well_conditioned(6, rng));
    const Factorization f = self_factorization(decompose(h));
    CHECK(f.passed());
    CHECK(f.residual_h1.residual <= 1e-8);
    CHECK(f.residual_h2.residual <= 1e-8);
  }
  SUBCASE("not isospectral") {
    CHECK_THROWS_AS(canonical_factorization(decompose(diag_real({1.0, 2.0})), decompose(diag_real({1.0, 3.0}))),
                    NotIsospectral);
  }
  SUBCASE("unpairable") {
    const std::array<Complex, 2> values{1.0, Complex(2, 3)};
    const BiorthonormalSystem s =
        system_from_eigenvectors(values, ComplexMatrix::Identity(2, 2), std::nullopt);
    CHECK_THROWS_AS(self_factorization(s), NotPseudoHermitian);
  }
  SUBCASE("singular spectrum") {
    Rng rng(44);
    const ComplexMatrix h = similar({0.0, 1.0}, well_conditioned(2, rng));
    const Factorization f = self_factorization(decompose(h));
    CHECK(f.passed());
  }
  SUBCASE("random isospectral pairs") {
    Rng rng(45);
    for (int trial = 0; trial < 30; ++trial) {
      const Eigen::Index n = uniform_int(rng, 1, 10);
      const auto e = paired_spectrum(n, rng);
      const ComplexMatrix h1 = similar(e, well_conditioned(n, rng));
      const ComplexMatrix h2 = similar(e, well_conditioned(n, rng));
      const Factorization f = canonical_factorization(decompose(h1), decompose(h2));
      CHECK(f.passed());
      CHECK(verify_intertwining(f.l.l, h1, h2).passed());
      CHECK(verify_intertwining(f.l_sharp, h2, h1).passed());
    }
  }
}

TEST_CASE("verify_intertwining") {
  Rng rng(46);
  const ComplexMatrix h = gaussian(3, 3, rng);
  CHECK(verify_intertwining(ComplexMatrix::Identity(3, 3), h, h).residual == 0.0);
  const ComplexMatrix h2 = gaussian(3, 3, rng);
  CHECK_FALSE(verify_intertwining(gaussian(3, 3, rng), h, h2).passed());
  const SpinDemo d = spin_intertwine_demo(2.0);
  CHECK(verify_intertwining(d.factorization.l.l, d.oscillator.hamiltonian, d.spin.hamiltonian).residual <=
        1e-12);
}
