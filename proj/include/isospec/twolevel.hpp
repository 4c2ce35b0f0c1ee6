// Closed-form treatment of nondegenerate traceless 2x2 Hamiltonians
// H = [[a, b], [c, -a]], including the harmonic-oscillator and spin demos.
#pragma once

#include "isospec/intertwiner.hpp"
#include "isospec/psusy.hpp"

namespace isospec {

struct TwoLevelParams {
  Complex a;
  Complex b;
  Complex c;

  /// sqrt(a^2 + bc) with Re >= 0; purely imaginary roots (within
  /// atol (1 + |E|) of the imaginary axis) are taken with Im >= 0.
  Complex energy(const Tolerance& tol = {}) const;
  /// 2 E (a + E).
  Complex normalization(const Tolerance& tol = {}) const;
  ComplexMatrix matrix() const;
};

struct TracelessForm {
  TwoLevelParams params;
  Complex trace_shift;  // tr(H) / 2
};

/// Reads (a, b, c) off H - tr(H)/2. Throws DegenerateTwoLevel when E vanishes.
TracelessForm normalize_traceless(const ComplexMatrix& h, const Tolerance& tol = {});

/// The closed-form eigenpairs in their natural labeling (E1 = -E, E2 = +E)
/// plus the same data as a BiorthonormalSystem in canonical cluster order.
struct TwoLevelSystem {
  TwoLevelParams params;  // as given
  Complex energy;
  bool rotated = false;   // a basis rotation was needed because a + E vanished
  ComplexVector psi1, psi2, phi1, phi2;
  BiorthonormalSystem system;
};

TwoLevelSystem closed_form_system(const TwoLevelParams& params, const Tolerance& tol = {});

enum class TwoLevelCase { RealEnergy, ImaginaryEnergy };

struct TwoLevelFactorization {
  TwoLevelCase which;
  TwoLevelSystem closed;
  Factorization factorization;
};

/// Closed-form factorization. Throws NonRealDeterminant unless E is real or
/// purely imaginary within atol (1 + |E|).
TwoLevelFactorization two_level_factorization(const TwoLevelParams& params,
                                              const Tolerance& tol = {});

/// Reference matrices for the oscillator H_o = [[0, i], [-i w^2, 0]] and its
/// partner H_s = diag(w, -w), written out analytically.
struct OscillatorClosedForms {
  ComplexMatrix h_o, h_s;
  ComplexMatrix eta1, eta1_inv, eta2;  // Case I metrics for H_o
  ComplexMatrix l_self, l_self_sharp;  // H_o = L# L with L = sqrt(w) I
  ComplexMatrix l_spin, l_spin_sharp;  // H_o -> H_s intertwiner
};

OscillatorClosedForms oscillator_closed_forms(double omega);

struct OscillatorDemo {
  double omega;
  TwoLevelSystem system;
  EtaOperator eta1;
  EtaOperator eta2;
  ComplexMatrix l;
  ComplexMatrix l_sharp;
  Check l_sharp_l;  // ||L# L - H_o||
  Check l_l_sharp;  // ||L L# - H_o||
  double closed_form_deviation;  // max entrywise gap to oscillator_closed_forms
};

OscillatorDemo oscillator_demo(double omega, const Tolerance& tol = {});

struct SpinDemo {
  double omega;
  BiorthonormalSystem oscillator;
  BiorthonormalSystem spin;
  Factorization factorization;
  Check l_sharp_l;  // ||L# L - H_o||
  Check l_l_sharp;  // ||L L# - H_s||
  Check intertwining;
  double closed_form_deviation;
  PseudoSusySystem psusy;
};

SpinDemo spin_intertwine_demo(double omega, const Tolerance& tol = {});

/// Largest entrywise modulus of a - b.
double max_entry_gap(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace isospec
