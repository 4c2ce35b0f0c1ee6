// JSON wire format for matrices and analysis results, plus the
// human-readable table renderer used by the CLI.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "isospec/psusy.hpp"
#include "isospec/twolevel.hpp"

namespace isospec::report {

using Json = nlohmann::ordered_json;

/// Malformed input files or flags. The CLI maps these to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"rows": n, "cols": m, "entries": [[[re, im], ...], ...]}
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& doc);
ComplexMatrix parse_matrix_text(const std::string& text);
ComplexMatrix parse_matrix_file(const std::string& path);

/// 64-bit FNV-1a of the raw bytes, as 16 lowercase hex digits.
std::string fnv1a64(const std::string& bytes);

Json complex_to_json(Complex z);
Json check_to_json(const Check& c);
Json tolerance_to_json(const Tolerance& tol);

Json system_to_json(const BiorthonormalSystem& sys, const Tolerance& tol);
Json eta_to_json(const EtaOperator& eta);
Json factorization_to_json(const Factorization& f);
Json algebra_to_json(const AlgebraReport& r);
Json witten_to_json(const WittenReport& r);
Json null_kernel_to_json(const NullKernelReport& r);
Json psusy_to_json(const PseudoSusySystem& s);
Json two_level_system_to_json(const TwoLevelSystem& s);
Json oscillator_demo_to_json(const OscillatorDemo& d);
Json spin_demo_to_json(const SpinDemo& d);

/// True unless some check object ({"residual", "threshold", "passed"})
/// anywhere in the document has passed == false.
bool all_checks_pass(const Json& doc);

/// Aligned text rendering; every check gets a PASS / FAIL marker.
void render_pretty(const Json& doc, std::ostream& out);

}  // namespace isospec::report
