#include "isospec/report.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace isospec::report {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    entries.push_back(std::move(row));
  }
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["entries"] = std::move(entries);
  return out;
}

namespace {

double finite_number(const Json& v, const char* what) {
  if (!v.is_number()) throw UsageError(std::string(what) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw UsageError(std::string(what) + " must be finite");
  return x;
}

Eigen::Index dimension(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 0) {
    throw UsageError(std::string("matrix field \"") + key + "\" must be a non-negative integer");
  }
  return static_cast<Eigen::Index>(doc[key].get<long long>());
}

}  // namespace

ComplexMatrix matrix_from_json(const Json& doc) {
  if (!doc.is_object()) throw UsageError("matrix document must be a JSON object");
  const Eigen::Index rows = dimension(doc, "rows");
  const Eigen::Index cols = dimension(doc, "cols");
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw UsageError("matrix field \"entries\" must be an array");
  }
  const Json& entries = doc["entries"];
  if (static_cast<Eigen::Index>(entries.size()) != rows) {
    throw UsageError("entries has " + std::to_string(entries.size()) + " rows, expected " +
                     std::to_string(rows));
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = entries[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw UsageError("row " + std::to_string(i) + " must hold " + std::to_string(cols) +
                       " entries");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Json& z = row[static_cast<std::size_t>(j)];
      if (!z.is_array() || z.size() != 2) throw UsageError("entries must be [re, im] pairs");
      m(i, j) = Complex(finite_number(z[0], "real part"), finite_number(z[1], "imaginary part"));
    }
  }
  return m;
}

ComplexMatrix parse_matrix_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
  return matrix_from_json(doc);
}

ComplexMatrix parse_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read matrix file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix_text(buf.str());
  } catch (const UsageError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Json check_to_json(const Check& c) {
  Json j;
  j["residual"] = c.residual;
  j["threshold"] = c.threshold;
  j["passed"] = c.passed();
  return j;
}

Json tolerance_to_json(const Tolerance& tol) {
  Json j;
  j["rtol"] = tol.rtol;
  j["atol"] = tol.atol;
  j["cond_max"] = tol.cond_max;
  return j;
}

Json system_to_json(const BiorthonormalSystem& sys, const Tolerance& tol) {
  Json clusters = Json::array();
  for (const auto& c : sys.clusters) {
    Json jc;
    jc["value"] = complex_to_json(c.value);
    jc["multiplicity"] = c.multiplicity;
    jc["kind"] = to_string(c.kind);
    jc["partner"] = c.partner ? Json(*c.partner) : Json(nullptr);
    clusters.push_back(std::move(jc));
  }
  const BiorthonormalityReport bio = verify_biorthonormality(sys, tol);
  Json j;
  j["dim"] = sys.dim();
  j["tag"] = to_string(classify_spectrum(sys, tol).tag);
  j["cluster_tol"] = sys.cluster_tol;
  j["clusters"] = std::move(clusters);
  j["psi"] = matrix_to_json(sys.psi);
  j["phi"] = matrix_to_json(sys.phi);
  j["eigenvector_condition"] = eigenvector_condition(sys);
  j["biorthonormality"]["phi_dagger_psi"] = check_to_json(bio.left);
  j["biorthonormality"]["psi_phi_dagger"] = check_to_json(bio.right);
  return j;
}

Json eta_to_json(const EtaOperator& eta) {
  Json j;
  if (eta.signs()) j["signs"] = eta.signs()->flatten();
  j["matrix"] = matrix_to_json(eta.matrix());
  j["inverse"] = matrix_to_json(eta.inverse());
  return j;
}

Json factorization_to_json(const Factorization& f) {
  Json alpha = Json::array();
  for (Complex a : f.l.alpha) alpha.push_back(complex_to_json(a));
  Json j;
  j["alpha"] = std::move(alpha);
  j["L"] = matrix_to_json(f.l.l);
  j["L_sharp"] = matrix_to_json(f.l_sharp);
  j["eta1"] = eta_to_json(f.eta1);
  j["eta2"] = eta_to_json(f.eta2);
  j["residual_H1"] = check_to_json(f.residual_h1);
  j["residual_H2"] = check_to_json(f.residual_h2);
  return j;
}

Json algebra_to_json(const AlgebraReport& r) {
  Json j;
  j["Q_squared"] = check_to_json({r.q_squared, 0.0});
  j["Q_sharp_squared"] = check_to_json(r.q_sharp_squared);
  j["anticommutator_minus_2H"] = check_to_json(r.anticommutator);
  j["tau_Q_anticommutator"] = check_to_json(r.grading);
  j["eta_tau_commutator"] = check_to_json(r.metric_even);
  j["Q_H_commutator"] = check_to_json(r.charge_conserved);
  j["intertwining_plus"] = check_to_json(r.intertwine_plus);
  j["intertwining_minus"] = check_to_json(r.intertwine_minus);
  return j;
}

Json witten_to_json(const WittenReport& r) {
  Json j;
  j["d0_plus"] = r.d0_plus;
  j["d0_minus"] = r.d0_minus;
  j["delta"] = r.delta;
  j["ker_D"] = r.ker_d;
  j["ker_D_dagger"] = r.ker_d_dagger;
  j["ker_D0"] = r.ker_d0;
  j["ker_D0_flat"] = r.ker_d0_flat;
  j["betti_plus"] = r.betti_plus;
  j["betti_minus"] = r.betti_minus;
  j["analytic_index_sigma"] = r.analytic_index_sigma;
  j["analytic_index_D"] = r.analytic_index_d;
  j["non_null_kernels"] = r.non_null_kernels;
  j["sigma_identity_holds"] = r.sigma_identity_holds();
  j["D_identity_holds"] = r.d_identity_holds();
  j["kernel_mapping_plus"] = check_to_json(r.kernel_mapping_plus);
  j["kernel_mapping_minus"] = check_to_json(r.kernel_mapping_minus);
  j["complex_A_plus_A_minus"] = check_to_json(r.complex_a_plus_a_minus);
  j["complex_A_minus_A_plus"] = check_to_json(r.complex_a_minus_a_plus);
  return j;
}

Json null_kernel_to_json(const NullKernelReport& r) {
  auto vec = [](const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  Json j;
  j["plus_non_null"] = r.plus_non_null;
  j["minus_non_null"] = r.minus_non_null;
  j["plus_restricted_form_eigenvalues"] = vec(r.plus_form);
  j["minus_restricted_form_eigenvalues"] = vec(r.minus_form);
  return j;
}

Json psusy_to_json(const PseudoSusySystem& s) {
  Json j;
  j["D"] = matrix_to_json(s.d);
  j["D_sharp"] = matrix_to_json(s.d_sharp);
  j["H_plus"] = matrix_to_json(s.h_plus);
  j["H_minus"] = matrix_to_json(s.h_minus);
  return j;
}

Json two_level_system_to_json(const TwoLevelSystem& s) {
  auto vec = [](const ComplexVector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
    return a;
  };
  Json j;
  j["a"] = complex_to_json(s.params.a);
  j["b"] = complex_to_json(s.params.b);
  j["c"] = complex_to_json(s.params.c);
  j["E"] = complex_to_json(s.energy);
  j["rotated_basis"] = s.rotated;
  j["psi1"] = vec(s.psi1);
  j["psi2"] = vec(s.psi2);
  j["phi1"] = vec(s.phi1);
  j["phi2"] = vec(s.phi2);
  const BiorthonormalityReport bio = verify_biorthonormality(s.system);
  j["biorthonormality"]["phi_dagger_psi"] = check_to_json(bio.left);
  j["biorthonormality"]["psi_phi_dagger"] = check_to_json(bio.right);
  return j;
}

Json oscillator_demo_to_json(const OscillatorDemo& d) {
  Json j;
  j["omega"] = d.omega;
  j["H_o"] = matrix_to_json(d.system.params.matrix());
  j["closed_form"] = two_level_system_to_json(d.system);
  j["eta1"] = matrix_to_json(d.eta1.matrix());
  j["eta1_inverse"] = matrix_to_json(d.eta1.inverse());
  j["eta2"] = matrix_to_json(d.eta2.matrix());
  j["L"] = matrix_to_json(d.l);
  j["L_sharp"] = matrix_to_json(d.l_sharp);
  j["L_sharp_L_minus_H_o"] = check_to_json(d.l_sharp_l);
  j["L_L_sharp_minus_H_o"] = check_to_json(d.l_l_sharp);
  j["closed_form_deviation"] = check_to_json({d.closed_form_deviation, 1e-12});
  return j;
}

Json spin_demo_to_json(const SpinDemo& d) {
  Json j;
  j["omega"] = d.omega;
  j["H_o"] = matrix_to_json(d.oscillator.hamiltonian);
  j["H_s"] = matrix_to_json(d.spin.hamiltonian);
  j["factorization"] = factorization_to_json(d.factorization);
  j["L_sharp_L_minus_H_o"] = check_to_json(d.l_sharp_l);
  j["L_L_sharp_minus_H_s"] = check_to_json(d.l_l_sharp);
  j["intertwining"] = check_to_json(d.intertwining);
  j["closed_form_deviation"] = check_to_json({d.closed_form_deviation, 1e-12});
  j["psusy"] = psusy_to_json(d.psusy);
  return j;
}

namespace {

bool is_check(const Json& j) {
  return j.is_object() && j.size() == 3 && j.contains("residual") && j.contains("threshold") &&
         j.contains("passed");
}

bool is_matrix(const Json& j) {
  return j.is_object() && j.contains("rows") && j.contains("cols") && j.contains("entries");
}

bool is_complex(const Json& j) {
  return j.is_array() && j.size() == 2 && j[0].is_number_float() && j[1].is_number_float();
}

std::string format_number(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string format_complex(const Json& z) {
  // + 0.0 drops the sign of negative zero.
  const double re = z[0].get<double>() + 0.0, im = z[1].get<double>() + 0.0;
  std::ostringstream os;
  os << std::setprecision(8) << re << (im < 0 ? " - " : " + ") << std::abs(im) << "i";
  return os.str();
}

std::string format_scalar(const Json& j) {
  if (j.is_number_float()) return format_number(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  if (is_complex(j)) return format_complex(j);
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) s += ", ";
      s += format_scalar(j[i]);
    }
    return s + "]";
  }
  return j.dump();
}

void render(const Json& j, const std::string& key, int depth, std::ostream& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  if (is_check(j)) {
    out << indent << std::left << std::setw(32) << key << " residual " << std::setw(18)
        << format_number(j["residual"].get<double>()) << " threshold " << std::setw(18)
        << format_number(j["threshold"].get<double>()) << (j["passed"].get<bool>() ? " PASS" : " FAIL")
        << '\n';
    return;
  }
  if (is_matrix(j)) {
    out << indent << key << " (" << j["rows"].get<long long>() << "x" << j["cols"].get<long long>()
        << ")\n";
    for (const auto& row : j["entries"]) {
      out << indent << "  ";
      for (const auto& z : row) out << std::right << std::setw(34) << format_complex(z);
      out << '\n';
    }
    return;
  }
  if (j.is_object()) {
    if (!key.empty()) out << indent << key << ":\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
      render(it.value(), it.key(), key.empty() ? depth : depth + 1, out);
    }
    return;
  }
  if (j.is_array() && !j.empty() && j[0].is_object()) {
    out << indent << key << ":\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      render(j[i], "[" + std::to_string(i) + "]", depth + 1, out);
    }
    return;
  }
  out << indent << std::left << std::setw(32) << key << ' ' << format_scalar(j) << '\n';
}

}  // namespace

bool all_checks_pass(const Json& doc) {
  if (is_check(doc)) return doc["passed"].get<bool>();
  if (doc.is_object() || doc.is_array()) {
    for (const auto& v : doc) {
      if (!all_checks_pass(v)) return false;
    }
  }
  return true;
}

void render_pretty(const Json& doc, std::ostream& out) { render(doc, "", 0, out); }

}  // namespace isospec::report
