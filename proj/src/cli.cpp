#include "isospec/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "isospec/report.hpp"

namespace isospec::cli {

namespace {

using report::Json;
using report::UsageError;

struct Options {
  std::optional<double> rtol;
  bool json = false;
  bool pretty = false;

  std::string file, file2;
  std::string eta_plus, eta_minus;
  std::vector<int> signs;
  std::string a = "0", b = "0", c = "0";
  std::string demo;
  double omega = 1.0;
};

struct Context {
  Tolerance tol;
  Json inputs = Json::array();

  ComplexMatrix load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read matrix file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    Json entry;
    entry["path"] = path;
    entry["fnv1a64"] = report::fnv1a64(bytes);
    inputs.push_back(std::move(entry));
    try {
      return report::parse_matrix_text(bytes);
    } catch (const UsageError& e) {
      throw UsageError(path + ": " + e.what());
    }
  }

  EtaOperator load_eta(const std::string& path, Eigen::Index dim) {
    if (path.empty()) return EtaOperator::identity(dim);
    return EtaOperator::from_matrix(load(path), tol);
  }
};

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": not a number: " + text);
  }
  if (used != text.size() || !std::isfinite(x)) throw UsageError(what + ": not a number: " + text);
  return x;
}

// "re" or "re,im".
Complex parse_complex(const std::string& text, const std::string& what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_double(text, what), 0.0};
  return {parse_double(text.substr(0, comma), what), parse_double(text.substr(comma + 1), what)};
}

Tolerance default_tolerance() {
  Tolerance tol;
  if (const char* env = std::getenv("PSEUDOHERM_TOL"); env && *env) {
    tol.rtol = parse_double(env, "PSEUDOHERM_TOL");
  }
  return tol;
}

Json cmd_spectrum(Context& ctx, const Options& o) {
  const BiorthonormalSystem sys = decompose(ctx.load(o.file), ctx.tol);
  return report::system_to_json(sys, ctx.tol);
}

Json cmd_eta(Context& ctx, const Options& o) {
  const ComplexMatrix h = ctx.load(o.file);
  const BiorthonormalSystem sys = decompose(h, ctx.tol);
  const SignAssignment signs =
      o.signs.empty() ? SignAssignment::all_positive(sys) : SignAssignment::from_flat(sys, o.signs);
  const EtaOperator eta = canonical_eta(sys, signs);
  Json j;
  j["tag"] = to_string(classify_spectrum(sys, ctx.tol).tag);
  j["eta"] = report::eta_to_json(eta);
  j["pseudo_hermiticity"] = report::check_to_json(verify_pseudo_hermiticity(h, eta, ctx.tol));
  j["antilinear_symmetry"] = report::check_to_json(
      verify_antilinear_symmetry(sys, antilinear_symmetry(sys), ctx.tol));
  return j;
}

Json cmd_factor(Context& ctx, const Options& o) {
  const BiorthonormalSystem sys = decompose(ctx.load(o.file), ctx.tol);
  Json j;
  j["tag"] = to_string(classify_spectrum(sys, ctx.tol).tag);
  j["factorization"] = report::factorization_to_json(self_factorization(sys, ctx.tol));
  return j;
}

Json psusy_body(const PseudoSusySystem& s, const Tolerance& tol) {
  Json j;
  j["psusy"] = report::psusy_to_json(s);
  j["algebra"] = report::algebra_to_json(verify_algebra(s, tol));
  return j;
}

Json cmd_intertwine(Context& ctx, const Options& o) {
  const BiorthonormalSystem s1 = decompose(ctx.load(o.file), ctx.tol);
  const BiorthonormalSystem s2 = decompose(ctx.load(o.file2), ctx.tol);
  const Factorization f = canonical_factorization(s1, s2, ctx.tol);
  const PseudoSusySystem ps = from_factorization(f);
  Json j;
  j["factorization"] = report::factorization_to_json(f);
  j["intertwining"] = report::check_to_json(
      verify_intertwining(f.l.l, s1.hamiltonian, s2.hamiltonian, ctx.tol));
  j["algebra"] = report::algebra_to_json(verify_algebra(ps, ctx.tol));
  j["witten"] = report::witten_to_json(witten_index(ps, ctx.tol));
  return j;
}

PseudoSusySystem load_psusy(Context& ctx, const Options& o) {
  const ComplexMatrix d = ctx.load(o.file);
  const EtaOperator ep = ctx.load_eta(o.eta_plus, d.cols());
  const EtaOperator em = ctx.load_eta(o.eta_minus, d.rows());
  return assemble(d, ep, em);
}

Json cmd_psusy(Context& ctx, const Options& o) { return psusy_body(load_psusy(ctx, o), ctx.tol); }

Json cmd_witten(Context& ctx, const Options& o) {
  const PseudoSusySystem s = load_psusy(ctx, o);
  Json j;
  j["witten"] = report::witten_to_json(witten_index(s, ctx.tol));
  j["null_kernels"] = report::null_kernel_to_json(null_kernel_check(s, ctx.tol));
  return j;
}

Json cmd_twolevel(Context& ctx, const Options& o) {
  const TwoLevelParams p{parse_complex(o.a, "--a"), parse_complex(o.b, "--b"),
                         parse_complex(o.c, "--c")};
  const TwoLevelFactorization tf = two_level_factorization(p, ctx.tol);
  Json j;
  j["closed_form"] = report::two_level_system_to_json(tf.closed);
  j["case"] = tf.which == TwoLevelCase::RealEnergy ? "real_energy" : "imaginary_energy";
  j["factorization"] = report::factorization_to_json(tf.factorization);
  return j;
}

Json cmd_demo(Context& ctx, const Options& o) {
  if (o.demo == "oscillator") return report::oscillator_demo_to_json(oscillator_demo(o.omega, ctx.tol));
  const SpinDemo d = spin_intertwine_demo(o.omega, ctx.tol);
  Json j = report::spin_demo_to_json(d);
  j["algebra"] = report::algebra_to_json(verify_algebra(d.psusy, ctx.tol));
  return j;
}

// Integer identities that are not residual checks but still decide success.
bool identities_hold(const Json& result) {
  if (!result.contains("witten")) return true;
  return result["witten"]["sigma_identity_holds"].get<bool>();
}

void emit(const Json& doc, const Options& o, std::ostream& out) {
  if (o.pretty) {
    report::render_pretty(doc, out);
  } else {
    out << doc.dump(2) << '\n';
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Pseudo-Hermitian spectral analysis and pseudo-supersymmetric factorization"};
  app.name("isospec");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", o.rtol, "relative tolerance (default 1e-8, or $PSEUDOHERM_TOL)")
      ->check(CLI::PositiveNumber);
  auto* json_flag = app.add_flag("--json", o.json, "emit one JSON document (default)");
  app.add_flag("--pretty", o.pretty, "emit aligned tables")->excludes(json_flag);

  std::function<Json(Context&, const Options&)> handler;
  auto bind = [&](CLI::App* sub, Json (*fn)(Context&, const Options&)) {
    sub->callback([&handler, fn] { handler = fn; });
  };

  auto* spectrum = app.add_subcommand("spectrum", "classify the spectrum of H");
  spectrum->add_option("file", o.file, "matrix file")->required();
  bind(spectrum, cmd_spectrum);

  auto* eta = app.add_subcommand("eta", "canonical metric operator of H");
  eta->add_option("file", o.file, "matrix file")->required();
  eta->add_option("--signs", o.signs, "+1/-1 per real eigenvector, comma separated")
      ->delimiter(',');
  bind(eta, cmd_eta);

  auto* factor = app.add_subcommand("factor", "self-factorization H = L# L");
  factor->add_option("file", o.file, "matrix file")->required();
  bind(factor, cmd_factor);

  auto* intertwine = app.add_subcommand("intertwine", "factorize H1 = L# L, H2 = L L#");
  intertwine->add_option("file1", o.file, "H1 matrix file")->required();
  intertwine->add_option("file2", o.file2, "H2 matrix file")->required();
  bind(intertwine, cmd_intertwine);

  for (auto [name, desc, fn] :
       {std::tuple{"psusy", "algebra residuals of the system built on D", cmd_psusy},
        std::tuple{"witten", "Witten index of the system built on D", cmd_witten}}) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("file", o.file, "D matrix file")->required();
    sub->add_option("--eta-plus", o.eta_plus, "metric on the plus sector (default identity)");
    sub->add_option("--eta-minus", o.eta_minus, "metric on the minus sector (default identity)");
    bind(sub, fn);
  }

  auto* twolevel = app.add_subcommand("twolevel", "closed forms for [[a, b], [c, -a]]");
  twolevel->add_option("--a", o.a, "re,im")->required();
  twolevel->add_option("--b", o.b, "re,im")->required();
  twolevel->add_option("--c", o.c, "re,im")->required();
  bind(twolevel, cmd_twolevel);

  auto* demo = app.add_subcommand("demo", "oscillator and spin golden reports");
  demo->add_option("which", o.demo, "oscillator | spin")
      ->required()
      ->check(CLI::IsMember({"oscillator", "spin"}));
  demo->add_option("--omega", o.omega, "oscillator frequency")->check(CLI::PositiveNumber);
  bind(demo, cmd_demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Context ctx;
  Json doc;
  doc["command"] = command;
  try {
    ctx.tol = default_tolerance();
    if (o.rtol) ctx.tol.rtol = *o.rtol;
    ctx.tol.validate();
    Json result = handler(ctx, o);
    const bool ok = report::all_checks_pass(result) && identities_hold(result);
    doc["inputs"] = ctx.inputs;
    doc["tolerance"] = report::tolerance_to_json(ctx.tol);
    doc["status"] = ok ? "pass" : "fail";
    doc["result"] = std::move(result);
    emit(doc, o, out);
    return ok ? 0 : 1;
  } catch (const UsageError& e) {
    err << "isospec " << command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "isospec " << command << ": " << e.what() << '\n';
    return 2;
  } catch (const MathError& e) {
    doc["inputs"] = ctx.inputs;
    doc["tolerance"] = report::tolerance_to_json(ctx.tol);
    doc["status"] = "error";
    doc["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    emit(doc, o, out);
    return 1;
  }
}

}  // namespace isospec::cli
