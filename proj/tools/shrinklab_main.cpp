#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shrinklab/al_curves.hpp"
#include "shrinklab/catalog.hpp"
#include "shrinklab/classify.hpp"
#include "shrinklab/errors.hpp"
#include "shrinklab/quadrature.hpp"
#include "shrinklab/suite.hpp"

using namespace shrinklab;

namespace {

SuiteConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return SuiteConfig::from_json(j);
}

int cmd_verify(const std::vector<std::string>& targets,
               const std::string& config_path, const std::string& out_path) {
  SuiteConfig cfg = load_config(config_path);
  SuiteReport report = run_suite(targets, cfg);
  for (const TargetReport& t : report.targets) {
    std::cout << (t.pass ? "PASS " : "FAIL ") << t.target;
    if (t.classified)
      std::cout << "  [" << to_string(t.classification.case_) << "]";
    std::cout << "\n";
    for (size_t i = 0; i < t.residuals.size(); ++i) {
      const IdentityResidual& r = t.residuals[i];
      const bool asserted = t.residual_asserted[i];
      std::cout << "    " << (r.pass() || !asserted ? "ok  " : "FAIL")
                << "  " << r.name << " = " << r.value;
      if (asserted) std::cout << "  (tol " << r.tolerance << ")";
      if (!r.warning.empty()) std::cout << "  ! " << r.warning;
      std::cout << "\n";
    }
    for (const IntegralEntry& e : t.integrals) {
      std::cout << "    " << (e.pass ? "ok  " : "FAIL") << "  " << e.name
                << " = " << e.value;
      if (e.tolerance > 0)
        std::cout << "  (disc " << e.discrepancy << ", tol " << e.tolerance
                  << ")";
      std::cout << "\n";
    }
  }
  std::cout << (report.pass ? "suite PASS" : "suite FAIL") << " in "
            << report.seconds << " s\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write report '" + out_path + "'");
    out << suite_to_json(report, cfg.include_timings).dump(2) << "\n";
  }
  return report.pass ? 0 : 1;
}

int cmd_classify(const std::string& target) {
  Immersion imm = build_target(target);
  ClassificationReport rep = classify(imm);
  std::cout << target << " -> " << to_string(rep.case_) << "\n";
  std::cout << "  sup |A|^2 = " << rep.evidence.sup_norm_A_sq
            << ", |H|^2 in [" << rep.evidence.inf_norm_H_sq << ", "
            << rep.evidence.sup_norm_H_sq << "]\n";
  std::cout << "  sup |H + x_perp| = " << rep.evidence.sup_shrinker_residual
            << ", sup |grad_perp H| = " << rep.evidence.sup_grad_perp_H << "\n";
  std::cout << "  |x|^2 in [" << rep.evidence.inf_norm_x_sq << ", "
            << rep.evidence.sup_norm_x_sq << "], sup sigma_principal = "
            << rep.evidence.sup_sigma_principal << "\n";
  if (rep.sphere_minimal_evidence)
    std::cout << "  note: minimal-in-sphere evidence (|H|^2 = n, |x|^2 = n)\n";
  return 0;
}

int cmd_al_shoot(double k0_min, double k0_max, int rot_p, int rot_q,
                 const std::string& csv) {
  ALShootConfig cfg;
  cfg.k0_min = k0_min;
  cfg.k0_max = k0_max;
  cfg.rotation_p = rot_p;
  cfg.rotation_q = rot_q;
  ALCurve curve = al_shoot_closed(cfg);
  std::cout << "closed curve: rotation " << curve.rotation_p << "/"
            << curve.rotation_q << ", length " << curve.length()
            << ", closure residual " << curve.closure_residual
            << ", first-integral drift " << curve.first_integral_drift << "\n";
  if (!csv.empty()) {
    write_curve_csv(curve, csv);
    std::cout << "wrote " << csv << "\n";
  }
  return 0;
}

int cmd_integrate(const std::string& target, const std::string& fname,
                  bool unweighted, const std::string& config_path) {
  SuiteConfig cfg = load_config(config_path);
  Immersion imm = build_target(target);
  QuadratureSpec spec = cfg.auto_nodes ? auto_quadrature_spec(imm) : cfg.quad;
  WeightedIntegralResult r =
      weighted_integral(imm, builtin_integrand(fname), spec, !unweighted);
  std::cout << "integral[" << fname << "] over " << target << " = " << r.value
            << "  (tail bound " << r.truncation_error_bound << ", "
            << r.node_count << " nodes";
  if (r.skipped_nodes) std::cout << ", " << r.skipped_nodes << " skipped";
  std::cout << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-shrinker verification laboratory"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  std::vector<std::string> targets;
  std::string config_path, out_path;
  verify->add_option("targets", targets, "catalog names, al:..., or 'all'")
      ->required();
  verify->add_option("--config", config_path, "JSON config file");
  verify->add_option("--out", out_path, "write JSON report here");

  auto* cls = app.add_subcommand("classify", "classify a target");
  std::string cls_target;
  cls->add_option("target", cls_target)->required();

  auto* cat = app.add_subcommand("catalog", "catalog operations");
  auto* cat_list = cat->add_subcommand("list", "list catalog entries");

  auto* al = app.add_subcommand("al", "curve operations");
  auto* al_shoot = al->add_subcommand("shoot", "shoot for a closed curve");
  double k0_min = 1.05, k0_max = 2.5;
  int rot_p = 2, rot_q = 3;
  std::string csv;
  al_shoot->add_option("--k0-min", k0_min, "bracket lower end");
  al_shoot->add_option("--k0-max", k0_max, "bracket upper end");
  al_shoot->add_option("--rot-p", rot_p, "rotation index numerator");
  al_shoot->add_option("--rot-q", rot_q, "rotation index denominator");
  al_shoot->add_option("--csv", csv, "export samples as CSV");

  auto* integ = app.add_subcommand("integrate", "Gaussian-weighted integral");
  std::string int_target, int_f = "one", int_config;
  bool unweighted = false;
  integ->add_option("target", int_target)->required();
  integ->add_option("--f", int_f, "builtin integrand name");
  integ->add_flag("--unweighted", unweighted, "drop the Gaussian weight");
  integ->add_option("--config", int_config, "JSON config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return cmd_verify(targets, config_path, out_path);
    if (*cls) return cmd_classify(cls_target);
    if (*cat_list) {
      for (const std::string& n : catalog_names()) std::cout << n << "\n";
      return 0;
    }
    if (*al_shoot) return cmd_al_shoot(k0_min, k0_max, rot_p, rot_q, csv);
    if (*integ) return cmd_integrate(int_target, int_f, unweighted, int_config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
