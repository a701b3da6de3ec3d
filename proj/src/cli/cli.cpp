#include "steercert/cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "steercert/bell3.hpp"
#include "steercert/error.hpp"
#include "steercert/linalg.hpp"
#include "steercert/parallel.hpp"
#include "steercert/povm.hpp"
#include "steercert/random.hpp"
#include "steercert/randomness.hpp"
#include "steercert/selftest.hpp"
#include "steercert/steering.hpp"

namespace steercert::cli {

using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::vector<double> parse_alpha(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    throw UsageError("--alpha: malformed JSON array '" + text + "'");
  }
  if (!j.is_array() || j.empty()) throw UsageError("--alpha: expected a non-empty JSON array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw UsageError("--alpha: entry " + std::to_string(i) + " is not a number");
    double v = j[i].get<double>();
    if (!(v > 0.0)) throw UsageError("--alpha: alpha_" + std::to_string(i) + " must be positive");
    out.push_back(v);
  }
  return out;
}

std::vector<cplx> parse_fiducial(const std::string& text) {
  try {
    return io::vector_from_json(json::parse(text));
  } catch (const std::exception&) {
    throw UsageError("--fiducial: expected a JSON array of numbers or [re, im] pairs");
  }
}

std::vector<long long> parse_xi(const std::string& text) {
  try {
    json j = json::parse(text);
    if (!j.is_array()) throw UsageError("");
    std::vector<long long> out;
    for (const auto& v : j) {
      if (!v.is_number_integer()) throw UsageError("");
      out.push_back(v.get<long long>());
    }
    return out;
  } catch (const std::exception&) {
    throw UsageError("--xi: expected a JSON array of integers");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json header(const RunConfig& c) {
  return json{{"tool_version", kToolVersion},
              {"subcommand", to_string(c.subcommand)},
              {"seed", c.seed},
              {"tolerance", c.tolerance}};
}

SchmidtVector resolve_alpha(const RunConfig& c) {
  if (c.alpha) {
    if (c.normalize_alpha) return SchmidtVector::normalized(*c.alpha);
    try {
      return SchmidtVector(*c.alpha);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--alpha: ") + e.what() + " (pass --normalize-alpha to rescale)");
    }
  }
  if (!c.d) throw UsageError("--d or --alpha is required");
  return SchmidtVector::uniform(*c.d);
}

json complex_list(const std::vector<cplx>& v) { return io::to_json(v); }

json validation_json(const PovmValidation& v) {
  return json{{"pass", v.pass},
              {"min_eigenvalues", v.min_eigenvalues},
              {"hermiticity_residuals", v.hermiticity_residuals},
              {"completeness_residual", v.completeness_residual},
              {"failing_elements", v.failing_elements},
              {"message", v.message}};
}

json extremality_json(const ExtremalityReport& e) {
  return json{{"extremal", e.extremal},
              {"all_rank_one", e.all_rank_one},
              {"gram_rank", e.gram_rank},
              {"element_count", e.element_count}};
}

Povm build_povm(const RunConfig& c, const std::string& kind, json& meta) {
  if (kind == "covariant") {
    std::size_t d = c.d ? *c.d : (c.alpha ? c.alpha->size() : 0);
    if (d < 2) throw UsageError("--d is required for covariant POVMs");
    Ket nu;
    if (c.fiducial) {
      if (c.fiducial->size() != d) throw UsageError("--fiducial: length must equal d");
      nu = Ket::normalized(*c.fiducial, {d});
    } else {
      Rng rng(c.seed);
      nu = random_ket({d}, rng);
    }
    meta["fiducial"] = complex_list(nu.vec());
    meta["d"] = d;
    return covariant_povm(d, nu);
  }
  if (kind == "partial") {
    SchmidtVector sv = resolve_alpha(c);
    PhaseTable table = c.xi ? PhaseTable(sv.d(), *c.xi) : PhaseTable::listed(sv.d());
    meta["d"] = sv.d();
    meta["alpha"] = sv.alpha();
    meta["xi"] = table.xi;
    meta["sidon"] = sidon_check(table);
    return partial_povm(sv, table);
  }
  throw UsageError("--kind: expected 'covariant' or 'partial', got '" + kind + "'");
}

RunResult emit(const RunConfig& c, const json& report, int code) {
  std::vector<std::string> problems = validate_report(c.subcommand, report);
  if (!problems.empty()) return {kExitFailed, "", "internal error: report violates schema: " + problems.front()};
  return {code, report.dump(2) + "\n", ""};
}

RunResult run_bounds(const RunConfig& c) {
  SchmidtVector sv = resolve_alpha(c);
  SteeringFunctional f = functional_coefficients(sv);
  LhsOptimum exact = lhs_bound_exact(f);
  LhsOptimum upper = lhs_bound_paper_upper(f, c.restarts, c.seed);
  ViolationGap g = violation_gap(f);
  json r = header(c);
  r["d"] = sv.d();
  r["alpha"] = sv.alpha();
  r["gamma"] = f.gamma;
  r["delta"] = complex_list(f.delta);
  r["beta_q"] = g.beta_q;
  r["beta_l_exact"] = exact.value;
  r["beta_l_paper_upper"] = upper.value;
  r["paper_upper_eta"] = upper.eta;
  r["gap"] = g.gap;
  r["argmax_strategy"] = json{{"b0", exact.b0}, {"b1", exact.b1}};
  r["restarts"] = c.restarts;
  return emit(c, r, kExitOk);
}

RunResult run_certify(const RunConfig& c) {
  if (c.realization_path.empty()) throw UsageError("--realization is required");
  io::RealizationFile file = io::realization_from_json(io::read_json_file(c.realization_path));
  SteeringFunctional f = functional_coefficients(file.alpha);
  CertReport rep = certify(f, file.realization, c.tolerance);
  BobExtraction ex = extract_bob_unitary(f, file.realization);

  json proj = json::array();
  for (const auto& p : rep.projectivity) {
    proj.push_back(json{{"projective", p.projective},
                        {"residual", p.residual},
                        {"order_residual", p.detail.order_residual},
                        {"powers_residual", p.detail.powers_residual}});
  }
  json r = header(c);
  r["d"] = rep.d;
  r["alpha"] = file.alpha.alpha();
  r["value"] = rep.value;
  r["value_gap"] = rep.value_gap;
  r["stabilizer_residuals"] = rep.stabilizer_residuals;
  r["s_residual"] = rep.s_residual;
  r["commutation_residual"] = rep.commutation_residual;
  r["projectivity"] = proj;
  r["ztilde_min_eig"] = rep.ztilde_min_eig;
  r["verdict"] = to_string(rep.verdict);
  r["failing_checks"] = rep.failing_checks;
  r["extraction"] = json{{"available", ex.available},
                         {"observable_residual", ex.observable_residual},
                         {"state_residual", ex.state_residual}};
  RunResult out = emit(c, r, rep.verdict == Verdict::Certified ? kExitOk : kExitFailed);
  if (out.exit_code == kExitFailed && out.message.empty()) {
    std::string list;
    for (const auto& s : rep.failing_checks) list += (list.empty() ? "" : ", ") + s;
    out.message = "certification failed: " + list;
  }
  return out;
}

RunResult run_povm_build(const RunConfig& c) {
  json meta;
  Povm p = build_povm(c, c.povm_kind, meta);
  PovmValidation v = validate_povm(p, 1e-9);
  json r = header(c);
  r["kind"] = c.povm_kind;
  r.update(meta);
  r["povm"] = io::to_json(p);
  r["validation"] = validation_json(v);
  r["extremality"] = extremality_json(is_extremal_rank_one(p));
  return emit(c, r, v.pass ? kExitOk : kExitFailed);
}

RunResult run_povm_check(const RunConfig& c) {
  json j = io::read_json_file(c.povm_path);
  Povm p = io::povm_from_json(j.is_object() && j.contains("povm") ? j.at("povm") : j);
  PovmValidation v = validate_povm(p, 1e-9);
  ExtremalityReport e = is_extremal_rank_one(p);
  json r = header(c);
  r["d"] = p.dim();
  r["outcomes"] = p.size();
  r["validation"] = validation_json(v);
  r["extremality"] = extremality_json(e);
  RunResult out = emit(c, r, v.pass ? kExitOk : kExitFailed);
  if (!v.pass && out.message.empty()) out.message = "POVM invalid: " + v.message;
  return out;
}

RunResult run_randomness(const RunConfig& c) {
  SchmidtVector sv = resolve_alpha(c);
  const std::size_t d = sv.d();
  std::vector<double> diag;
  for (double a : sv.alpha()) diag.push_back(a * a);
  DensityMatrix rho(ComplexMatrix::diagonal(std::span<const double>(diag)));

  Povm p;
  json meta;
  const std::string& src = c.povm_source;
  if (src.rfind("builtin:", 0) == 0) {
    RunConfig sub = c;
    sub.d = d;
    p = build_povm(sub, src.substr(8), meta);
  } else {
    json j = io::read_json_file(src);
    p = io::povm_from_json(j.is_object() && j.contains("povm") ? j.at("povm") : j);
  }
  if (p.dim() != d) throw UsageError("--povm: POVM dimension " + std::to_string(p.dim()) + " does not match d");
  RandomnessReport rep = randomness_report(p, rho, 1e-9);
  json r = header(c);
  r["d"] = d;
  r["alpha"] = sv.alpha();
  r["povm"] = src;
  r["outcome_probs"] = rep.outcome_probs;
  r["guessing_probability"] = rep.guessing_probability;
  r["min_entropy_bits"] = rep.min_entropy_bits;
  r["max_bits"] = 2.0 * std::log2(static_cast<double>(d));
  r["uniform"] = rep.uniform;
  return emit(c, r, kExitOk);
}

RunResult run_bell3(const RunConfig& c) {
  SeesawResult s = seesaw_optimize(c.seed, c.restarts, c.iters);
  json r = header(c);
  r["value"] = s.value;
  r["threshold"] = BellFunctional3::threshold();
  r["gap"] = s.value - BellFunctional3::threshold();
  r["state_schmidt"] = s.state_schmidt;
  r["iterations"] = s.iterations;
  r["restarts"] = c.restarts;
  r["best_restart"] = s.best_restart;
  r["restart_values"] = s.restart_values;
  return emit(c, r, kExitOk);
}

struct SweepRow {
  double theta = 0.0;
  double beta_l = 0.0;
  double gap = 0.0;
};

RunResult run_sweep(const RunConfig& c) {
  std::size_t d = c.d ? *c.d : 2;
  if (d < 2) throw UsageError("--d must be at least 2");
  const std::size_t n = c.theta_grid;
  if (n < 1) throw UsageError("--theta-grid must be at least 1");
  std::vector<SweepRow> rows(n);
  parallel_for(n, [&](std::size_t i) {
    double theta = static_cast<double>(i + 1) * (std::numbers::pi / 2.0) / static_cast<double>(n + 1);
    std::vector<double> alpha(d, std::sin(theta) / std::sqrt(static_cast<double>(d - 1)));
    alpha[0] = std::cos(theta);
    ViolationGap g = violation_gap(functional_coefficients(SchmidtVector::normalized(alpha)));
    rows[i] = {theta, g.beta_l, g.gap};
  });

  if (c.format.value_or(Format::Csv) == Format::Csv) {
    std::ostringstream os;
    os << "# tool_version=" << kToolVersion << " seed=" << c.seed << " tolerance=" << fmt(c.tolerance) << " d=" << d
       << "\n";
    os << "theta,beta_l,gap\n";
    for (const auto& r : rows) os << fmt(r.theta) << "," << fmt(r.beta_l) << "," << fmt(r.gap) << "\n";
    return {kExitOk, os.str(), ""};
  }
  json r = header(c);
  r["d"] = d;
  json pts = json::array();
  for (const auto& row : rows) pts.push_back(json{{"theta", row.theta}, {"beta_l", row.beta_l}, {"gap", row.gap}});
  r["points"] = pts;
  return emit(c, r, kExitOk);
}

void check_type(std::vector<std::string>& out, const json& r, const char* key, json::value_t type) {
  if (!r.contains(key)) {
    out.push_back(std::string("missing field '") + key + "'");
    return;
  }
  json::value_t t = r.at(key).type();
  bool num = type == json::value_t::number_float;
  bool ok = num ? r.at(key).is_number() || r.at(key).is_null()
                : (type == json::value_t::number_unsigned ? r.at(key).is_number_integer() : t == type);
  if (!ok) out.push_back(std::string("field '") + key + "' has the wrong type");
}

}  // namespace

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Bounds: return "bounds";
    case Subcommand::Certify: return "certify";
    case Subcommand::PovmBuild: return "povm build";
    case Subcommand::PovmCheck: return "povm check";
    case Subcommand::Randomness: return "randomness";
    case Subcommand::Bell3: return "bell3";
    case Subcommand::Sweep: return "sweep";
  }
  return "unknown";
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"Steering functionals, self-testing and randomness certification", "steercert"};
  app.require_subcommand(1);

  std::optional<std::size_t> d;
  std::string alpha_text, format_text, fiducial_text, xi_text;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", c.tolerance, "Verdict tolerance");
    sub->add_option("--seed", c.seed, "Seed for every random choice");
    sub->add_option("--format", format_text, "json or csv");
    sub->add_option("-o,--output", c.output_path, "Write the report to this file");
  };
  auto with_alpha = [&](CLI::App* sub) {
    sub->add_option("--d", d, "Local dimension");
    sub->add_option("--alpha", alpha_text, "Schmidt coefficients as a JSON array");
    sub->add_flag("--normalize-alpha", c.normalize_alpha, "Rescale alpha to unit norm");
  };

  CLI::App* bounds = app.add_subcommand("bounds", "Quantum and classical bounds of the steering functional");
  common(bounds);
  with_alpha(bounds);
  bounds->add_option("--restarts", c.restarts, "Multi-starts for the analytic bound optimizer");

  CLI::App* cert = app.add_subcommand("certify", "Certify a realization read from JSON");
  common(cert);
  cert->add_option("--realization", c.realization_path, "Realization file")->required();

  CLI::App* povm = app.add_subcommand("povm", "Build or check POVMs");
  povm->require_subcommand(1);
  CLI::App* build = povm->add_subcommand("build", "Build an extremal POVM");
  common(build);
  with_alpha(build);
  build->add_option("--kind", c.povm_kind, "covariant or partial")->required();
  build->add_option("--fiducial", fiducial_text, "Covariant fiducial vector as a JSON array");
  build->add_option("--xi", xi_text, "Phase exponents for the partial construction");
  CLI::App* check = povm->add_subcommand("check", "Validate a POVM file");
  common(check);
  check->add_option("file", c.povm_path, "POVM JSON file")->required();

  CLI::App* rnd = app.add_subcommand("randomness", "Guessing probability and min-entropy");
  common(rnd);
  with_alpha(rnd);
  rnd->add_option("--povm", c.povm_source, "POVM file, builtin:covariant or builtin:partial");

  CLI::App* bell = app.add_subcommand("bell3", "See-saw maximization of the qutrit Bell functional");
  common(bell);
  bell->add_option("--restarts", c.restarts, "Independent see-saw restarts");
  bell->add_option("--iters", c.iters, "Maximum sweeps per restart");

  CLI::App* sweep = app.add_subcommand("sweep", "Classical bound and gap along alpha = (cos t, sin t, ...)");
  common(sweep);
  sweep->add_option("--d", d, "Local dimension");
  sweep->add_option("--theta-grid", c.theta_grid, "Number of interior grid points");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    throw HelpRequested(os.str());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (bounds->parsed()) c.subcommand = Subcommand::Bounds;
  else if (cert->parsed()) c.subcommand = Subcommand::Certify;
  else if (build->parsed()) c.subcommand = Subcommand::PovmBuild;
  else if (check->parsed()) c.subcommand = Subcommand::PovmCheck;
  else if (rnd->parsed()) c.subcommand = Subcommand::Randomness;
  else if (bell->parsed()) c.subcommand = Subcommand::Bell3;
  else c.subcommand = Subcommand::Sweep;

  c.d = d;
  if (!alpha_text.empty()) c.alpha = parse_alpha(alpha_text);
  if (c.d && *c.d < 2) throw UsageError("--d must be at least 2");
  if (c.d && c.alpha && c.alpha->size() != *c.d) {
    throw UsageError("--alpha: length " + std::to_string(c.alpha->size()) + " does not match --d " +
                     std::to_string(*c.d));
  }
  if (!format_text.empty()) {
    if (format_text == "json") c.format = Format::Json;
    else if (format_text == "csv") c.format = Format::Csv;
    else throw UsageError("--format: expected 'json' or 'csv', got '" + format_text + "'");
    if (c.format == Format::Csv && c.subcommand != Subcommand::Sweep) {
      throw UsageError("--format csv is only available for sweep");
    }
  }
  if (!fiducial_text.empty()) c.fiducial = parse_fiducial(fiducial_text);
  if (!xi_text.empty()) c.xi = parse_xi(xi_text);
  if (!(c.tolerance > 0.0)) throw UsageError("--tol must be positive");
  if (c.restarts < 1) throw UsageError("--restarts must be at least 1");
  if (c.iters < 1) throw UsageError("--iters must be at least 1");
  if (c.subcommand == Subcommand::Randomness && c.povm_source.rfind("builtin:", 0) == 0 &&
      c.povm_source != "builtin:covariant" && c.povm_source != "builtin:partial") {
    throw UsageError("--povm: unknown builtin '" + c.povm_source + "'");
  }
  return c;
}

RunResult run(const RunConfig& config) {
  try {
    switch (config.subcommand) {
      case Subcommand::Bounds: return run_bounds(config);
      case Subcommand::Certify: return run_certify(config);
      case Subcommand::PovmBuild: return run_povm_build(config);
      case Subcommand::PovmCheck: return run_povm_check(config);
      case Subcommand::Randomness: return run_randomness(config);
      case Subcommand::Bell3: return run_bell3(config);
      case Subcommand::Sweep: return run_sweep(config);
    }
  } catch (const UsageError& e) {
    return {kExitUsage, "", e.what()};
  } catch (const io::IoError& e) {
    return {kExitIo, "", e.what()};
  } catch (const NotExtremalError& e) {
    return {kExitFailed, "", e.what()};
  } catch (const Error& e) {
    return {kExitUsage, "", e.what()};
  } catch (const json::exception& e) {
    return {kExitUsage, "", std::string("malformed input: ") + e.what()};
  }
  return {kExitUsage, "", "unknown subcommand"};
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  RunResult r = run(config);
  if (!r.message.empty()) err << (r.exit_code == kExitFailed ? "" : "error: ") << r.message << "\n";
  if (!r.output.empty()) {
    if (config.output_path.empty()) {
      out << r.output;
    } else {
      std::ofstream f(config.output_path, std::ios::binary);
      f << r.output;
      f.close();
      if (!f) {
        err << "error: cannot write '" << config.output_path << "'\n";
        return kExitIo;
      }
    }
  }
  return r.exit_code;
}

std::vector<std::string> validate_report(Subcommand s, const json& r) {
  using vt = json::value_t;
  std::vector<std::string> out;
  if (!r.is_object()) return {"report is not a JSON object"};
  check_type(out, r, "tool_version", vt::string);
  check_type(out, r, "subcommand", vt::string);
  check_type(out, r, "seed", vt::number_unsigned);
  check_type(out, r, "tolerance", vt::number_float);
  if (r.contains("subcommand") && r["subcommand"] != to_string(s)) out.push_back("subcommand field mismatch");
  auto arr = [&](const char* k) { check_type(out, r, k, vt::array); };
  auto num = [&](const char* k) { check_type(out, r, k, vt::number_float); };
  auto integer = [&](const char* k) { check_type(out, r, k, vt::number_unsigned); };
  auto boolean = [&](const char* k) { check_type(out, r, k, vt::boolean); };
  auto obj = [&](const char* k) { check_type(out, r, k, vt::object); };
  switch (s) {
    case Subcommand::Bounds:
      integer("d");
      arr("alpha");
      num("gamma");
      arr("delta");
      num("beta_q");
      num("beta_l_exact");
      num("beta_l_paper_upper");
      arr("paper_upper_eta");
      num("gap");
      obj("argmax_strategy");
      if (r.contains("delta") && r["delta"].is_array())
        for (const auto& z : r["delta"])
          if (!z.is_array() || z.size() != 2) out.push_back("delta entries must be [re, im]");
      break;
    case Subcommand::Certify:
      integer("d");
      num("value");
      num("value_gap");
      arr("stabilizer_residuals");
      num("s_residual");
      num("commutation_residual");
      arr("projectivity");
      num("ztilde_min_eig");
      check_type(out, r, "verdict", vt::string);
      arr("failing_checks");
      obj("extraction");
      if (r.contains("verdict") && r["verdict"] != "certified" && r["verdict"] != "failed")
        out.push_back("verdict must be 'certified' or 'failed'");
      break;
    case Subcommand::PovmBuild:
      check_type(out, r, "kind", vt::string);
      integer("d");
      arr("povm");
      obj("validation");
      obj("extremality");
      break;
    case Subcommand::PovmCheck:
      integer("d");
      integer("outcomes");
      obj("validation");
      obj("extremality");
      break;
    case Subcommand::Randomness:
      integer("d");
      arr("outcome_probs");
      num("guessing_probability");
      num("min_entropy_bits");
      num("max_bits");
      boolean("uniform");
      break;
    case Subcommand::Bell3:
      num("value");
      num("threshold");
      num("gap");
      arr("state_schmidt");
      integer("iterations");
      break;
    case Subcommand::Sweep:
      integer("d");
      arr("points");
      break;
  }
  return out;
}

}  // namespace steercert::cli
