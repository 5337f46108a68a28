// Command-line front end: catalog, expand, verify, ode.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "acsol/error.hpp"
#include "acsol/expression.hpp"
#include "acsol/io.hpp"
#include "acsol/radial_ode.hpp"
#include "acsol/random_fields.hpp"
#include "acsol/soliton.hpp"
#include "acsol/verify.hpp"

namespace {

using acsol::Json;

struct RunConfig {
  std::string link;
  std::string input;
  int order = 1;
  std::string mode = "expander";
  std::optional<double> f0;
  int max_order = acsol::kDefaultMaxOrder;
  std::string method = "spectral";
  std::string out;
  std::string csv;
  std::uint64_t seed = 1;
  // verify
  std::string f_expr;
  double r_min = 10.0;
  double r_max = 1000.0;
  int samples = 20;
  int inject = 0;
  // ode
  double r0 = 15.0;
  double r1 = 30.0;
  double step = 0.05;
  int stride = 10;
  std::string state_in;
  std::string state_out;
};

acsol::DiffMethod parse_method(const std::string& s) {
  if (s == "spectral") return acsol::DiffMethod::Spectral;
  if (s == "fd4") return acsol::DiffMethod::FiniteDifference4;
  throw acsol::Error(acsol::ErrorKind::InvalidArgument, "cli", "run", "unknown method '" + s + "'");
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    acsol::write_text_file(cfg.out, text);
  }
}

acsol::ExpansionCoefficients coefficients(const RunConfig& cfg) {
  if (!cfg.input.empty()) return acsol::coefficients_from_json(acsol::read_json_file(cfg.input));
  acsol::ExpandOptions opt;
  opt.order = cfg.order;
  opt.mode = acsol::parse_mode(cfg.mode);
  opt.f0 = cfg.f0;
  opt.max_order = cfg.max_order;
  opt.method = parse_method(cfg.method);
  return acsol::expand(acsol::load_link(cfg.link), opt);
}

void run_catalog() {
  for (const auto& e : acsol::catalog_entries()) std::cout << e << '\n';
}

void run_expand(const RunConfig& cfg) { emit(cfg, acsol::dump(acsol::coefficients_to_json(coefficients(cfg)))); }

void run_bianchi(const RunConfig& cfg) {
  const acsol::LinkManifold link = acsol::load_link(cfg.link);
  if (!link.is_grid()) {
    throw acsol::Error(acsol::ErrorKind::InvalidArgument, "verify", "bianchi_weighted_residual",
                       "link '" + link.catalog_id + "' is not a grid link");
  }
  acsol::TensorField f;
  if (cfg.f_expr.empty()) {
    f = acsol::random_analytic_scalar(link.domain, cfg.seed);
  } else {
    const acsol::ExpressionAst ast = acsol::parse_expression(cfg.f_expr, link.dim());
    f = acsol::TensorField::sample(link.domain, 0, 0,
                                   [&](std::span<const int>, std::span<const double> x) {
                                     return acsol::eval_expression(ast, x);
                                   });
  }
  const acsol::BianchiResidual r = acsol::bianchi_weighted_residual(link, f, parse_method(cfg.method));
  Json j = Json::object();
  j["weighted_residual"] = r.weighted.max_abs();
  j["soliton_residual"] = r.soliton.max_abs();
  emit(cfg, acsol::dump(j));
}

void run_residuals(const RunConfig& cfg) {
  const acsol::ExpansionCoefficients c = coefficients(cfg);
  acsol::ResidualOptions opt;
  opt.method = parse_method(cfg.method);
  Json j = Json::object();
  j["order"] = c.order;
  j["evolution"] = acsol::residual_to_json(acsol::residual_evolution(c, opt));
  j["trace"] = acsol::residual_to_json(acsol::residual_trace(c, opt));
  j["constraint"] = acsol::residual_to_json(acsol::residual_constraint(c, opt));
  j["scalar"] = acsol::residual_to_json(acsol::normalized_scalar_series(c, opt));
  j["scalar_constant"] = acsol::scalar_constant(c);
  emit(cfg, acsol::dump(j));
}

void run_decay(const RunConfig& cfg) {
  const acsol::ExpansionCoefficients c = coefficients(cfg);
  const acsol::DecayFit fit =
      acsol::constraint_decay_slope(c, cfg.r_min, cfg.r_max, cfg.samples, parse_method(cfg.method));
  if (!cfg.csv.empty()) {
    std::ostringstream os;
    acsol::write_decay_csv(os, fit);
    acsol::write_text_file(cfg.csv, os.str());
  }
  emit(cfg, acsol::dump(acsol::decay_to_json(fit)));
}

void run_diagnostics(const RunConfig& cfg) {
  const acsol::ExpansionCoefficients c = coefficients(cfg);
  const acsol::DiffMethod method = parse_method(cfg.method);
  acsol::Residual x = acsol::x_series(c, {false, std::nullopt, method});
  const acsol::Residual s = acsol::normalized_scalar_series(c, {false, std::nullopt, method});
  if (cfg.inject > 0) {
    if (!c.link.is_grid()) {
      throw acsol::Error(acsol::ErrorKind::InvalidArgument, "verify", "order_diagnostics",
                         "injection needs a grid link");
    }
    const acsol::TensorField psi = acsol::random_analytic_scalar(c.link.domain, cfg.seed);
    x = acsol::inject_x(x, cfg.inject, acsol::partial(psi, method));
  }
  emit(cfg, acsol::dump(acsol::diagnostics_to_json(acsol::order_diagnostics(x, s, c, method))));
}

void run_ode(const RunConfig& cfg) {
  const acsol::ExpansionCoefficients c = coefficients(cfg);
  acsol::RadialState start = cfg.state_in.empty()
                                 ? acsol::init_from_series(c, cfg.r0)
                                 : acsol::state_from_json(acsol::read_json_file(cfg.state_in), c.link);
  acsol::IntegrateOptions opt;
  opt.r_end = cfg.r1;
  opt.step = cfg.step;
  opt.stride = cfg.stride;
  opt.mode = c.mode;
  opt.method = parse_method(cfg.method);
  opt.s_constant = acsol::scalar_constant(c);
  const acsol::Trajectory t = acsol::integrate(c.link, start, opt, &c);
  std::ostringstream os;
  acsol::write_trajectory_csv(os, t.monitor);
  if (cfg.csv.empty()) {
    std::cout << os.str();
  } else {
    acsol::write_text_file(cfg.csv, os.str());
  }
  if (!cfg.state_out.empty()) {
    acsol::write_text_file(cfg.state_out, acsol::dump(acsol::state_to_json(t.final_state, c.link, c.mode)));
  }
}

// Keys of a JSON config file mirror the long flag names; flags given on the
// command line win.
void apply_config(CLI::App& sub, const Json& cfg) {
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + it.key());
    } catch (const CLI::OptionNotFound&) {
      continue;
    }
    if (opt->count() > 0) continue;
    const Json& v = it.value();
    std::string text = v.is_string() ? v.get<std::string>() : v.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

void add_common(CLI::App* sub, RunConfig& cfg, bool expansion) {
  sub->add_option("--link", cfg.link, "catalog entry or path to a link JSON file");
  sub->add_option("--method", cfg.method, "spectral or fd4")->check(CLI::IsMember({"spectral", "fd4"}));
  sub->add_option("--out", cfg.out, "output path (default stdout)");
  sub->add_option("--seed", cfg.seed, "seed for randomized inputs");
  sub->add_option("--config", "JSON file with flag values");
  if (expansion) {
    sub->add_option("--in", cfg.input, "coefficients JSON instead of expanding");
    sub->add_option("--order", cfg.order, "truncation order N")->check(CLI::NonNegativeNumber);
    sub->add_option("--mode", cfg.mode, "expander or shrinker")->check(CLI::IsMember({"expander", "shrinker"}));
    sub->add_option("--f0", cfg.f0, "constant term of f");
    sub->add_option("--max-order", cfg.max_order, "largest accepted order");
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Asymptotically conical Ricci soliton expansions"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* catalog = app.add_subcommand("catalog", "list catalog links");
  auto* expand = app.add_subcommand("expand", "compute expansion coefficients");
  add_common(expand, cfg, true);

  auto* verify = app.add_subcommand("verify", "numerical checks");
  verify->require_subcommand(1);
  auto* bianchi = verify->add_subcommand("bianchi", "weighted contracted Bianchi identities");
  add_common(bianchi, cfg, false);
  bianchi->add_option("--f", cfg.f_expr, "potential expression (default: random by seed)");
  auto* residuals = verify->add_subcommand("residuals", "residual series of the expansion");
  add_common(residuals, cfg, true);
  auto* decay = verify->add_subcommand("decay", "constraint decay fit");
  add_common(decay, cfg, true);
  decay->add_option("--rmin", cfg.r_min);
  decay->add_option("--rmax", cfg.r_max);
  decay->add_option("--samples", cfg.samples);
  decay->add_option("--csv", cfg.csv, "CSV output path");
  auto* diagnostics = verify->add_subcommand("diagnostics", "leading-order bookkeeping of X and S");
  add_common(diagnostics, cfg, true);
  diagnostics->add_option("--inject", cfg.inject, "add r^-N dpsi to X (grid links)");

  auto* ode = app.add_subcommand("ode", "integrate the radial equations");
  add_common(ode, cfg, true);
  ode->add_option("--r0", cfg.r0);
  ode->add_option("--r1", cfg.r1);
  ode->add_option("--step", cfg.step);
  ode->add_option("--stride", cfg.stride);
  ode->add_option("--csv", cfg.csv, "trajectory CSV path (default stdout)");
  ode->add_option("--state-in", cfg.state_in, "resume from a state snapshot");
  ode->add_option("--state-out", cfg.state_out, "write the final state snapshot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* leaf = nullptr;
    for (CLI::App* s : {expand, bianchi, residuals, decay, diagnostics, ode}) {
      if (s->parsed()) leaf = s;
    }
    if (leaf) {
      CLI::Option* config = leaf->get_option("--config");
      if (config->count() > 0) {
        try {
          apply_config(*leaf, acsol::read_json_file(config->as<std::string>()));
        } catch (const CLI::Error& e) {
          throw acsol::Error(acsol::ErrorKind::InvalidArgument, "cli", "run",
                             std::string("config: ") + e.what());
        }
      }
      if (cfg.link.empty() && cfg.input.empty()) {
        throw acsol::Error(acsol::ErrorKind::InvalidArgument, "cli", "run", "--link is required");
      }
    }
    if (catalog->parsed()) run_catalog();
    if (expand->parsed()) run_expand(cfg);
    if (bianchi->parsed()) run_bianchi(cfg);
    if (residuals->parsed()) run_residuals(cfg);
    if (decay->parsed()) run_decay(cfg);
    if (diagnostics->parsed()) run_diagnostics(cfg);
    if (ode->parsed()) run_ode(cfg);
  } catch (const acsol::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return acsol::is_numerical(e.kind()) ? 3 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
