// Command-line front end: single-point outage, parameter sweeps, figure
// presets, Monte Carlo validation and retransmission-delay reports.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fblpp/config.hpp"
#include "fblpp/errors.hpp"
#include "fblpp/harq.hpp"
#include "fblpp/outage.hpp"
#include "fblpp/sinr.hpp"
#include "fblpp/spatial_mc.hpp"
#include "fblpp/sweep.hpp"
#include "fblpp/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

struct PointFlags {
  double alpha = 4.0, lambda = 0.0, d = 1.0, wp = 1.0, ws = 1.0, eta = 0.0;
  int n = 0, k = 0;
  double rate = 0.0;
};

void add_point_flags(CLI::App* cmd, PointFlags& f) {
  cmd->add_option("--alpha", f.alpha, "path-loss exponent (> 2)");
  cmd->add_option("--lambda", f.lambda, "interferer density, nodes per m^2");
  cmd->add_option("--d", f.d, "reference link distance, m");
  cmd->add_option("--wp", f.wp, "interferer transmit power, W");
  cmd->add_option("--ws", f.ws, "reference transmit power, W");
  cmd->add_option("--eta", f.eta, "noise power, W");
  cmd->add_option("--n", f.n, "blocklength, channel uses")->required();
  cmd->add_option("--k", f.k, "information bits (alternative to --rate)");
  cmd->add_option("--rate", f.rate, "coding rate, bits per channel use");
}

fblpp::CodeParams code_from_flags(const PointFlags& f) {
  if (f.k > 0 && f.rate > 0.0)
    throw std::invalid_argument("give either --k or --rate, not both");
  if (f.k > 0) return fblpp::code_params_from_bits(f.n, f.k);
  if (f.rate > 0.0) return fblpp::code_params_from_rate(f.n, f.rate);
  throw std::invalid_argument("either --k or --rate is required");
}

// "name=v1[,v2,...]" -> (name, values)
std::pair<std::string, std::vector<double>> parse_set(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("bad --set '" + s + "', expected name=v1[,v2,...]");
  std::vector<double> values;
  std::stringstream ss(s.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad number '" + item + "' in --set");
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("empty value list in --set '" + s + "'");
  return {s.substr(0, eq), values};
}

// "param:log:from:to:points" | "param:linear:from:to:points" | "param:list:v1,v2,..."
fblpp::Axis parse_axis(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() == 3 && parts[1] == "list") {
    std::vector<double> values;
    std::stringstream vs(parts[2]);
    while (std::getline(vs, item, ',')) values.push_back(std::stod(item));
    return fblpp::list_axis(parts[0], values);
  }
  if (parts.size() == 5 && (parts[1] == "log" || parts[1] == "linear")) {
    const double from = std::stod(parts[2]);
    const double to = std::stod(parts[3]);
    const int points = std::stoi(parts[4]);
    return parts[1] == "log" ? fblpp::log_axis(parts[0], from, to, points)
                             : fblpp::linear_axis(parts[0], from, to, points);
  }
  throw std::invalid_argument("bad --axis '" + s +
                              "', expected param:log:from:to:points, param:linear:from:to:points "
                              "or param:list:v1,v2,...");
}

void write_outputs(const fblpp::SweepOutcome& outcome, const std::string& out_path,
                   fblpp::OutputFormat format, const fblpp::ChartSpec& chart) {
  if (format == fblpp::OutputFormat::csv || format == fblpp::OutputFormat::both) {
    fblpp::write_file(out_path, fblpp::to_csv(outcome.table));
    std::printf("wrote %s (%zu rows)\n", out_path.c_str(), outcome.table.rows.size());
  }
  if (format == fblpp::OutputFormat::svg || format == fblpp::OutputFormat::both) {
    const std::string svg_path =
        format == fblpp::OutputFormat::svg ? out_path : out_path + ".svg";
    fblpp::write_file(svg_path, fblpp::render_svg_chart(outcome.table, chart));
    std::printf("wrote %s\n", svg_path.c_str());
  }
  if (!outcome.errors.empty()) {
    const std::string log_path = out_path + ".errors.log";
    std::string log;
    for (const auto& e : outcome.errors) log += e + "\n";
    fblpp::write_file(log_path, log);
    std::fprintf(stderr, "%zu of %ld points failed, see %s\n", outcome.errors.size(),
                 outcome.attempted, log_path.c_str());
  }
}

int run_outage(const PointFlags& f, const std::vector<std::string>& methods) {
  const fblpp::SinrParams p = fblpp::derive_params(f.alpha, f.lambda, f.d, f.wp, f.ws, f.eta);
  const fblpp::CodeParams c = code_from_flags(f);
  std::printf("# zeta=%.9g xi=%.9g theta=%.9g window=[%.9g, %.9g]%s\n", p.zeta, p.xi, c.theta,
              c.z_lo, c.z_hi, c.clamps() ? " (lower breakpoint clamped to 0)" : "");
  for (const auto& name : methods) {
    fblpp::OutageEstimate est;
    if (name == "auto") est = fblpp::outage_auto(p, c);
    else if (name == "exact") est = fblpp::outage_exact(p, c);
    else if (name == "linearized") est = fblpp::outage_linearized(p, c);
    else if (name == "closed_ss") est = fblpp::outage_closed_ss(p, c);
    else if (name == "closed_ss_alpha4") est = fblpp::outage_closed_ss_alpha4(p, c);
    else if (name == "closed_micro_op") est = fblpp::outage_closed_micro_op(p, c);
    else throw std::invalid_argument("unknown method '" + name + "'");
    std::printf("%-18s outage=%.9g  error_bound=%.3g  reliability=%.9g\n",
                fblpp::method_name(est.method), est.value, est.error_bound, 1.0 - est.value);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-blocklength outage, reliability and delay in Poisson interference fields"};
  app.require_subcommand(1);

  // --- outage ---------------------------------------------------------------
  auto* outage = app.add_subcommand("outage", "single-point outage evaluation");
  PointFlags of;
  std::vector<std::string> outage_methods{"auto"};
  add_point_flags(outage, of);
  outage->add_option("--method", outage_methods,
                     "methods: auto exact linearized closed_ss closed_ss_alpha4 closed_micro_op");

  // --- sweep ----------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep to CSV/SVG");
  std::string sweep_config;
  std::vector<std::string> sweep_axes, sweep_sets, sweep_methods;
  std::string sweep_scenario, sweep_out, sweep_format;
  long sweep_samples = 0;
  std::uint64_t sweep_seed = 0;
  bool sweep_delay = false;
  sweep->add_option("--config", sweep_config, "JSON sweep spec (flags override file values)");
  sweep->add_option("--axis", sweep_axes, "axis spec, e.g. lambda:log:1e-4:1e-1:25 or r:list:0.1,0.5");
  sweep->add_option("--set", sweep_sets, "fixed parameter, e.g. n=200 (repeatable)");
  sweep->add_option("--method", sweep_methods, "evaluation methods (see outage --method, plus mc)");
  sweep->add_option("--scenario", sweep_scenario, "dsa | micro_op | custom");
  sweep->add_option("--out", sweep_out, "output path");
  sweep->add_option("--format", sweep_format, "csv | svg | both");
  sweep->add_option("--samples", sweep_samples, "Monte Carlo realizations for method mc");
  sweep->add_option("--seed", sweep_seed, "Monte Carlo master seed");
  sweep->add_flag("--delay", sweep_delay, "append retransmission delay columns");
  // common parameter flags, equivalent to --set name=value
  std::map<std::string, std::pair<const char*, double>> sweep_params = {
      {"alpha", {"--alpha", 0}},     {"lambda", {"--lambda", 0}}, {"d", {"--d", 0}},
      {"w_p", {"--wp", 0}},          {"w_s", {"--ws", 0}},        {"eta", {"--eta", 0}},
      {"n", {"--n", 0}},             {"k", {"--k", 0}},           {"r", {"--rate", 0}},
      {"m", {"--m", 0}},             {"nu", {"--nu", 0}},         {"symbol_time", {"--symbol-time", 0}}};
  for (auto& [name, flag] : sweep_params)
    sweep->add_option(flag.first, flag.second, "fixed value for " + name);

  // --- figure ---------------------------------------------------------------
  auto* figure = app.add_subcommand("figure", "run a figure preset");
  std::string figure_id, figure_out, figure_format;
  std::vector<std::string> figure_sets;
  figure->add_option("id", figure_id, "one of: fig2 fig4 fig5 fig6 fig7 fig8a fig8b fig9a fig9b fig10")
      ->required();
  figure->add_option("--set", figure_sets, "preset input, e.g. w_s=1,2,4 (repeatable)");
  figure->add_option("--out", figure_out, "output path (default <id>.csv)");
  figure->add_option("--format", figure_format, "csv | svg | both (default both)");

  // --- mc-validate ----------------------------------------------------------
  auto* mcv = app.add_subcommand("mc-validate", "spatial Monte Carlo vs the analytic chain");
  PointFlags mf;
  long mc_samples = 100000;
  std::uint64_t mc_seed = 1;
  double mc_radius = 0.0, mc_max_delta = 0.04, mc_max_z = 3.0;
  int mc_threads = 0;
  std::string mc_dump;
  add_point_flags(mcv, mf);
  mcv->add_option("--samples", mc_samples, "number of spatial realizations (>= 1e3)");
  mcv->add_option("--seed", mc_seed, "master seed");
  mcv->add_option("--radius", mc_radius, "simulation disc radius (0 = KS-grade automatic)");
  mcv->add_option("--threads", mc_threads, "worker threads (0 = hardware)");
  mcv->add_option("--max-delta", mc_max_delta, "linearization error threshold");
  mcv->add_option("--max-z", mc_max_z, "outage z-score threshold");
  mcv->add_option("--dump", mc_dump, "write raw SINR samples, one per line");

  // --- delay ----------------------------------------------------------------
  auto* delay = app.add_subcommand("delay", "Type-I ARQ delay and reliability report");
  PointFlags df;
  double delay_eps = -1.0;
  int delay_m = 1, delay_nu = 0;
  double delay_ts = 8.3e-6, delay_budget = 0.0, delay_target = 1e-3;
  add_point_flags(delay, df);
  delay->get_option("--n")->required(false);
  delay->add_option("--eps", delay_eps, "single-attempt outage (otherwise computed from the model)");
  delay->add_option("--m", delay_m, "maximum transmission attempts");
  delay->add_option("--nu", delay_nu, "feedback channel uses per attempt");
  delay->add_option("--symbol-time", delay_ts, "seconds per channel use");
  delay->add_option("--budget", delay_budget, "delay budget in seconds; reports the largest feasible m");
  delay->add_option("--target", delay_target, "outage target used with --budget");

  // --- version ----------------------------------------------------------------
  auto* version = app.add_subcommand("version", "print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*version) {
      std::printf("fblpp %s\n", fblpp::kVersion);
      return kExitOk;
    }

    if (*outage) return run_outage(of, outage_methods);

    if (*sweep) {
      fblpp::SweepSpec spec;
      if (!sweep_config.empty()) {
        std::ifstream is(sweep_config);
        if (!is) throw std::ios_base::failure("cannot read config: " + sweep_config);
        nlohmann::json j;
        is >> j;
        spec = fblpp::sweep_spec_from_json(j);
      }
      if (!sweep_scenario.empty()) {
        if (sweep_scenario == "dsa") spec.scenario = fblpp::Scenario::dsa;
        else if (sweep_scenario == "micro_op") spec.scenario = fblpp::Scenario::micro_op;
        else if (sweep_scenario == "custom") spec.scenario = fblpp::Scenario::custom;
        else throw std::invalid_argument("unknown scenario '" + sweep_scenario + "'");
      }
      for (const auto& s : sweep_axes) spec.axes.push_back(parse_axis(s));
      for (const auto& s : sweep_sets) {
        const auto [name, values] = parse_set(s);
        if (values.size() != 1)
          throw std::invalid_argument("--set " + name + " expects one value; use --axis for grids");
        spec.fixed[name] = values[0];
      }
      for (const auto& [name, flag] : sweep_params)
        if (sweep->count(flag.first)) spec.fixed[name] = flag.second;
      if (!sweep_methods.empty()) spec.methods = sweep_methods;
      if (sweep_delay) spec.delay = true;
      if (sweep_samples > 0) spec.mc.samples = sweep_samples;
      if (sweep_seed != 0) spec.mc.seed = sweep_seed;
      if (!sweep_out.empty()) spec.out_path = sweep_out;
      if (spec.out_path.empty()) spec.out_path = "sweep.csv";
      if (!sweep_format.empty()) {
        if (sweep_format == "csv") spec.format = fblpp::OutputFormat::csv;
        else if (sweep_format == "svg") spec.format = fblpp::OutputFormat::svg;
        else if (sweep_format == "both") spec.format = fblpp::OutputFormat::both;
        else throw std::invalid_argument("unknown format '" + sweep_format + "'");
      }
      if (spec.chart.x_column.empty() && !spec.axes.empty()) {
        spec.chart.x_column = spec.axes.front().param;
        spec.chart.y_columns = spec.methods;
        for (const auto& ax : spec.axes)
          if (ax.param != spec.chart.x_column) spec.chart.group_by.push_back(ax.param);
      }
      const fblpp::SweepOutcome outcome = fblpp::run_sweep(spec);
      if (outcome.table.rows.empty())
        throw fblpp::ConvergenceError("sweep: every grid point failed", 0.0, 0.0, 0);
      write_outputs(outcome, spec.out_path, spec.format, spec.chart);
      return kExitOk;
    }

    if (*figure) {
      const fblpp::FigurePreset preset = fblpp::figure_preset(figure_id);
      std::map<std::string, std::vector<double>> supplied;
      for (const auto& s : figure_sets) supplied.insert(parse_set(s));
      const auto parts = fblpp::resolve_figure(preset, supplied);
      const fblpp::SweepOutcome outcome = fblpp::run_figure(parts);
      if (outcome.table.rows.empty())
        throw fblpp::ConvergenceError("figure: every grid point failed", 0.0, 0.0, 0);
      const std::string out = figure_out.empty() ? figure_id + ".csv" : figure_out;
      fblpp::OutputFormat format = fblpp::OutputFormat::both;
      if (!figure_format.empty()) {
        if (figure_format == "csv") format = fblpp::OutputFormat::csv;
        else if (figure_format == "svg") format = fblpp::OutputFormat::svg;
        else if (figure_format == "both") format = fblpp::OutputFormat::both;
        else throw std::invalid_argument("unknown format '" + figure_format + "'");
      }
      write_outputs(outcome, out, format, parts.front().chart);
      return kExitOk;
    }

    if (*mcv) {
      const fblpp::SinrParams p = fblpp::derive_params(mf.alpha, mf.lambda, mf.d, mf.wp, mf.ws, mf.eta);
      const fblpp::CodeParams c = code_from_flags(mf);
      fblpp::McValidationOptions opt;
      opt.radius = mc_radius;
      opt.threads = mc_threads;
      opt.max_abs_z = mc_max_z;
      opt.max_delta = mc_max_delta;
      fblpp::EmpiricalDistribution dist;
      const fblpp::McValidationReport rep =
          fblpp::mc_validate(p, c, mc_samples, fblpp::SeedSpec{mc_seed, 0}, opt,
                             mc_dump.empty() ? nullptr : &dist);
      std::fputs(rep.text().c_str(), stdout);
      if (!mc_dump.empty()) {
        std::ofstream os(mc_dump, std::ios::binary);
        if (!os) throw std::ios_base::failure("cannot open for writing: " + mc_dump);
        fblpp::dump_samples(dist, os);
        std::printf("wrote %s\n", mc_dump.c_str());
      }
      return rep.pass ? kExitOk : kExitValidation;
    }

    if (*delay) {
      double eps = delay_eps;
      if (eps < 0.0) {
        if (df.n <= 0)
          throw std::invalid_argument("delay: give --eps or the model parameters (--n with --rate/--k)");
        const fblpp::SinrParams p = fblpp::derive_params(df.alpha, df.lambda, df.d, df.wp, df.ws, df.eta);
        eps = fblpp::outage_auto(p, code_from_flags(df)).value;
        std::printf("single-attempt outage : %.9g (auto method)\n", eps);
      }
      if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("delay: eps must be in [0, 1]");
      const int n = df.n > 0 ? df.n : 0;
      if (n <= 0) throw std::invalid_argument("delay: --n is required");
      const fblpp::ArqConfig cfg{delay_m, delay_nu, delay_ts};
      const fblpp::DelayReport wc = fblpp::worst_case_delay(cfg, n);
      const fblpp::DelayReport ed = fblpp::expected_delay(eps, cfg, n);
      std::printf("attempts              : %d (nu = %d, symbol time = %.9g s)\n", delay_m, delay_nu,
                  delay_ts);
      std::printf("worst-case delay      : %.9g channel uses = %.9g ms\n", wc.channel_uses,
                  wc.seconds * 1e3);
      std::printf("expected delay        : %.9g channel uses = %.9g ms\n", ed.channel_uses,
                  ed.seconds * 1e3);
      std::printf("residual outage       : %.9g\n", fblpp::arq_outage(eps, delay_m));
      std::printf("reliability           : %.9g\n", *ed.reliability);
      if (delay_budget > 0.0) {
        const fblpp::AttemptBudget b = fblpp::max_attempts_within_budget(
            eps, delay_nu, delay_ts, n, delay_budget, delay_target);
        if (!b.feasible) {
          std::printf("budget %.9g s         : infeasible, a single attempt already exceeds it\n",
                      delay_budget);
        } else {
          std::printf("budget %.9g s         : m <= %d (worst case %.9g ms), outage %.9g, target %s\n",
                      delay_budget, b.attempts, b.worst_case_seconds * 1e3, b.outage,
                      b.target_met ? "met" : "NOT met");
        }
      }
      return kExitOk;
    }
  } catch (const fblpp::ConvergenceError& e) {
    std::fprintf(stderr, "numeric failure: %s (best estimate %.9g)\n", e.what(), e.best_value);
    return kExitNumeric;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
