#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fblpp/chart.hpp"
#include "fblpp/harq.hpp"
#include "fblpp/outage.hpp"
#include "fblpp/sinr.hpp"
#include "fblpp/spatial_mc.hpp"
#include "fblpp/table.hpp"

namespace fblpp {

enum class Scenario { dsa, micro_op, custom };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::dsa: return "dsa";
    case Scenario::micro_op: return "micro_op";
    case Scenario::custom: return "custom";
  }
  return "?";
}

// Parameters addressable from sweep axes, fixed values and config files.
inline const std::vector<std::string>& sweep_parameter_names() {
  static const std::vector<std::string> names = {"alpha", "lambda", "d",  "w_p", "w_s", "eta",
                                                 "n",     "k",      "r",  "m",   "nu",  "symbol_time"};
  return names;
}

struct Axis {
  std::string param;
  std::vector<double> values;
};

inline Axis list_axis(std::string param, std::vector<double> values) {
  return {std::move(param), std::move(values)};
}

inline Axis log_axis(std::string param, double from, double to, int points) {
  if (!(from > 0.0) || !(to > 0.0) || points < 1)
    throw std::invalid_argument("log_axis: needs positive bounds and at least one point");
  Axis a{std::move(param), {}};
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    a.values.push_back(from * std::pow(to / from, f));
  }
  return a;
}

inline Axis linear_axis(std::string param, double from, double to, int points) {
  if (points < 1) throw std::invalid_argument("linear_axis: needs at least one point");
  Axis a{std::move(param), {}};
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    a.values.push_back(from + (to - from) * f);
  }
  return a;
}

struct McSettings {
  long samples = 100000;
  std::uint64_t seed = 1;
  double radius = 0.0;         // <= 0: derived from tail_fraction
  double tail_fraction = 1e-3;
  int threads = 0;             // <= 0: hardware concurrency
};

enum class OutputFormat { csv, svg, both };

struct SweepSpec {
  Scenario scenario = Scenario::custom;
  std::vector<Axis> axes;
  std::map<std::string, double> fixed;
  std::vector<std::string> methods = {"auto"};  // auto|exact|linearized|closed_ss|closed_ss_alpha4|closed_micro_op|mc
  bool delay = false;
  McSettings mc;
  std::string out_path;
  OutputFormat format = OutputFormat::csv;
  ChartSpec chart;
};

struct SweepOutcome {
  Table table;
  std::vector<std::string> errors;  // one line per failed tuple
  long attempted = 0;
};

namespace detail {

struct PointParams {
  double alpha = 4.0, lambda = 0.0, d = 1.0, w_p = 1.0, w_s = 1.0;
  std::optional<double> eta, n, k, r, m, nu, symbol_time;

  void set(const std::string& name, double v) {
    if (name == "alpha") alpha = v;
    else if (name == "lambda") lambda = v;
    else if (name == "d") d = v;
    else if (name == "w_p") w_p = v;
    else if (name == "w_s") w_s = v;
    else if (name == "eta") eta = v;
    else if (name == "n") n = v;
    else if (name == "k") k = v;
    else if (name == "r") r = v;
    else if (name == "m") m = v;
    else if (name == "nu") nu = v;
    else if (name == "symbol_time") symbol_time = v;
    else throw std::invalid_argument("unknown sweep parameter: " + name);
  }
};

inline int as_int(double v, const char* what) {
  const double r = std::round(v);
  if (!(std::fabs(v - r) < 1e-9) || !(r >= 0) || !(r < 2.1e9))
    throw std::invalid_argument(std::string(what) + " must be a nonnegative integer");
  return static_cast<int>(r);
}

inline std::string describe_point(const PointParams& pt) {
  std::string s = "alpha=" + fmt9(pt.alpha) + ",lambda=" + fmt9(pt.lambda) + ",d=" + fmt9(pt.d) +
                  ",w_p=" + fmt9(pt.w_p) + ",w_s=" + fmt9(pt.w_s) +
                  ",eta=" + (pt.eta ? fmt9(*pt.eta) : "");
  if (pt.n) s += ",n=" + fmt9(*pt.n);
  if (pt.k) s += ",k=" + fmt9(*pt.k);
  if (pt.r) s += ",r=" + fmt9(*pt.r);
  return s;
}

}  // namespace detail

inline bool is_known_method(const std::string& m) {
  return m == "auto" || m == "exact" || m == "linearized" || m == "closed_ss" ||
         m == "closed_ss_alpha4" || m == "closed_micro_op" || m == "mc";
}

// Cartesian-product sweep.  Rows appear in lexicographic axis order (first
// axis outermost); a failing tuple is logged, not emitted.  Deterministic
// given the spec, including the Monte Carlo stream layout (row index picks
// the stream block).
inline SweepOutcome run_sweep(const SweepSpec& spec) {
  if (spec.axes.empty()) throw std::invalid_argument("run_sweep: empty axis grid");
  for (const auto& ax : spec.axes) {
    if (ax.values.empty()) throw std::invalid_argument("run_sweep: axis '" + ax.param + "' has no values");
    bool known = false;
    for (const auto& name : sweep_parameter_names()) known = known || name == ax.param;
    if (!known) throw std::invalid_argument("run_sweep: unknown axis parameter '" + ax.param + "'");
  }
  if (spec.methods.empty()) throw std::invalid_argument("run_sweep: no methods requested");
  for (const auto& m : spec.methods)
    if (!is_known_method(m)) throw std::invalid_argument("run_sweep: unknown method '" + m + "'");

  SweepOutcome out;
  auto& cols = out.table.columns;
  cols = {"scenario", "alpha", "lambda", "d", "w_p", "w_s", "eta", "n", "k", "r"};
  for (const auto& m : spec.methods) {
    cols.push_back(m);
    cols.push_back(m + "_err");
  }
  cols.push_back("clamped_rho");
  if (spec.delay) {
    for (const char* c : {"m", "nu", "symbol_time", "delay_channel_uses", "delay_ms",
                          "arq_outage", "reliability"})
      cols.push_back(c);
  }

  std::vector<size_t> idx(spec.axes.size(), 0);
  long row_index = 0;
  bool done = false;
  while (!done) {
    detail::PointParams pt;
    for (const auto& [name, value] : spec.fixed) pt.set(name, value);
    for (size_t a = 0; a < spec.axes.size(); ++a) pt.set(spec.axes[a].param, spec.axes[a].values[idx[a]]);
    ++out.attempted;
    ++row_index;

    try {
      if (spec.scenario == Scenario::dsa) pt.eta = 0.0;  // interference limited by definition
      if (spec.scenario == Scenario::micro_op && !pt.eta)
        pt.eta = 0.001 * pt.w_s / std::pow(pt.d, pt.alpha);  // xi = 0.001, its stated operating assumption
      if (spec.scenario == Scenario::micro_op && !(*pt.eta > 0.0))
        throw ScenarioError("micro operator scenario requires eta > 0");
      if (!pt.eta) pt.eta = 0.0;
      if (!pt.n) throw std::invalid_argument("blocklength n must be given (axis or fixed)");
      if (pt.k && pt.r) throw std::invalid_argument("give either k or r, not both");
      if (!pt.k && !pt.r) throw std::invalid_argument("coding rate r or bits k must be given");

      const SinrParams sp = derive_params(pt.alpha, pt.lambda, pt.d, pt.w_p, pt.w_s, *pt.eta);
      const int n = detail::as_int(*pt.n, "n");
      const CodeParams cp = pt.k ? code_params_from_bits(n, detail::as_int(*pt.k, "k"))
                                 : code_params_from_rate(n, *pt.r);

      std::vector<OutageEstimate> estimates;
      estimates.reserve(spec.methods.size());
      for (const auto& m : spec.methods) {
        if (m == "auto") estimates.push_back(outage_auto(sp, cp));
        else if (m == "exact") estimates.push_back(outage_exact(sp, cp));
        else if (m == "linearized") estimates.push_back(outage_linearized(sp, cp));
        else if (m == "closed_ss") estimates.push_back(outage_closed_ss(sp, cp));
        else if (m == "closed_ss_alpha4") estimates.push_back(outage_closed_ss_alpha4(sp, cp));
        else if (m == "closed_micro_op") estimates.push_back(outage_closed_micro_op(sp, cp));
        else {  // mc
          FieldConfig fc;
          fc.radius = spec.mc.radius;
          fc.n_realizations = spec.mc.samples;
          fc.seed = SeedSpec{spec.mc.seed, static_cast<std::uint64_t>(row_index) << 20};
          fc.physical = sp;
          fc.tail_fraction = spec.mc.tail_fraction;
          estimates.push_back(empirical_outage(generate_field_samples(fc, spec.mc.threads), cp));
        }
      }

      std::vector<std::string> row = {scenario_name(spec.scenario), fmt9(pt.alpha),
                                      fmt9(pt.lambda),             fmt9(pt.d),
                                      fmt9(pt.w_p),                fmt9(pt.w_s),
                                      fmt9(*pt.eta),               fmt9(n)};
      row.push_back(pt.k ? fmt9(*pt.k) : "");
      row.push_back(fmt9(cp.rate));
      bool clamped = false;
      for (const auto& est : estimates) {
        row.push_back(fmt9(est.value));
        row.push_back(fmt9(est.error_bound));
        clamped = clamped || est.clamped_rho;
      }
      row.push_back(clamped ? "1" : "0");
      if (spec.delay) {
        const int m_att = pt.m ? detail::as_int(*pt.m, "m") : 1;
        const int nu = pt.nu ? detail::as_int(*pt.nu, "nu") : 0;
        const double ts = pt.symbol_time ? *pt.symbol_time : 8.3e-6;
        const ArqConfig arq{m_att, nu, ts};
        const DelayReport wc = worst_case_delay(arq, n);
        const double eps = estimates.front().value;
        const double residual = arq_outage(eps, m_att);
        row.push_back(fmt9(m_att));
        row.push_back(fmt9(nu));
        row.push_back(fmt9(ts));
        row.push_back(fmt9(wc.channel_uses));
        row.push_back(fmt9(wc.seconds * 1e3));
        row.push_back(fmt9(residual));
        row.push_back(fmt9(1.0 - residual));
      }
      out.table.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      out.errors.push_back(detail::describe_point(pt) + " | " + e.what());
    }

    // advance: last axis fastest
    for (size_t a = spec.axes.size(); a-- > 0;) {
      if (++idx[a] < spec.axes[a].values.size()) break;
      idx[a] = 0;
      if (a == 0) done = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Figure presets.  Caption-stated values are baked in; values the captions
// leave to the figure artwork (powers, rate families, bit counts) must be
// supplied explicitly.
// ---------------------------------------------------------------------------

struct RequiredInput {
  std::string param;
  std::string description;
};

struct FigurePreset {
  std::string id;
  std::vector<SweepSpec> parts;  // merged into one table; fig10 overlays both scenarios
  std::vector<RequiredInput> required;
};

inline std::vector<std::string> figure_preset_ids() {
  return {"fig2", "fig4", "fig5", "fig6", "fig7", "fig8a", "fig8b", "fig9a", "fig9b", "fig10"};
}

inline FigurePreset figure_preset(const std::string& id) {
  FigurePreset fp;
  fp.id = id;
  SweepSpec base;
  base.fixed["alpha"] = 4.0;
  base.fixed["d"] = 1.0;
  const Axis lam_dsa = log_axis("lambda", 1e-4, 1e-1, 25);
  const Axis lam_muo = log_axis("lambda", 1e-6, 1e-2, 25);

  if (id == "fig2") {
    base.scenario = Scenario::dsa;
    base.axes = {lam_dsa};
    base.methods = {"closed_ss_alpha4"};
    base.chart = {"lambda", {"closed_ss_alpha4"}, {"r"}, true, true,
                  "outage vs density and rate", "lambda", "outage"};
    fp.parts = {base};
    fp.required = {{"r", "coding rate grid (figure legend values)"},
                   {"w_p", "interferer transmit power"},
                   {"w_s", "reference transmit power"},
                   {"n", "blocklength"}};
  } else if (id == "fig4") {
    base.scenario = Scenario::dsa;
    base.axes = {lam_dsa};
    base.fixed["n"] = 200;
    base.fixed["r"] = 0.1;
    base.methods = {"closed_ss_alpha4"};
    base.chart = {"lambda", {"closed_ss_alpha4"}, {"w_s"}, true, true,
                  "outage vs density, per transmit power", "lambda", "outage"};
    fp.parts = {base};
    fp.required = {{"w_s", "reference transmit power family (figure legend values)"},
                   {"w_p", "interferer transmit power"}};
  } else if (id == "fig5") {
    base.scenario = Scenario::micro_op;
    base.axes = {lam_muo};
    base.fixed["n"] = 200;
    base.fixed["r"] = 0.1;
    base.fixed["w_p"] = 1.0;
    base.fixed["w_s"] = 1.0;
    base.methods = {"closed_micro_op"};
    base.chart = {"lambda", {"closed_micro_op"}, {"eta"}, true, true,
                  "outage vs density, per noise level", "lambda", "outage"};
    fp.parts = {base};
    fp.required = {{"eta", "noise power family (figure legend values)"}};
  } else if (id == "fig6") {
    base.scenario = Scenario::dsa;
    base.axes = {lam_dsa};
    base.fixed["n"] = 500;
    base.fixed["r"] = 0.1;
    base.methods = {"exact", "linearized", "closed_ss_alpha4"};
    base.chart = {"lambda", {"exact", "linearized", "closed_ss_alpha4"}, {}, true, true,
                  "approximation accuracy, interference limited", "lambda", "outage"};
    fp.parts = {base};
    fp.required = {{"w_p", "interferer transmit power"}, {"w_s", "reference transmit power"}};
  } else if (id == "fig7") {
    base.scenario = Scenario::micro_op;
    base.axes = {lam_muo};
    base.fixed["n"] = 500;
    base.fixed["r"] = 0.1;
    base.fixed["w_p"] = 1.0;
    base.fixed["w_s"] = 1.0;
    base.fixed["eta"] = 0.001;
    base.methods = {"exact", "linearized", "closed_micro_op"};
    base.chart = {"lambda", {"exact", "linearized", "closed_micro_op"}, {}, true, true,
                  "approximation accuracy, noise limited", "lambda", "outage"};
    fp.parts = {base};
  } else if (id == "fig8a") {
    base.scenario = Scenario::dsa;
    base.axes = {lam_dsa};
    base.fixed["n"] = 200;
    base.fixed["r"] = 0.1;
    base.methods = {"closed_ss_alpha4"};
    base.chart = {"closed_ss_alpha4", {"lambda"}, {"w_s"}, true, true,
                  "supportable density vs outage target", "outage", "lambda"};
    fp.parts = {base};
    fp.required = {{"w_s", "reference transmit power family (figure legend values)"},
                   {"w_p", "interferer transmit power"}};
  } else if (id == "fig8b") {
    base.scenario = Scenario::micro_op;
    base.axes = {lam_muo};
    base.fixed["n"] = 200;
    base.fixed["r"] = 0.1;
    base.fixed["w_p"] = 1.0;
    base.fixed["w_s"] = 1.0;
    base.fixed["eta"] = 0.001;
    base.methods = {"closed_micro_op"};
    base.chart = {"closed_micro_op", {"lambda"}, {}, true, true,
                  "supportable density vs outage target", "outage", "lambda"};
    fp.parts = {base};
  } else if (id == "fig9a" || id == "fig9b") {
    base.axes = {linear_axis("n", 100, 1000, 10)};
    if (id == "fig9a") {
      base.scenario = Scenario::dsa;
      base.fixed["lambda"] = 1e-2;
      base.fixed["w_p"] = 1.4;
      base.fixed["w_s"] = 1.0;
      base.methods = {"closed_ss_alpha4"};
      base.chart = {"closed_ss_alpha4", {"n"}, {"k"}, true, false,
                    "blocklength vs outage, interference limited", "outage", "n"};
    } else {
      base.scenario = Scenario::micro_op;
      base.fixed["lambda"] = 1e-4;
      base.fixed["w_p"] = 1.0;
      base.fixed["w_s"] = 1.0;
      base.fixed["eta"] = 0.001;
      base.methods = {"closed_micro_op"};
      base.chart = {"closed_micro_op", {"n"}, {"k"}, true, false,
                    "blocklength vs outage, noise limited", "outage", "n"};
    }
    fp.parts = {base};
    fp.required = {{"k", "information bits family (figure legend values)"}};
  } else if (id == "fig10") {
    SweepSpec dsa = base;
    dsa.scenario = Scenario::dsa;
    dsa.axes = {log_axis("lambda", 1e-6, 1e-1, 26), list_axis("m", {1, 2})};
    dsa.fixed["w_p"] = 1.4;
    dsa.fixed["w_s"] = 1.0;
    dsa.methods = {"auto"};
    dsa.delay = true;
    SweepSpec muo = base;
    muo.scenario = Scenario::micro_op;
    muo.axes = dsa.axes;
    muo.fixed["w_p"] = 1.0;
    muo.fixed["w_s"] = 1.0;
    muo.fixed["eta"] = 0.001;
    muo.methods = {"auto"};
    muo.delay = true;
    fp.parts = {dsa, muo};
    fp.required = {{"n", "blocklength"}, {"r", "coding rate"}};
    ChartSpec chart{"lambda", {"arq_outage"}, {"scenario", "m"}, true, true,
                    "retransmission effect, both scenarios", "lambda", "outage after m attempts"};
    for (auto& part : fp.parts) part.chart = chart;
  } else {
    throw std::invalid_argument("unknown figure id: " + id);
  }
  return fp;
}

// Fill a preset's required inputs (and optional overrides) from supplied
// per-parameter value lists; single values become fixed entries, several
// become an extra axis.
inline std::vector<SweepSpec> resolve_figure(const FigurePreset& fp,
                                             const std::map<std::string, std::vector<double>>& supplied) {
  for (const auto& req : fp.required)
    if (!supplied.count(req.param))
      throw std::invalid_argument("figure " + fp.id + ": value(s) for '" + req.param +
                                  "' required (" + req.description + ")");
  std::vector<SweepSpec> parts = fp.parts;
  for (auto& part : parts) {
    for (const auto& [param, values] : supplied) {
      if (values.empty())
        throw std::invalid_argument("figure " + fp.id + ": empty value list for '" + param + "'");
      bool was_axis = false;
      for (auto& ax : part.axes)
        if (ax.param == param) {
          ax.values = values;
          was_axis = true;
        }
      if (was_axis) continue;
      // scenario-pinned constants (powers, noise of fig10 panels) stay as preset
      if (part.fixed.count(param) && fp.parts.size() > 1) continue;
      if (values.size() == 1) {
        part.fixed[param] = values[0];
      } else {
        part.fixed.erase(param);
        part.axes.push_back(list_axis(param, values));
      }
    }
  }
  return parts;
}

// Run every part of a resolved figure and merge the tables (identical
// columns by construction).
inline SweepOutcome run_figure(const std::vector<SweepSpec>& parts) {
  SweepOutcome merged;
  for (size_t i = 0; i < parts.size(); ++i) {
    SweepOutcome one = run_sweep(parts[i]);
    if (i == 0) {
      merged = std::move(one);
    } else {
      if (one.table.columns != merged.table.columns)
        throw std::logic_error("run_figure: parts emit different columns");
      for (auto& r : one.table.rows) merged.table.rows.push_back(std::move(r));
      for (auto& e : one.errors) merged.errors.push_back(std::move(e));
      merged.attempted += one.attempted;
    }
  }
  return merged;
}

// ---------------------------------------------------------------------------
// Monte Carlo validation report
// ---------------------------------------------------------------------------

struct McValidationReport {
  long samples = 0;
  double ks = 0.0, ks_critical = 0.0;
  double mc_value = 0.0, mc_error_bound = 0.0;
  double exact_value = 0.0, z_score = 0.0;
  double delta_linearized = 0.0;
  bool ks_pass = false, z_pass = false, delta_pass = false, pass = false;

  std::string text() const {
    std::string s;
    s += "samples            : " + std::to_string(samples) + "\n";
    s += "ks statistic       : " + fmt9(ks) + " (critical " + fmt9(ks_critical) + ") " +
         (ks_pass ? "PASS" : "FAIL") + "\n";
    s += "mc outage          : " + fmt9(mc_value) + " +- " + fmt9(mc_error_bound) + "\n";
    s += "exact outage       : " + fmt9(exact_value) + " (z = " + fmt9(z_score) + ") " +
         (z_pass ? "PASS" : "FAIL") + "\n";
    s += "linearized delta   : " + fmt9(delta_linearized) + " " + (delta_pass ? "PASS" : "FAIL") + "\n";
    s += std::string("overall            : ") + (pass ? "PASS" : "FAIL") + "\n";
    return s;
  }
};

struct McValidationOptions {
  double radius = 0.0;  // <= 0: KS-grade radius derived from the sample count
  int threads = 0;
  double max_abs_z = 3.0;
  double max_delta = 0.04;
  double ks_level = 0.05;
  // Analytic law to validate against; defaults to the generating parameters.
  // Setting a mismatched reference is the negative control.
  std::optional<SinrParams> reference;
};

inline McValidationReport mc_validate(const SinrParams& p, const CodeParams& c, long samples,
                                      SeedSpec seed, const McValidationOptions& opt = {},
                                      EmpiricalDistribution* keep_samples = nullptr) {
  if (samples < 1000) throw std::invalid_argument("mc_validate: need at least 1e3 samples");
  FieldConfig fc;
  fc.n_realizations = samples;
  fc.seed = seed;
  fc.physical = p;
  fc.radius = opt.radius > 0.0
                  ? opt.radius
                  : ks_grade_radius(p, 0.25 * ks_critical_value(samples, opt.ks_level));
  EmpiricalDistribution dist = generate_field_samples(fc, opt.threads);
  const SinrParams& ref = opt.reference ? *opt.reference : p;

  McValidationReport rep;
  rep.samples = samples;
  rep.ks = ks_statistic(dist, ref);
  rep.ks_critical = ks_critical_value(samples, opt.ks_level);
  rep.ks_pass = rep.ks < rep.ks_critical;

  const OutageEstimate mc = empirical_outage(dist, c);
  const OutageEstimate exact = outage_exact(ref, c);
  rep.mc_value = mc.value;
  rep.mc_error_bound = mc.error_bound;
  rep.exact_value = exact.value;
  const double se = mc.error_bound / 2.0;
  rep.z_score = se > 0.0 ? (mc.value - exact.value) / se : 0.0;
  rep.z_pass = std::fabs(rep.z_score) <= opt.max_abs_z;

  const OutageEstimate lin = outage_linearized(ref, c);
  rep.delta_linearized = exact.value > 0.0 ? approximation_error(exact, lin) : 0.0;
  rep.delta_pass = rep.delta_linearized <= opt.max_delta;

  rep.pass = rep.ks_pass && rep.z_pass && rep.delta_pass;
  if (keep_samples) *keep_samples = std::move(dist);
  return rep;
}

}  // namespace fblpp
