#pragma once

#include <string>

#include <json.hpp>

#include "fblpp/sweep.hpp"

namespace fblpp {

// Declarative sweep-spec schema (JSON).  Keys:
//   scenario: "dsa" | "micro_op" | "custom"
//   axes:     [ {"param": NAME, "values": [..]}
//             | {"param": NAME, "log":    {"from": A, "to": B, "points": P}}
//             | {"param": NAME, "linear": {"from": A, "to": B, "points": P}} ]
//   fixed:    { NAME: value, ... }
//   methods:  [ "auto" | "exact" | "linearized" | "closed_ss"
//             | "closed_ss_alpha4" | "closed_micro_op" | "mc" ]
//   delay:    {"m": M, "nu": NU, "symbol_time": TS}           (optional)
//   mc:       {"samples": N, "seed": S, "radius": R,
//              "tail_fraction": F, "threads": T}               (optional)
//   output:   {"path": FILE, "format": "csv"|"svg"|"both"}     (optional)
// Parameter NAMEs: alpha lambda d w_p w_s eta n k r m nu symbol_time.
inline SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  SweepSpec spec;
  if (j.contains("scenario")) {
    const std::string s = j.at("scenario").get<std::string>();
    if (s == "dsa") spec.scenario = Scenario::dsa;
    else if (s == "micro_op") spec.scenario = Scenario::micro_op;
    else if (s == "custom") spec.scenario = Scenario::custom;
    else throw std::invalid_argument("config: unknown scenario '" + s + "'");
  }
  if (j.contains("axes")) {
    for (const auto& ja : j.at("axes")) {
      const std::string param = ja.at("param").get<std::string>();
      if (ja.contains("values")) {
        spec.axes.push_back(list_axis(param, ja.at("values").get<std::vector<double>>()));
      } else if (ja.contains("log")) {
        const auto& r = ja.at("log");
        spec.axes.push_back(log_axis(param, r.at("from").get<double>(), r.at("to").get<double>(),
                                     r.at("points").get<int>()));
      } else if (ja.contains("linear")) {
        const auto& r = ja.at("linear");
        spec.axes.push_back(linear_axis(param, r.at("from").get<double>(), r.at("to").get<double>(),
                                        r.at("points").get<int>()));
      } else {
        throw std::invalid_argument("config: axis '" + param + "' needs values, log or linear");
      }
    }
  }
  if (j.contains("fixed"))
    for (const auto& [name, value] : j.at("fixed").items())
      spec.fixed[name] = value.get<double>();
  if (j.contains("methods")) spec.methods = j.at("methods").get<std::vector<std::string>>();
  if (j.contains("delay")) {
    spec.delay = true;
    const auto& jd = j.at("delay");
    if (jd.contains("m")) spec.fixed["m"] = jd.at("m").get<double>();
    if (jd.contains("nu")) spec.fixed["nu"] = jd.at("nu").get<double>();
    if (jd.contains("symbol_time")) spec.fixed["symbol_time"] = jd.at("symbol_time").get<double>();
  }
  if (j.contains("mc")) {
    const auto& jm = j.at("mc");
    if (jm.contains("samples")) spec.mc.samples = jm.at("samples").get<long>();
    if (jm.contains("seed")) spec.mc.seed = jm.at("seed").get<std::uint64_t>();
    if (jm.contains("radius")) spec.mc.radius = jm.at("radius").get<double>();
    if (jm.contains("tail_fraction")) spec.mc.tail_fraction = jm.at("tail_fraction").get<double>();
    if (jm.contains("threads")) spec.mc.threads = jm.at("threads").get<int>();
  }
  if (j.contains("output")) {
    const auto& jo = j.at("output");
    if (jo.contains("path")) spec.out_path = jo.at("path").get<std::string>();
    if (jo.contains("format")) {
      const std::string f = jo.at("format").get<std::string>();
      if (f == "csv") spec.format = OutputFormat::csv;
      else if (f == "svg") spec.format = OutputFormat::svg;
      else if (f == "both") spec.format = OutputFormat::both;
      else throw std::invalid_argument("config: unknown format '" + f + "'");
    }
  }
  if (j.contains("chart")) {
    const auto& jc = j.at("chart");
    if (jc.contains("x")) spec.chart.x_column = jc.at("x").get<std::string>();
    if (jc.contains("y")) spec.chart.y_columns = jc.at("y").get<std::vector<std::string>>();
    if (jc.contains("group_by")) spec.chart.group_by = jc.at("group_by").get<std::vector<std::string>>();
    if (jc.contains("x_log")) spec.chart.x_log = jc.at("x_log").get<bool>();
    if (jc.contains("y_log")) spec.chart.y_log = jc.at("y_log").get<bool>();
    if (jc.contains("title")) spec.chart.title = jc.at("title").get<std::string>();
  }
  return spec;
}

}  // namespace fblpp
