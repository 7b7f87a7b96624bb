#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace fblpp {

// Type-I ARQ: the identical codeword is retransmitted up to max_attempts
// times, each attempt costing n + feedback_uses channel uses.
struct ArqConfig {
  int max_attempts = 1;        // m >= 1
  int feedback_uses = 0;       // ACK/NACK channel uses per attempt
  double symbol_time = 8.3e-6; // seconds per channel use
};

struct DelayReport {
  double channel_uses = 0.0;
  double seconds = 0.0;  // channel_uses * symbol_time, exactly
  std::optional<double> reliability;
};

inline void validate(const ArqConfig& cfg) {
  if (cfg.max_attempts < 1) throw std::domain_error("arq: max_attempts must be >= 1");
  if (cfg.feedback_uses < 0) throw std::domain_error("arq: feedback_uses must be >= 0");
  if (!(cfg.symbol_time > 0.0)) throw std::domain_error("arq: symbol_time must be positive");
}

// Residual outage after at most m attempts: eps^m.
inline double arq_outage(double eps, int m) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("arq_outage: eps not a probability");
  if (m < 1) throw std::domain_error("arq_outage: m must be >= 1");
  return std::pow(eps, m);
}

// Unconditional worst case: every attempt is used.
inline DelayReport worst_case_delay(const ArqConfig& cfg, int n) {
  validate(cfg);
  if (n < 1) throw std::domain_error("worst_case_delay: blocklength must be >= 1");
  DelayReport r;
  r.channel_uses = static_cast<double>(cfg.max_attempts) * (n + cfg.feedback_uses);
  r.seconds = r.channel_uses * cfg.symbol_time;
  return r;
}

// Truncated-geometric expected delay: attempt j happens iff the first j-1
// failed, so E[uses] = (n + nu) sum_{j=1..m} eps^{j-1}.
inline DelayReport expected_delay(double eps, const ArqConfig& cfg, int n) {
  validate(cfg);
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("expected_delay: eps not a probability");
  if (n < 1) throw std::domain_error("expected_delay: blocklength must be >= 1");
  double attempts = 0.0, p = 1.0;
  for (int j = 0; j < cfg.max_attempts; ++j) {
    attempts += p;
    p *= eps;
  }
  DelayReport r;
  r.channel_uses = (n + cfg.feedback_uses) * attempts;
  r.seconds = r.channel_uses * cfg.symbol_time;
  r.reliability = 1.0 - std::pow(eps, cfg.max_attempts);
  return r;
}

struct AttemptBudget {
  bool feasible = false;   // even m = 1 may exceed the delay budget
  int attempts = 0;        // largest m whose worst-case delay fits
  bool target_met = false; // arq_outage(eps, attempts) <= target_outage
  double outage = 1.0;
  double worst_case_seconds = 0.0;
};

// Largest attempt count whose worst-case delay fits the budget, and whether
// the outage target is reachable within it.
inline AttemptBudget max_attempts_within_budget(double eps, int feedback_uses,
                                                double symbol_time, int n,
                                                double delay_budget_seconds,
                                                double target_outage) {
  if (!(delay_budget_seconds > 0.0) || !(target_outage > 0.0))
    throw std::domain_error("max_attempts_within_budget: budgets must be positive");
  AttemptBudget out;
  auto fits = [&](int m) {
    return m >= 1 && worst_case_delay(ArqConfig{m, feedback_uses, symbol_time}, n).seconds <=
                         delay_budget_seconds;
  };
  const double per_attempt = (n + feedback_uses) * symbol_time;
  int m = static_cast<int>(std::min(delay_budget_seconds / per_attempt, 1e9));
  while (m >= 1 && !fits(m)) --m;        // floating-point estimate may be one high
  while (m < 1000000000 && fits(m + 1)) ++m;
  if (m >= 1) {
    out.feasible = true;
    out.attempts = m;
    out.worst_case_seconds = worst_case_delay(ArqConfig{m, feedback_uses, symbol_time}, n).seconds;
    out.outage = arq_outage(eps, m);
    out.target_met = out.outage <= target_outage;
  }
  return out;
}

}  // namespace fblpp
