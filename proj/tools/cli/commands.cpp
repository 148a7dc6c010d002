#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cli/cli.hpp"

namespace wmwplan::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string fixed4(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "undefined";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double kappa_or_nan(const Estimands& e) {
  try {
    return e.kappa();
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

const char* interval_kind_name(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::regular: return "regular";
    case IntervalKind::sigma1_zero: return "sigma1_zero";
    case IntervalKind::sigma2_zero: return "sigma2_zero";
    case IntervalKind::degenerate_half: return "degenerate_half";
  }
  return "unknown";
}

void append_row(std::ostringstream& out, const std::string& label, const std::string& value) {
  out << label;
  for (std::size_t i = label.size(); i < 28; ++i) out << ' ';
  out << value << '\n';
}

}  // namespace

AllocationPolicy parse_allocation(std::string_view text) {
  if (text == "balanced") return BalancedAllocation{};
  if (text == "optimal") return OptimalAllocation{};
  if (text.starts_with("fixed:")) {
    const std::string value(text.substr(6));
    std::size_t used = 0;
    double t = 0.0;
    try {
      t = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || !(t > 0.0 && t < 1.0)) {
      throw std::invalid_argument("fixed allocation needs t in (0, 1), e.g. fixed:0.5");
    }
    return FixedAllocation{t};
  }
  throw std::invalid_argument("allocation must be balanced, optimal or fixed:<t>");
}

std::string allocation_name(const AllocationPolicy& policy) {
  if (std::holds_alternative<BalancedAllocation>(policy)) return "balanced";
  if (std::holds_alternative<OptimalAllocation>(policy)) return "optimal";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::get<FixedAllocation>(policy).t);
  return "fixed:" + std::string(buf, res.ptr);
}

PlanInput plan_input_for(const RunConfig& config, const ResolvedInputs& inputs) {
  PlanInput in = inputs.defaults;
  if (config.alpha) in.alpha = *config.alpha;
  if (config.power) in.power = *config.power;
  if (config.allocation) in.allocation = parse_allocation(*config.allocation);
  if (!(in.alpha > 0.0 && in.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(in.power > 0.0 && in.power < 1.0)) throw std::invalid_argument("power must lie in (0, 1)");
  return in;
}

std::string cmd_plan(const RunConfig& config) {
  const ResolvedInputs inputs = resolve_inputs(config);
  const PlanInput in = plan_input_for(config, inputs);
  const PlanResult r = plan(inputs.f1, inputs.f2, in);
  const Estimands& e = r.estimands;
  const double kappa = kappa_or_nan(e);
  const double noether_total = noether_sample_size(e.p_star, in, 0.5);
  const auto noether_per_group = static_cast<std::int64_t>(std::ceil(0.5 * noether_total));

  if (config.format == OutputFormat::json) {
    Json j;
    j["command"] = "plan";
    j["source"] = inputs.source;
    j["alpha"] = in.alpha;
    j["power"] = in.power;
    j["allocation"] = allocation_name(in.allocation);
    j["p_star"] = e.p_star;
    j["sigma_null"] = e.sigma_null();
    j["sigma1"] = e.sigma_1();
    j["sigma2"] = e.sigma_2();
    j["kappa"] = finite_or_null(kappa);
    j["t"] = r.t;
    j["N_raw"] = r.n_raw;
    j["n1"] = r.n1;
    j["n2"] = r.n2;
    j["N_total"] = r.n_total();
    j["interval_lower"] = r.interval ? Json(r.interval->lower) : Json(nullptr);
    j["interval_upper"] = r.interval ? Json(r.interval->upper) : Json(nullptr);
    j["interval_kind"] = r.interval ? Json(interval_kind_name(r.interval->kind)) : Json(nullptr);
    j["noether_n_per_group"] = noether_per_group;
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  append_row(out, "source", inputs.source);
  append_row(out, "alpha", fixed4(in.alpha));
  append_row(out, "power", fixed4(in.power));
  append_row(out, "allocation", allocation_name(in.allocation));
  append_row(out, "relative effect p*", fixed4(e.p_star));
  append_row(out, "sigma* (null)", fixed4(e.sigma_null()));
  append_row(out, "sigma1*", fixed4(e.sigma_1()));
  append_row(out, "sigma2*", fixed4(e.sigma_2()));
  append_row(out, "kappa = sigma2*/sigma1*", fixed4(kappa));
  append_row(out, "allocation rate t", fixed4(r.t));
  if (r.interval) {
    append_row(out, "interval for optimal t",
               "[" + fixed4(r.interval->lower) + ", " + fixed4(r.interval->upper) + "] (" +
                   interval_kind_name(r.interval->kind) + ")");
  }
  append_row(out, "N (unrounded)", fixed4(r.n_raw));
  append_row(out, "n1 / n2", std::to_string(r.n1) + " / " + std::to_string(r.n2));
  append_row(out, "N total", std::to_string(r.n_total()));
  append_row(out, "Noether n1 / n2", std::to_string(noether_per_group) + " / " + std::to_string(noether_per_group));
  return out.str();
}

std::string cmd_power(const RunConfig& config) {
  const ResolvedInputs inputs = resolve_inputs(config);
  const PlanInput in = plan_input_for(config, inputs);

  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  if (config.n1 && config.n2) {
    n1 = *config.n1;
    n2 = *config.n2;
  } else if (!config.n1 && !config.n2) {
    const PlanResult r = plan(inputs.f1, inputs.f2, in);
    n1 = r.n1;
    n2 = r.n2;
  } else {
    throw std::invalid_argument("give both --n1 and --n2, or neither to use the planned sizes");
  }

  const PowerResult p = simulate_power(inputs.f1, inputs.f2, n1, n2, in.alpha,
                                       config.replications, config.seed, config.threads);

  if (config.format == OutputFormat::json) {
    Json j;
    j["command"] = "power";
    j["source"] = inputs.source;
    j["n1"] = n1;
    j["n2"] = n2;
    j["alpha"] = in.alpha;
    j["replications"] = p.replications;
    j["rejections"] = p.rejections;
    j["seed"] = p.seed;
    j["power_hat"] = p.power_hat;
    j["mc_stderr"] = p.mc_stderr;
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  append_row(out, "source", inputs.source);
  append_row(out, "n1 / n2", std::to_string(n1) + " / " + std::to_string(n2));
  append_row(out, "alpha", fixed4(in.alpha));
  append_row(out, "replications", std::to_string(p.replications));
  append_row(out, "rejections", std::to_string(p.rejections));
  append_row(out, "seed", std::to_string(p.seed));
  append_row(out, "power", fixed4(p.power_hat));
  append_row(out, "MC standard error", fixed4(p.mc_stderr));
  return out.str();
}

}  // namespace wmwplan::cli
