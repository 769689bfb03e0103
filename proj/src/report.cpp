#include "dqc1/report.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <fmt/core.h>
#include <openssl/evp.h>

#include "json.hpp"

#include "dqc1/errors.hpp"
#include "dqc1/sampling.hpp"

namespace dqc1 {
namespace {

std::string g17(double v) { return fmt::format("{:.17g}", v); }

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  bool ok = false;
};

Line ols(const std::vector<double>& x, const std::vector<double>& y,
         const std::vector<std::size_t>& idx) {
  const double n = static_cast<double>(idx.size());
  double mx = 0.0;
  double my = 0.0;
  for (auto i : idx) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (auto i : idx) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) return {};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx, true};
}

// Linear interpolation between order statistics.
double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

void header(std::ostream& out, const std::string& hash, const char* columns) {
  out << "# config_sha256=" << hash << '\n' << columns << '\n';
}

}  // namespace

ScalingFit fit_with_bootstrap(const std::vector<double>& x, const std::vector<double>& y,
                              std::uint64_t seed, std::size_t resamples) {
  if (x.size() != y.size()) throw DimensionError("fit_with_bootstrap: x and y differ in length");
  std::vector<std::size_t> all(x.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Line base = ols(x, y, all);
  if (!base.ok) throw PreconditionError("fit_with_bootstrap: need at least two distinct x values");
  ScalingFit fit;
  fit.slope = base.slope;
  fit.intercept = base.intercept;
  fit.points = x.size();
  fit.ci_lo = fit.ci_hi = base.slope;
  if (resamples == 0) return fit;

  std::mt19937_64 gen(mix64(seed ^ 0xb007b007ULL));
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  std::vector<double> slopes;
  slopes.reserve(resamples);
  std::vector<std::size_t> idx(x.size());
  for (std::size_t r = 0; r < resamples; ++r) {
    for (auto& i : idx) i = pick(gen);
    const Line l = ols(x, y, idx);
    if (l.ok) slopes.push_back(l.slope);
  }
  if (!slopes.empty()) {
    fit.ci_lo = quantile(slopes, 0.025);
    fit.ci_hi = quantile(slopes, 0.975);
  }
  return fit;
}

ScalingFit scaling_report(const std::vector<RunRecord>& records, Resource resource,
                          std::uint64_t seed, std::size_t resamples) {
  std::vector<double> x;
  std::vector<double> y;
  std::set<double> targets;
  for (const auto& r : records) {
    if (!r.converged || !(r.target_precision > 0.0)) continue;
    const double value = resource == Resource::total_time ? r.total_time
                                                          : static_cast<double>(r.total_calls);
    if (!(value > 0.0)) continue;
    x.push_back(std::log(1.0 / r.target_precision));
    y.push_back(std::log(value));
    targets.insert(r.target_precision);
  }
  if (targets.size() < 3) {
    throw PreconditionError(fmt::format(
        "scaling_report needs at least 3 distinct target precisions among converged runs, got {}",
        targets.size()));
  }
  return fit_with_bootstrap(x, y, seed, resamples);
}

void write_trials_csv(std::ostream& out, const std::string& config_hash,
                      const std::vector<RunRecord>& runs) {
  header(out, config_hash,
         "trial,nu,target_precision,theta_true,theta_prior,theta_hat,posterior_std,lo,hi,covered,"
         "converged,steps,total_time,final_time,total_calls,total_slices,outliers,error");
  for (const auto& r : runs) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    out << r.trial << ',' << r.nu << ',' << g17(r.target_precision) << ',' << g17(r.theta_true)
        << ',' << g17(r.theta_prior) << ',' << g17(r.theta_hat) << ',' << g17(r.posterior_std)
        << ',' << g17(r.lo) << ',' << g17(r.hi) << ',' << (r.covers() ? 1 : 0) << ','
        << (r.converged ? 1 : 0) << ',' << r.steps.size() << ',' << g17(r.total_time) << ','
        << g17(r.final_time) << ',' << r.total_calls << ',' << r.total_slices << ','
        << r.outliers << ',' << error << '\n';
  }
}

void write_steps_csv(std::ostream& out, const std::string& config_hash,
                     const std::vector<RunRecord>& runs) {
  header(out, config_hash,
         "trial,nu,target_precision,step,time,winding,zoom,outcome,theta_hat,dev,lo,hi,sine,"
         "outlier,phase_comp,calls_cumulative,slices,delta_gamma,gamma,likelihood_delta");
  for (const auto& r : runs) {
    for (const auto& s : r.steps) {
      out << r.trial << ',' << r.nu << ',' << g17(r.target_precision) << ',' << s.step << ','
          << g17(s.time) << ',' << s.winding << ',' << g17(s.zoom) << ',' << g17(s.outcome) << ','
          << g17(s.theta_hat) << ',' << g17(s.dev) << ',' << g17(s.lo) << ',' << g17(s.hi) << ','
          << (s.sine ? 1 : 0) << ',' << (s.outlier ? 1 : 0) << ',' << g17(s.phase_comp) << ','
          << s.calls_cumulative << ',' << s.slices << ',' << g17(s.delta_gamma) << ','
          << g17(s.gamma) << ',' << g17(s.likelihood_delta) << '\n';
    }
  }
}

void write_trace_csv(std::ostream& out, const std::string& config_hash,
                     const std::vector<TraceRow>& rows) {
  header(out, config_hash, "trial,theta,time,cos_exact,cos_hat,sin_exact,sin_hat");
  for (const auto& r : rows) {
    out << r.trial << ',' << g17(r.theta) << ',' << g17(r.time) << ',' << g17(r.cos_exact) << ','
        << g17(r.cos_hat) << ',' << g17(r.sin_exact) << ',' << g17(r.sin_hat) << '\n';
  }
}

void write_search_csv(std::ostream& out, const std::string& config_hash,
                      const std::vector<SearchRow>& rows) {
  header(out, config_hash, "n,q_calls,instance,separation,bound,within_bound");
  for (const auto& r : rows) {
    out << r.n << ',' << r.q_calls << ',' << r.instance << ',' << g17(r.separation) << ','
        << g17(r.bound) << ',' << (r.separation <= r.bound + 1e-12 ? 1 : 0) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::string& config_hash,
                     const std::vector<SweepPoint>& rows) {
  header(out, config_hash, "n,q_calls,separation,bound,j_needed,n_total");
  for (const auto& r : rows) {
    out << r.n << ',' << r.q_calls << ',' << g17(r.separation) << ',' << g17(r.bound) << ','
        << r.j_needed << ',' << r.n_total << '\n';
  }
}

std::string summary_json(const CampaignSummary& s, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["config_sha256"] = config_hash;
  j["mode"] = s.mode;
  j["rows"] = s.rows;
  j["converged"] = s.converged;
  j["failed"] = s.failed;
  j["nonconverged_fraction"] = s.nonconverged_fraction;
  j["coverage"] = s.coverage;
  if (s.scaling) {
    j["scaling"] = {{"slope", s.scaling->slope},
                    {"intercept", s.scaling->intercept},
                    {"ci95", {s.scaling->ci_lo, s.scaling->ci_hi}},
                    {"points", s.scaling->points}};
  } else {
    j["scaling"] = nullptr;
    if (!s.scaling_error.empty()) j["scaling_error"] = s.scaling_error;
  }
  j["total_time"] = s.total_time;
  j["total_calls"] = s.total_calls;
  j["total_slices"] = s.total_slices;
  j["bound_violations"] = s.bound_violations;
  return j.dump(2) + "\n";
}

std::string scaling_svg(const std::vector<double>& x, const std::vector<double>& y,
                        const std::optional<ScalingFit>& fit, const std::string& x_label,
                        const std::string& y_label) {
  if (x.empty() || x.size() != y.size()) throw PreconditionError("scaling_svg: no points to plot");
  const double w = 640.0;
  const double h = 420.0;
  const double m = 60.0;
  auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  double xmin = *xmin_it, xmax = *xmax_it, ymin = *ymin_it, ymax = *ymax_it;
  if (xmax - xmin < 1e-12) { xmin -= 1.0; xmax += 1.0; }
  if (ymax - ymin < 1e-12) { ymin -= 1.0; ymax += 1.0; }
  const auto px = [&](double v) { return m + (v - xmin) / (xmax - xmin) * (w - 2 * m); };
  const auto py = [&](double v) { return h - m - (v - ymin) / (ymax - ymin) * (h - 2 * m); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n"
      "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
      w, h, m, h - m, w - m, h - m, m, m, m, h - m);
  for (std::size_t i = 0; i < x.size(); ++i) {
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\" fill=\"steelblue\"/>\n",
                       px(x[i]), py(y[i]));
  }
  if (fit) {
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"firebrick\"/>\n",
        px(xmin), py(fit->intercept + fit->slope * xmin), px(xmax),
        py(fit->intercept + fit->slope * xmax));
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\">slope {:.3f} [{:.3f}, {:.3f}]</text>\n", m + 10,
        m - 20, fit->slope, fit->ci_lo, fit->ci_hi);
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"13\">{}</text>\n", w / 2 - 60, h - 20,
                     x_label);
  svg += fmt::format(
      "<text x=\"15\" y=\"{}\" font-size=\"13\" transform=\"rotate(-90 15 {})\">{}</text>\n",
      h / 2, h / 2, y_label);
  svg += "</svg>\n";
  return svg;
}

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace dqc1
