#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dqc1/run_record.hpp"
#include "dqc1/search_bound.hpp"

namespace dqc1 {

/// OLS slope with a percentile-bootstrap 95% interval.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t points = 0;
};

/// Which per-run resource is regressed against 1/Δ_θ.
enum class Resource { total_time, total_calls };

/// Ordinary least squares of y on x plus `resamples` bootstrap fits (pairs
/// resampled with a seeded generator). Needs >= 2 distinct x values.
ScalingFit fit_with_bootstrap(const std::vector<double>& x, const std::vector<double>& y,
                              std::uint64_t seed, std::size_t resamples = 1000);

/// Slope of log(resource) vs log(1/Δ_θ) over converged records. Throws
/// PreconditionError when fewer than 3 distinct Δ_θ values are present.
ScalingFit scaling_report(const std::vector<RunRecord>& records, Resource resource,
                          std::uint64_t seed = 0, std::size_t resamples = 1000);

/// Noise-free and sampled cos/sin traces at one time.
struct TraceRow {
  std::uint64_t trial = 0;
  double theta = 0.0;
  double time = 0.0;
  double cos_exact = 0.0;
  double cos_hat = 0.0;
  double sin_exact = 0.0;
  double sin_hat = 0.0;
};

/// One simulated search instance.
struct SearchRow {
  std::size_t n = 0;
  std::size_t q_calls = 0;
  std::uint64_t instance = 0;
  double separation = 0.0;
  double bound = 0.0;
};

struct CampaignSummary {
  std::string mode;
  std::size_t rows = 0;
  std::size_t converged = 0;
  std::size_t failed = 0;
  double nonconverged_fraction = 0.0;
  /// Fraction of converged runs whose 95% interval contains θ_true.
  double coverage = 0.0;
  std::optional<ScalingFit> scaling;
  std::string scaling_error;
  double total_time = 0.0;
  std::uint64_t total_calls = 0;
  std::uint64_t total_slices = 0;
  /// search-bound: instances whose separation exceeded the bound.
  std::size_t bound_violations = 0;
};

/// CSV writers: a `# config_sha256=<hex>` comment line, a fixed header and
/// %.17g numbers so that identical inputs give identical bytes.
void write_trials_csv(std::ostream& out, const std::string& config_hash,
                      const std::vector<RunRecord>& runs);
void write_steps_csv(std::ostream& out, const std::string& config_hash,
                     const std::vector<RunRecord>& runs);
void write_trace_csv(std::ostream& out, const std::string& config_hash,
                     const std::vector<TraceRow>& rows);
void write_search_csv(std::ostream& out, const std::string& config_hash,
                      const std::vector<SearchRow>& rows);
void write_sweep_csv(std::ostream& out, const std::string& config_hash,
                     const std::vector<SweepPoint>& rows);

std::string summary_json(const CampaignSummary& summary, const std::string& config_hash);

/// Log-log scatter of resource vs 1/Δ_θ with the fitted line.
std::string scaling_svg(const std::vector<double>& x, const std::vector<double>& y,
                        const std::optional<ScalingFit>& fit, const std::string& x_label,
                        const std::string& y_label);

/// Hex SHA-256 of the text.
std::string sha256_hex(const std::string& text);

}  // namespace dqc1
