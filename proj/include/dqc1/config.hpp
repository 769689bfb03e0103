#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqc1/bayes_continuous.hpp"
#include "dqc1/blackbox_discrete.hpp"
#include "dqc1/errors.hpp"
#include "dqc1/frame_alignment.hpp"
#include "dqc1/measurement.hpp"
#include "dqc1/search_bound.hpp"

namespace dqc1 {

enum class Mode {
  trace,
  estimate_continuous,
  estimate_discrete,
  multiparam,
  frame_align,
  search_bound,
};

std::string mode_name(Mode mode);
std::optional<Mode> parse_mode(const std::string& text);

/// Everything a campaign needs, loaded from an INI-style text file:
///
///   [experiment] mode, trials, seed, threads, max_nonconverged
///   [hamiltonian] h0, h1, h2 (Pauli sums like `0.5*"ZI" + 0.5*"IZ"`),
///                 theta (list for multiparam), terms (multiparam products),
///                 times (trace mode)
///   [noise] delta, repetitions
///   [policy] c, c_prime, b, theta_floor, target_precision (list),
///            max_steps, compensate
///   [trotter] order, epsilon_ratio (ε target as a fraction of Δ)
///   [frame] kind, phi, psi
///   [search] n_min, n_max, theta, interleave, instances, q_calls (list),
///            sweep_interleave
///
/// Lists are comma separated.
struct ExperimentConfig {
  Mode mode = Mode::estimate_continuous;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: hardware concurrency
  double max_nonconverged = 0.05;

  std::string h0_text = "1*\"Z\"";
  std::string h1_text = "1*\"X\"";
  std::string h2_text = "1*\"Y\"";
  std::vector<double> theta = {0.7};
  std::vector<std::string> terms;
  std::vector<double> times = {1.0};

  NoiseModel noise;
  double c = 10.0;
  double c_prime = 10.0;
  std::uint64_t b = 8;
  double theta_floor = 0.05;
  std::vector<double> target_precision = {1e-6};
  std::size_t max_steps = 200;
  bool compensate = true;

  int trotter_order = 2;
  double epsilon_ratio = 0.1;  // ε target as a fraction of Δ

  MisalignmentKind frame_kind = MisalignmentKind::uniparametric;
  double phi = 0.0;
  double psi = 0.0;

  std::size_t n_min = 4;
  std::size_t n_max = 8;
  double search_theta = 3.141592653589793;
  InterleaveKind interleave = InterleaveKind::haar;
  /// Interleave of the resource sweep (Q optimized per n).
  InterleaveKind sweep_interleave = InterleaveKind::offset_shift;
  std::uint64_t instances = 100;
  std::vector<std::uint64_t> q_calls = {1, 2};

  ZoomPolicy zoom_policy(double target) const;
  BlackBoxPolicy blackbox_policy(double target) const;
  FrameMisalignment misalignment() const;

  /// Canonical key=value rendering of every field that influences results
  /// (thread count excluded); hashed into the CSV headers.
  std::string canonical() const;
};

/// Raised with the complete list of violated invariants.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Parses INI text; unknown keys and malformed values are collected and
/// reported together with every module precondition violation.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Every violated precondition of the configured mode (empty when valid).
std::vector<std::string> config_violations(const ExperimentConfig& cfg);

/// Throws ConfigError when config_violations is non-empty.
void validate_config(const ExperimentConfig& cfg);

/// Strips double quotes so `0.5*"ZI"` parses as a Pauli sum.
PauliSum parse_quoted_sum(const std::string& text);

}  // namespace dqc1
