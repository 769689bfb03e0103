#include "dqc1/bayes_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <fmt/core.h>

#include "dqc1/errors.hpp"
#include "dqc1/gaussian_update.hpp"

namespace dqc1 {
namespace {

constexpr double kPi = std::numbers::pi;
// Maximum tail mass tolerated beyond ±2π of the first prior (wrap-around).
constexpr double kWrapAroundBound = 1e-9;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

std::vector<std::string> ZoomPolicy::violations() const {
  std::vector<std::string> v;
  if (!(delta > 0.0) || !std::isfinite(delta)) v.push_back(fmt::format("delta = {} must be > 0", delta));
  if (!(c > 0.0)) v.push_back(fmt::format("c = {} must be > 0", c));
  if (!(c_prime > 5.0)) v.push_back(fmt::format("c' = {} must exceed 5", c_prime));
  if (!(c_prime >= c)) v.push_back(fmt::format("c' = {} must be >= c = {}", c_prime, c));
  if (!(c * delta <= 0.1)) v.push_back(fmt::format("c*delta = {} must be <= 0.1", c * delta));
  if (c > 0.0 && delta > 0.0) {
    const double tail = std::erfc(2.0 * kPi / (c * delta * std::sqrt(2.0)));
    if (!(tail < kWrapAroundBound)) {
      v.push_back(fmt::format("wrap-around mass erfc(2pi/(c*delta*sqrt2)) = {:.3e} must be < {:.0e}",
                              tail, kWrapAroundBound));
    }
  }
  if (!(target_precision > 0.0)) {
    v.push_back(fmt::format("target precision = {} must be > 0", target_precision));
  }
  if (!(theta_floor > 0.0)) v.push_back(fmt::format("theta floor = {} must be > 0", theta_floor));
  if (max_steps == 0) v.push_back("max_steps must be >= 1");
  return v;
}

void ZoomPolicy::validate() const {
  const auto v = violations();
  if (!v.empty()) throw PreconditionError("invalid zoom policy: " + join(v));
}

double EstimatorState::theta_std() const {
  if (!(t_current > 0.0)) return std::numeric_limits<double>::infinity();
  return scaled_dev / (2.0 * t_current);
}

EstimatorState init_schedule(double theta0_hat, const ZoomPolicy& policy) {
  policy.validate();
  if (!std::isfinite(theta0_hat) || theta0_hat < policy.theta_floor) {
    throw PreconditionError(fmt::format(
        "prior mean {} is below the floor {}; start with init_sine_schedule instead", theta0_hat,
        policy.theta_floor));
  }
  if (!(theta0_hat < kPi)) {
    throw PreconditionError(fmt::format("prior mean {} must be below pi", theta0_hat));
  }
  EstimatorState s;
  s.theta_hat = theta0_hat;
  s.scaled_dev = policy.c * policy.delta;
  ZoomStep z;
  z.t = kPi / (4.0 * theta0_hat);
  z.prior_phase = kPi / 2.0;
  z.prior_dev = policy.c * policy.delta;
  s.pending = z;
  return s;
}

EstimatorState init_sine_schedule(double theta0_hat, const ZoomPolicy& policy) {
  policy.validate();
  if (!std::isfinite(theta0_hat)) throw PreconditionError("prior mean must be finite");
  EstimatorState s;
  s.theta_hat = theta0_hat;
  s.scaled_dev = policy.c * policy.delta;
  ZoomStep z;
  z.t = 1.0;
  z.prior_phase = 2.0 * theta0_hat;
  z.prior_dev = policy.c * policy.delta;
  z.kind = MeasurementKind::sine;
  s.pending = z;
  return s;
}

EstimatorState posterior_update(const EstimatorState& state, double x, const ZoomPolicy& policy,
                                std::optional<double> likelihood_delta) {
  if (!state.pending) throw PreconditionError("posterior_update: no measurement is scheduled");
  if (!std::isfinite(x)) throw PreconditionError("posterior_update: outcome must be finite");
  const ZoomStep z = *state.pending;
  const double sigma = likelihood_delta.value_or(policy.delta);
  if (!(sigma > 0.0)) throw PreconditionError("posterior_update: likelihood std must be positive");

  GaussianPosterior post;
  if (z.kind == MeasurementKind::cosine) {
    // cos(π/2 + 2pπ + δ) = -δ + O(δ³): slope -1, prediction exactly 0.
    post = linearized_update(z.prior_phase, z.prior_dev, -1.0, 0.0, x, sigma);
  } else {
    post = linearized_update(z.prior_phase, z.prior_dev, std::cos(z.prior_phase),
                             std::sin(z.prior_phase), x, sigma);
  }

  EstimatorState next = state;
  next.step = state.step + 1;
  next.theta_hat = post.mean / (2.0 * z.t);
  next.scaled_dev = post.stddev;
  next.t_current = z.t;
  next.winding = z.winding;
  next.pending.reset();

  StepRecord r;
  r.step = next.step;
  r.time = z.t;
  r.winding = z.winding;
  r.zoom = z.ratio;
  r.outcome = x;
  r.theta_hat = next.theta_hat;
  r.dev = next.scaled_dev;
  const double half = kZ95 * next.theta_std();
  r.lo = next.theta_hat - half;
  r.hi = next.theta_hat + half;
  r.sine = z.kind == MeasurementKind::sine;
  r.outlier = std::abs(x) > 1.0 + 5.0 * policy.delta;
  r.likelihood_delta = sigma;
  next.history.push_back(r);
  return next;
}

ZoomStep next_zoom(const EstimatorState& state, const ZoomPolicy& policy) {
  if (!(state.theta_hat > 0.0)) {
    throw PreconditionError(fmt::format(
        "next_zoom: estimate {} is not positive; restart on the sine pipeline", state.theta_hat));
  }
  if (!(state.t_current > 0.0)) throw PreconditionError("next_zoom: no measurement taken yet");
  const double two_theta = 2.0 * state.theta_hat;
  const double phase_cap = two_theta * policy.c_prime * state.t_current;
  auto p = static_cast<std::int64_t>(std::floor((phase_cap - kPi / 2.0) / (2.0 * kPi)));
  const auto time_of = [&](std::int64_t w) {
    return (kPi / 2.0 + 2.0 * kPi * static_cast<double>(w)) / two_theta;
  };
  // Guard the floor against rounding at the cap.
  while (p >= 0 && time_of(p) > policy.c_prime * state.t_current) --p;
  if (p < 0) {
    throw PreconditionError(fmt::format(
        "next_zoom: no winding keeps T_next/T_l <= c' = {} (theta_hat = {}, T = {})",
        policy.c_prime, state.theta_hat, state.t_current));
  }
  ZoomStep z;
  z.t = time_of(p);
  z.winding = p;
  z.ratio = z.t / state.t_current;
  if (!(z.ratio > 1.0)) {
    throw PreconditionError(fmt::format("next_zoom: zoom ratio {} does not exceed 1", z.ratio));
  }
  z.prior_phase = kPi / 2.0 + 2.0 * kPi * static_cast<double>(p);
  z.prior_dev = z.ratio * state.scaled_dev;
  return z;
}

ZoomStep next_sine_step(const EstimatorState& state, const ZoomPolicy& policy) {
  if (!(state.t_current > 0.0)) throw PreconditionError("next_sine_step: no measurement taken yet");
  const double theta = state.theta_hat;
  if (theta > 0.0 && kPi / (4.0 * theta) <= policy.c_prime * state.t_current) {
    return next_zoom(state, policy);
  }
  double t = policy.c_prime * state.t_current;
  // Keep the sine slope cos(2θ̂T) >= cos(π/4).
  if (theta > 0.0) t = std::min(t, kPi / (8.0 * theta));
  ZoomStep z;
  z.t = t;
  z.ratio = t / state.t_current;
  z.prior_phase = 2.0 * theta * t;
  z.prior_dev = z.ratio * state.scaled_dev;
  z.kind = MeasurementKind::sine;
  return z;
}

EstimatorState schedule(EstimatorState state, const ZoomPolicy& policy) {
  if (state.history.empty()) {
    if (!state.pending) throw PreconditionError("schedule: state was not initialized");
    return state;
  }
  state.pending = state.history.back().sine ? next_sine_step(state, policy)
                                            : next_zoom(state, policy);
  return state;
}

bool reached_target(const EstimatorState& state, const ZoomPolicy& policy) {
  return state.t_current > 0.0 && state.theta_std() <= policy.target_precision;
}

// ---------------------------------------------------------------------------
// Signals and full runs

Su2Signal::Su2Signal(Su2Probe probe, double theta_true, NoiseModel noise)
    : probe_(std::move(probe)), theta_true_(theta_true), noise_(noise) {
  noise_.validate();
}

SignalSample Su2Signal::cosine(double t, SampleStream& stream) const {
  const CosSinEstimate e =
      probe_.estimate_for(evolve(probe_.h0(), theta_true_ * t), noise_, false, stream);
  SignalSample s;
  s.value = e.cos_hat;
  s.likelihood_delta = e.effective_delta;
  return s;
}

SignalSample Su2Signal::sine(double t, SampleStream& stream) const {
  const CosSinEstimate e =
      probe_.estimate_for(evolve(probe_.h0(), theta_true_ * t), noise_, true, stream);
  SignalSample s;
  s.value = *e.sin_hat;
  s.likelihood_delta = e.effective_delta;
  return s;
}

RunRecord run_estimation(const PhaseSignal& signal, double theta0_hat, const ZoomPolicy& policy,
                         const StreamKey& key) {
  policy.validate();
  const double kappa = signal.frequency_scale();
  if (!(kappa > 0.0)) throw PreconditionError("signal frequency scale must be positive");
  ZoomPolicy inner = policy;
  inner.target_precision = policy.target_precision * kappa;

  RunRecord rec;
  rec.trial = key.trial;
  rec.theta_prior = theta0_hat;
  rec.target_precision = policy.target_precision;

  const double vartheta0 = kappa * theta0_hat;
  EstimatorState state = vartheta0 >= inner.theta_floor ? init_schedule(vartheta0, inner)
                                                        : init_sine_schedule(vartheta0, inner);
  while (state.step < inner.max_steps) {
    const ZoomStep z = *state.pending;
    SampleStream stream(key.with_step(state.step + 1));
    const SignalSample sample =
        z.kind == MeasurementKind::cosine ? signal.cosine(z.t, stream) : signal.sine(z.t, stream);
    state = posterior_update(state, sample.value, inner, sample.likelihood_delta);
    StepRecord& r = state.history.back();
    r.slices = sample.slices;
    r.delta_gamma = sample.delta_gamma;
    r.gamma = sample.bias;
    if (reached_target(state, inner)) {
      rec.converged = true;
      break;
    }
    try {
      state = schedule(std::move(state), inner);
    } catch (const PreconditionError& e) {
      rec.error = e.what();
      break;
    }
  }

  for (StepRecord r : state.history) {
    r.theta_hat /= kappa;
    r.lo /= kappa;
    r.hi /= kappa;
    rec.total_time += r.time;
    rec.total_slices += r.slices;
    if (r.outlier) ++rec.outliers;
    rec.steps.push_back(r);
  }
  rec.theta_hat = state.theta_hat / kappa;
  rec.posterior_std = state.theta_std() / kappa;
  rec.lo = rec.theta_hat - kZ95 * rec.posterior_std;
  rec.hi = rec.theta_hat + kZ95 * rec.posterior_std;
  rec.final_time = state.t_current;
  rec.total_calls = rec.steps.size();
  return rec;
}

double draw_continuous_prior(double theta_true, const ZoomPolicy& policy, SampleStream& stream,
                             double frequency_scale) {
  const double vartheta = frequency_scale * theta_true;
  const double z = stream.normal();
  const double spread = policy.c * policy.delta * z;
  // 2ϑT_1 = π/2 + cΔz with T_1 = π/(4ϑ̂_0).
  const double cosine_draw = vartheta * (kPi / 2.0) / (kPi / 2.0 + spread);
  if (cosine_draw >= policy.theta_floor) return cosine_draw / frequency_scale;
  // 2ϑ̂_0·T'_1 = 2ϑ - cΔz with T'_1 = 1.
  return (vartheta - spread / 2.0) / frequency_scale;
}

RunRecord run_estimation(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2,
                         double theta_true, const ZoomPolicy& policy, const NoiseModel& noise,
                         std::uint64_t trial) {
  const Su2Signal signal(Su2Probe(h0, h1, h2), theta_true, noise);
  const StreamKey key{noise.seed, trial, 0};
  SampleStream prior_stream(key);
  const double theta0 =
      draw_continuous_prior(theta_true, policy, prior_stream, signal.frequency_scale());
  RunRecord rec = run_estimation(signal, theta0, policy, key);
  rec.theta_true = theta_true;
  return rec;
}

}  // namespace dqc1
