#include "dqc1/blackbox_discrete.hpp"

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
constexpr std::uint64_t kMaxPower = std::uint64_t{1} << 62;

}  // namespace

std::vector<std::string> BlackBoxPolicy::violations() const {
  std::vector<std::string> v;
  if (b < 2) v.push_back(fmt::format("b = {} must be >= 2", b));
  if (!(delta > 0.0) || !std::isfinite(delta)) v.push_back(fmt::format("delta = {} must be > 0", delta));
  if (!(c > 0.0)) v.push_back(fmt::format("c = {} must be > 0", c));
  if (!(c * delta <= 0.1)) v.push_back(fmt::format("c*delta = {} must be <= 0.1", c * delta));
  // Zoomed priors have std up to bΔ; keep them in the linear regime too.
  if (!(static_cast<double>(b) * delta <= 0.1)) {
    v.push_back(fmt::format("b*delta = {} must be <= 0.1", static_cast<double>(b) * delta));
  }
  if (!(target_precision > 0.0)) {
    v.push_back(fmt::format("target precision = {} must be > 0", target_precision));
  }
  if (max_steps == 0) v.push_back("max_steps must be >= 1");
  return v;
}

void BlackBoxPolicy::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid black-box policy:";
  for (const auto& s : v) msg += " " + s + ";";
  throw PreconditionError(msg);
}

double DiscreteState::theta_std() const {
  if (q == 0) return std::numeric_limits<double>::infinity();
  return sigma / (2.0 * static_cast<double>(q));
}

DiscreteState init_discrete(double theta0_hat, const BlackBoxPolicy& policy) {
  policy.validate();
  if (!(theta0_hat > 0.0 && theta0_hat < kPi / 4.0)) {
    throw PreconditionError(fmt::format(
        "prior mean {} must lie in (0, pi/4); re-centre the prior before the discrete run",
        theta0_hat));
  }
  DiscreteState s;
  s.theta_hat = theta0_hat;
  s.sigma = policy.c * policy.delta;
  PowerStep z;
  z.q = 1;
  z.prior_dev = policy.c * policy.delta;
  if (policy.compensate) {
    z.phase_comp = kPi / 4.0 - theta0_hat;
    z.prior_phase = kPi / 2.0;
  } else {
    z.prior_phase = 2.0 * theta0_hat;
  }
  s.pending = z;
  return s;
}

PowerStep compensated_power(double theta_hat, std::uint64_t q) {
  const double v = 2.0 * theta_hat * static_cast<double>(q) - kPi / 2.0;
  // p = floor((v + π)/2π) puts 2pπ - v in (-π, π].
  auto p = static_cast<std::int64_t>(std::floor((v + kPi) / (2.0 * kPi)));
  double phi = (2.0 * kPi * static_cast<double>(p) - v) / 2.0;
  // Rounding at the window edge.
  if (phi <= -kPi / 2.0) {
    ++p;
    phi += kPi;
  } else if (phi > kPi / 2.0) {
    --p;
    phi -= kPi;
  }
  PowerStep z;
  z.q = q;
  z.phase_comp = phi;
  z.winding = p;
  z.prior_phase = kPi / 2.0 + 2.0 * kPi * static_cast<double>(p);
  return z;
}

DiscreteState discrete_update(const DiscreteState& state, double y, const BlackBoxPolicy& policy,
                              std::optional<double> likelihood_delta) {
  if (!state.pending) throw PreconditionError("discrete_update: no measurement is scheduled");
  if (!std::isfinite(y)) throw PreconditionError("discrete_update: outcome must be finite");
  const PowerStep z = *state.pending;
  const double sigma = likelihood_delta.value_or(policy.delta);
  if (!(sigma > 0.0)) throw PreconditionError("discrete_update: likelihood std must be positive");

  const GaussianPosterior post =
      policy.compensate
          ? linearized_update(z.prior_phase, z.prior_dev, -1.0, 0.0, y, sigma)
          : linearized_update(z.prior_phase, z.prior_dev, -std::sin(z.prior_phase),
                              std::cos(z.prior_phase), y, sigma);

  DiscreteState next = state;
  next.step = state.step + 1;
  next.theta_hat = (post.mean - 2.0 * z.phase_comp) / (2.0 * static_cast<double>(z.q));
  next.sigma = post.stddev;
  const std::uint64_t previous_q = state.q;
  next.q = z.q;
  next.phase_comp = z.phase_comp;
  next.winding = z.winding;
  next.calls = state.calls + z.q;
  next.pending.reset();

  StepRecord r;
  r.step = next.step;
  r.time = static_cast<double>(z.q);
  r.winding = z.winding;
  r.zoom = previous_q == 0 ? 1.0 : static_cast<double>(z.q) / static_cast<double>(previous_q);
  r.outcome = y;
  r.theta_hat = next.theta_hat;
  r.dev = next.sigma;
  const double half = kZ95 * next.theta_std();
  r.lo = next.theta_hat - half;
  r.hi = next.theta_hat + half;
  r.outlier = std::abs(y) > 1.0 + 5.0 * policy.delta;
  r.phase_comp = z.phase_comp;
  r.calls_cumulative = next.calls;
  r.likelihood_delta = sigma;
  next.history.push_back(r);
  return next;
}

PowerStep next_power(const DiscreteState& state, const BlackBoxPolicy& policy) {
  if (state.q == 0) throw PreconditionError("next_power: no measurement taken yet");
  if (state.q > kMaxPower / policy.b) throw ResourceLimitError("next_power: power overflow");
  PowerStep z = compensated_power(state.theta_hat, state.q * policy.b);
  // The phase prior widens by the zoom factor: b'Δ = bΣ_l.
  z.prior_dev = static_cast<double>(policy.b) * state.sigma;
  return z;
}

PowerStep next_power_uncompensated(const DiscreteState& state, const BlackBoxPolicy& policy) {
  if (state.q == 0) throw PreconditionError("next_power: no measurement taken yet");
  if (state.q > kMaxPower / policy.b) throw ResourceLimitError("next_power: power overflow");
  const std::uint64_t hi = state.q * policy.b;
  const std::uint64_t lo = std::max(state.q + 1, (hi + 1) / 2);
  std::uint64_t best = hi;
  double best_slope = -1.0;
  for (std::uint64_t q = hi; q >= lo; --q) {
    const double slope = std::abs(std::sin(2.0 * state.theta_hat * static_cast<double>(q)));
    if (slope > best_slope) {
      best_slope = slope;
      best = q;
    }
    if (q == lo) break;
  }
  PowerStep z;
  z.q = best;
  z.prior_phase = 2.0 * state.theta_hat * static_cast<double>(best);
  z.prior_dev = static_cast<double>(best) / static_cast<double>(state.q) * state.sigma;
  return z;
}

// ---------------------------------------------------------------------------
// Signals and full runs

BlackBoxSignal::BlackBoxSignal(Su2Probe probe, double theta_true, NoiseModel noise)
    : probe_(std::move(probe)), noise_(noise), w_b_(evolve(probe_.h0(), theta_true)) {
  noise_.validate();
}

double BlackBoxSignal::cosine(std::uint64_t q, double phase_comp, SampleStream& stream,
                              double* likelihood_delta) const {
  // exp(-i(φ/κ)H0) shifts the measured phase 2κ(θq + φ/κ) by exactly 2φ.
  const DenseOperator w =
      matrix_power(w_b_, q) * evolve(probe_.h0(), phase_comp / probe_.frequency_scale());
  const CosSinEstimate e = probe_.estimate_for(w, noise_, false, stream);
  if (likelihood_delta) *likelihood_delta = e.effective_delta;
  return e.cos_hat;
}

RunRecord run_discrete(const PowerSignal& signal, double theta0_hat, const BlackBoxPolicy& policy,
                       const StreamKey& key) {
  policy.validate();
  const double kappa = signal.frequency_scale();
  if (!(kappa > 0.0)) throw PreconditionError("signal frequency scale must be positive");
  BlackBoxPolicy inner = policy;
  inner.target_precision = policy.target_precision * kappa;

  RunRecord rec;
  rec.trial = key.trial;
  rec.theta_prior = theta0_hat;
  rec.target_precision = policy.target_precision;

  DiscreteState state = init_discrete(kappa * theta0_hat, inner);
  while (state.step < inner.max_steps) {
    const PowerStep z = *state.pending;
    SampleStream stream(key.with_step(state.step + 1));
    double sigma = inner.delta;
    const double y = signal.cosine(z.q, z.phase_comp, stream, &sigma);
    state = discrete_update(state, y, inner, sigma);
    if (state.theta_std() <= inner.target_precision) {
      rec.converged = true;
      break;
    }
    try {
      state.pending = inner.compensate ? next_power(state, inner) : next_power_uncompensated(state, inner);
    } catch (const Error& e) {
      rec.error = e.what();
      break;
    }
  }

  for (StepRecord r : state.history) {
    r.theta_hat /= kappa;
    r.lo /= kappa;
    r.hi /= kappa;
    rec.total_time += r.time;
    if (r.outlier) ++rec.outliers;
    rec.steps.push_back(r);
  }
  rec.theta_hat = state.theta_hat / kappa;
  rec.posterior_std = state.theta_std() / kappa;
  rec.lo = rec.theta_hat - kZ95 * rec.posterior_std;
  rec.hi = rec.theta_hat + kZ95 * rec.posterior_std;
  rec.final_time = static_cast<double>(state.q);
  rec.total_calls = state.calls;
  return rec;
}

double draw_discrete_prior(double theta_true, const BlackBoxPolicy& policy, SampleStream& stream,
                           double frequency_scale) {
  const double z = stream.normal();
  return (frequency_scale * theta_true - policy.c * policy.delta * z / 2.0) / frequency_scale;
}

RunRecord run_discrete(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2,
                       double theta_true, const BlackBoxPolicy& policy, const NoiseModel& noise,
                       std::uint64_t trial) {
  const BlackBoxSignal signal(Su2Probe(h0, h1, h2), theta_true, noise);
  const StreamKey key{noise.seed, trial, 0};
  SampleStream prior_stream(key);
  const double theta0 =
      draw_discrete_prior(theta_true, policy, prior_stream, signal.frequency_scale());
  RunRecord rec = run_discrete(signal, theta0, policy, key);
  rec.theta_true = theta_true;
  return rec;
}

std::uint64_t geometric_calls(std::uint64_t b, std::size_t k) {
  std::uint64_t total = 0;
  std::uint64_t term = 1;
  for (std::size_t i = 0; i < k; ++i) {
    total += term;
    term *= b;
  }
  return total;
}

}  // namespace dqc1
