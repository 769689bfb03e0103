#include "dqc1/measurement.hpp"

#include <cmath>
#include <vector>

#include <fmt/core.h>

#include "dqc1/errors.hpp"

namespace dqc1 {

double NoiseModel::effective_delta() const {
  return delta / std::sqrt(static_cast<double>(repetitions));
}

void NoiseModel::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw PreconditionError(fmt::format("noise delta must be positive and finite, got {}", delta));
  }
  if (repetitions == 0) throw PreconditionError("noise repetitions must be at least 1");
}

double sample_trace_estimate(double true_mean, const NoiseModel& noise, SampleStream& stream) {
  noise.validate();
  if (!(std::abs(true_mean) <= 1.0 + 1e-9)) {
    throw PreconditionError(fmt::format("trace mean {} lies outside [-1, 1]", true_mean));
  }
  return true_mean + noise.effective_delta() * stream.normal();
}

double sample_trace_estimate(double true_mean, const NoiseModel& noise) {
  SampleStream stream(StreamKey{noise.seed, 0, 0});
  return sample_trace_estimate(true_mean, noise, stream);
}

namespace {

// tr[W† σ_μ W σ_μ'] / 2^n for every pair, with the conjugated products cached.
std::vector<std::vector<double>> pair_traces(const DenseOperator& w, const PauliSum& a,
                                             const PauliSum& b) {
  const double dim = static_cast<double>(w.rows());
  std::vector<DenseOperator> b_mats;
  b_mats.reserve(b.size());
  for (const auto& tb : b.terms()) b_mats.push_back(to_matrix(tb.product));
  std::vector<std::vector<double>> out(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const DenseOperator conj = w.adjoint() * to_matrix(a[i].product) * w;
    for (std::size_t j = 0; j < b.size(); ++j) {
      // Hermitian operands: the trace is real up to rounding.
      out[i][j] = (conj.cwiseProduct(b_mats[j].transpose())).sum().real() / dim;
    }
  }
  return out;
}

void require_compatible(const DenseOperator& w, const PauliSum& a, const PauliSum& b) {
  const Eigen::Index dim = Eigen::Index{1} << a.num_qubits();
  if (w.rows() != dim || w.cols() != dim || a.num_qubits() != b.num_qubits()) {
    throw DimensionError("overlap estimate: operator dimensions do not match");
  }
  if (a.empty()) throw PreconditionError("overlap estimate: observable A is empty");
}

}  // namespace

double overlap_mean(const DenseOperator& w, const PauliSum& a, const PauliSum& b) {
  require_compatible(w, a, b);
  const auto x = pair_traces(w, a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) sum += a[i].coefficient * b[j].coefficient * x[i][j];
  }
  return sum / a.schmidt_weight();
}

OverlapEstimate overlap_estimate(const DenseOperator& w, const PauliSum& a, const PauliSum& b,
                                 const NoiseModel& noise, SampleStream& stream) {
  require_compatible(w, a, b);
  noise.validate();
  const auto x = pair_traces(w, a, b);
  OverlapEstimate out;
  double weight_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double ab = a[i].coefficient * b[j].coefficient;
      const double run = sample_trace_estimate(x[i][j], noise, stream);
      out.value += ab * run;
      out.exact += ab * x[i][j];
      weight_sq += ab * ab;
      ++out.runs;
    }
  }
  const double norm = a.schmidt_weight();
  out.value /= norm;
  out.exact /= norm;
  out.effective_delta = noise.effective_delta() * std::sqrt(weight_sq) / norm;
  return out;
}

// ---------------------------------------------------------------------------
// Su2Probe

Su2Probe::Su2Probe(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2) : h0_(h0) {
  if (h0.num_qubits() != h1.num_qubits() || h0.num_qubits() != h2.num_qubits()) {
    throw DimensionError("Su2Probe: generators act on different qubit counts");
  }
  if (h1.size() == 1 && h2.size() == 1) {
    try {
      const Su2Partner partner = find_su2_partner(h0, h1[0].product);
      if (h2[0].product == partner.partner.without_phase()) {
        const double e_mu = h0[partner.term_index].coefficient;
        path_ = ProbePath::shortcut;
        kappa_ = std::abs(e_mu);
        cos_a_ = PauliSum::single(h1[0].product);
        sin_b_ = PauliSum::single(partner.partner);
        sin_sign_ = e_mu > 0 ? -1.0 : 1.0;
        return;
      }
    } catch (const PreconditionError&) {
      // Fall through to the closed-triple path.
    }
  }
  if (!check_su2_triple(h0, h1, h2)) {
    throw PreconditionError(fmt::format(
        "generators ({}; {}; {}) neither close su(2) nor meet the single-trace conditions",
        h0.to_string(), h1.to_string(), h2.to_string()));
  }
  path_ = ProbePath::l2_sum;
  kappa_ = 1.0;
  cos_a_ = h1;
  sin_b_ = h2;
  sin_sign_ = -1.0;
}

std::size_t Su2Probe::runs_per_estimate() const { return cos_a_.size() * cos_a_.size(); }

double Su2Probe::exact_cos(const DenseOperator& w) const { return overlap_mean(w, cos_a_, cos_a_); }

double Su2Probe::exact_sin(const DenseOperator& w) const {
  return sin_sign_ * overlap_mean(w, cos_a_, sin_b_);
}

CosSinEstimate Su2Probe::estimate_for(const DenseOperator& w, const NoiseModel& noise,
                                      bool want_sin, SampleStream& stream) const {
  CosSinEstimate out;
  const OverlapEstimate c = overlap_estimate(w, cos_a_, cos_a_, noise, stream);
  out.cos_hat = c.value;
  out.effective_delta = c.effective_delta;
  if (want_sin) {
    const OverlapEstimate s = overlap_estimate(w, cos_a_, sin_b_, noise, stream);
    out.sin_hat = sin_sign_ * s.value;
  }
  return out;
}

CosSinEstimate Su2Probe::estimate(double theta, double t, const NoiseModel& noise, bool want_sin,
                                  SampleStream& stream) const {
  return estimate_for(evolve(h0_, theta * t), noise, want_sin, stream);
}

CosSinEstimate estimate_cos_sin(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2,
                                double theta_true, double t, const NoiseModel& noise,
                                bool want_sin, SampleStream& stream) {
  return Su2Probe(h0, h1, h2).estimate(theta_true, t, noise, want_sin, stream);
}

}  // namespace dqc1
