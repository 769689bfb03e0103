#include "dqc1/multiparam.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <utility>

#include <fmt/core.h>

#include "dqc1/errors.hpp"
#include "dqc1/sampling.hpp"

namespace dqc1 {
namespace {

// Calls visit(product) for every product of the given weight, positions in
// lexicographic order and letters cycling X, Y, Z. Stops when visit returns
// true or the budget runs out; returns whether visit succeeded.
template <typename Visit>
bool enumerate_weight(std::size_t n, std::size_t weight, std::uint64_t& budget, Visit&& visit) {
  static constexpr char kLetters[3] = {'X', 'Y', 'Z'};
  std::vector<std::size_t> pos(weight);
  for (std::size_t i = 0; i < weight; ++i) pos[i] = i;
  while (true) {
    std::vector<int> letter(weight, 0);
    while (true) {
      if (budget == 0) return false;
      --budget;
      std::string text(n, 'I');
      for (std::size_t i = 0; i < weight; ++i) text[pos[i]] = kLetters[letter[i]];
      if (visit(PauliProduct::parse(text))) return true;
      std::size_t k = weight;
      while (k > 0 && letter[k - 1] == 2) letter[--k] = 0;
      if (k == 0) break;
      ++letter[k - 1];
    }
    // Next combination of positions.
    std::size_t k = weight;
    while (k > 0 && pos[k - 1] == n - weight + k - 1) --k;
    if (k == 0) return false;
    ++pos[k - 1];
    for (std::size_t i = k; i < weight; ++i) pos[i] = pos[i - 1] + 1;
  }
}

void require_index(const MultiHamiltonian& h, std::size_t nu) {
  if (nu >= h.size()) {
    throw PreconditionError(fmt::format("parameter index {} out of range (P = {})", nu, h.size()));
  }
}

}  // namespace

std::size_t MultiHamiltonian::num_qubits() const {
  if (terms.empty()) throw PreconditionError("multi-parameter Hamiltonian has no terms");
  return terms.front().sigma.num_qubits();
}

PauliSum MultiHamiltonian::hamiltonian() const {
  std::vector<PauliTerm> t;
  for (const auto& term : terms) t.push_back({term.theta, term.sigma});
  return PauliSum(num_qubits(), std::move(t));
}

void MultiHamiltonian::validate() const {
  const std::size_t n = num_qubits();
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (const auto& t : terms) {
    if (t.sigma.num_qubits() != n) throw DimensionError("multi-parameter terms differ in qubit count");
    if (!t.sigma.is_phase_free()) {
      throw PreconditionError(fmt::format("term {} must be phase-free", t.sigma.to_string()));
    }
    if (t.sigma.is_identity()) throw PreconditionError("identity term carries no parameter");
    if (!seen.insert({t.sigma.x_mask(), t.sigma.z_mask()}).second) {
      throw PreconditionError(fmt::format("duplicate term {}", t.sigma.to_string()));
    }
  }
  if (!prior_means.empty() && prior_means.size() != terms.size()) {
    throw PreconditionError("prior means must be given for every parameter or none");
  }
}

PauliProduct select_decoupler(const MultiHamiltonian& h, std::size_t nu,
                              std::uint64_t search_budget) {
  h.validate();
  require_index(h, nu);
  const std::size_t n = h.num_qubits();
  const auto decouples = [&](const PauliProduct& s) {
    for (std::size_t k = 0; k < h.size(); ++k) {
      const bool anti = commutes(h.terms[k].sigma, s) == PauliRelation::anticommute;
      if ((k == nu) == anti) return false;
    }
    return true;
  };
  std::uint64_t budget = search_budget;
  if (decouples(PauliProduct(n))) return PauliProduct(n);
  std::optional<PauliProduct> found;
  for (std::size_t w = 1; w <= n && !found; ++w) {
    const bool ok = enumerate_weight(n, w, budget, [&](const PauliProduct& s) {
      if (!decouples(s)) return false;
      found = s;
      return true;
    });
    if (!ok && budget == 0) break;
  }
  if (found) return *found;
  std::string others;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (k == nu) continue;
    if (!others.empty()) others += ", ";
    others += h.terms[k].sigma.to_string();
  }
  throw PreconditionError(fmt::format(
      "no single-product decoupler for {} within {} candidates; it must commute with {} and "
      "anticommute with each of [{}]",
      h.terms[nu].sigma.to_string(), search_budget, h.terms[nu].sigma.to_string(), others));
}

PauliProduct probe_partner(const MultiHamiltonian& h, std::size_t nu) {
  h.validate();
  require_index(h, nu);
  const std::size_t n = h.num_qubits();
  const PauliProduct& target = h.terms[nu].sigma;
  std::uint64_t budget = std::uint64_t{1} << 22;
  std::optional<PauliProduct> found;
  for (std::size_t w = 1; w <= n && !found; ++w) {
    enumerate_weight(n, w, budget, [&](const PauliProduct& s) {
      if (commutes(target, s) != PauliRelation::anticommute) return false;
      found = s;
      return true;
    });
  }
  if (!found) throw PreconditionError("no anticommuting probe product found");
  return *found;
}

void TrotterPlan::validate() const {
  require_trotter_order(order);
  if (slices == 0) throw PreconditionError("trotter plan needs at least one slice");
  if (!decoupler.is_phase_free()) throw PreconditionError("decoupler must be phase-free");
  if (epsilon_target && !(*epsilon_target > 0.0)) {
    throw PreconditionError("trotter epsilon target must be positive");
  }
}

std::uint64_t minimal_slices(const TrotterOracle& oracle, double t, int order,
                             double epsilon_target, std::uint64_t max_slices) {
  const auto ok = [&](std::uint64_t q) { return 2.0 * oracle.error(t, q, order) <= epsilon_target; };
  std::uint64_t hi = 1;
  while (!ok(hi)) {
    if (hi >= max_slices) {
      throw ResourceLimitError(fmt::format(
          "more than {} slices needed for 2*error <= {} at T = {}", max_slices, epsilon_target, t));
    }
    hi = std::min(hi * 2, max_slices);
  }
  std::uint64_t lo = hi / 2;  // fails (or zero)
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

TrotterizedMean trotterized_measurement_mean(const MultiHamiltonian& h, std::size_t nu,
                                             const TrotterPlan& plan, const PauliProduct& sigma1,
                                             double t) {
  h.validate();
  require_index(h, nu);
  plan.validate();
  const TrotterOracle oracle(h.hamiltonian(), plan.decoupler);
  TrotterizedMean out;
  out.slices = plan.epsilon_target
                   ? minimal_slices(oracle, t, plan.order, *plan.epsilon_target, plan.max_slices)
                   : plan.slices;
  const DenseOperator approx = oracle.approximant(t, out.slices, plan.order);
  const DenseOperator s1 = to_matrix(sigma1);
  out.mean = heisenberg_trace(approx, s1, s1).normalized.real();
  out.gamma = out.mean - std::cos(2.0 * h.terms[nu].theta * t);
  out.epsilon = 2.0 * spectral_norm(oracle.exact(t) - approx);
  return out;
}

GammaPrior gamma_prior(double delta, double epsilon) {
  if (!(delta > 0.0)) throw PreconditionError("gamma prior needs delta > 0");
  if (!(epsilon >= 0.0)) throw PreconditionError("gamma prior needs epsilon >= 0");
  GammaPrior g;
  g.epsilon = epsilon;
  g.delta_gamma = delta * epsilon;
  g.inflated_delta = std::sqrt(delta * delta + g.delta_gamma * g.delta_gamma);
  return g;
}

GammaPrior gamma_prior(const TrotterOracle& oracle, const TrotterPlan& plan, double t,
                       double delta) {
  plan.validate();
  if (!(t > 0.0)) throw PreconditionError("gamma prior needs t > 0");
  const std::uint64_t q = plan.epsilon_target
                              ? minimal_slices(oracle, t, plan.order, *plan.epsilon_target,
                                               plan.max_slices)
                              : plan.slices;
  return gamma_prior(delta, 2.0 * oracle.error(t, q, plan.order));
}

// ---------------------------------------------------------------------------
// TrotterSignal

TrotterSignal::TrotterSignal(const MultiHamiltonian& h, std::size_t nu, TrotterPlan plan,
                             NoiseModel noise)
    : theta_(h.terms.at(nu).theta),
      plan_(std::move(plan)),
      noise_(noise),
      oracle_(h.hamiltonian(), plan_.decoupler) {
  h.validate();
  plan_.validate();
  noise_.validate();
  const PauliProduct& sigma_nu = h.terms[nu].sigma;
  if (commutes(sigma_nu, plan_.decoupler) != PauliRelation::commute) {
    throw PreconditionError("decoupler must commute with the estimated term");
  }
  const PauliProduct s1 = probe_partner(h, nu);
  PauliProduct s2 = sigma_nu * s1;
  s2 = s2.with_phase(s2.phase_exponent() + 3);
  sigma1_ = to_matrix(s1);
  sigma2_ = to_matrix(s2);
}

SignalSample TrotterSignal::measure(double t, bool sine, SampleStream& stream) const {
  const std::uint64_t q = plan_.epsilon_target
                              ? minimal_slices(oracle_, t, plan_.order, *plan_.epsilon_target,
                                               plan_.max_slices)
                              : plan_.slices;
  const DenseOperator approx = oracle_.approximant(t, q, plan_.order);
  const double epsilon = 2.0 * spectral_norm(oracle_.exact(t) - approx);
  double mean;
  double ideal;
  if (sine) {
    mean = -heisenberg_trace(approx, sigma1_, sigma2_).normalized.real();
    ideal = std::sin(2.0 * theta_ * t);
  } else {
    mean = heisenberg_trace(approx, sigma1_, sigma1_).normalized.real();
    ideal = std::cos(2.0 * theta_ * t);
  }
  const GammaPrior g = gamma_prior(noise_.effective_delta(), epsilon);
  SignalSample s;
  s.value = sample_trace_estimate(mean, noise_, stream);
  s.likelihood_delta = g.inflated_delta;
  s.bias = mean - ideal;
  s.slices = q;
  s.delta_gamma = g.delta_gamma;
  return s;
}

SignalSample TrotterSignal::cosine(double t, SampleStream& stream) const {
  return measure(t, false, stream);
}

SignalSample TrotterSignal::sine(double t, SampleStream& stream) const {
  return measure(t, true, stream);
}

TrotterPlan default_plan(const MultiHamiltonian& h, std::size_t nu, int order,
                         double epsilon_target) {
  TrotterPlan plan;
  plan.order = order;
  plan.decoupler = select_decoupler(h, nu);
  plan.epsilon_target = epsilon_target;
  plan.validate();
  return plan;
}

std::vector<RunRecord> estimate_all(const MultiHamiltonian& h, const std::vector<TrotterPlan>& plans,
                                    const ZoomPolicy& policy, const NoiseModel& noise,
                                    std::uint64_t trial) {
  h.validate();
  if (plans.size() != h.size()) {
    throw PreconditionError(fmt::format("{} plans given for {} parameters", plans.size(), h.size()));
  }
  std::vector<RunRecord> out;
  for (std::size_t nu = 0; nu < h.size(); ++nu) {
    const TrotterSignal signal(h, nu, plans[nu], noise);
    const StreamKey key{mix64(noise.seed ^ (0x5bd1e995ULL * (nu + 1))), trial, 0};
    double theta0;
    if (!h.prior_means.empty()) {
      theta0 = h.prior_means[nu];
    } else {
      SampleStream prior_stream(key);
      theta0 = draw_continuous_prior(h.terms[nu].theta, policy, prior_stream);
    }
    RunRecord rec = run_estimation(signal, theta0, policy, key);
    rec.nu = nu;
    rec.theta_true = h.terms[nu].theta;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace dqc1
