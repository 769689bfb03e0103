// Acceptance suite: runs the ten end-to-end criteria and prints one
// PASS/FAIL line per criterion. Exit status is non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "dqc1/blackbox_discrete.hpp"
#include "dqc1/campaign.hpp"
#include "dqc1/config.hpp"
#include "dqc1/dense.hpp"
#include "dqc1/dqc1_circuit.hpp"
#include "dqc1/frame_alignment.hpp"
#include "dqc1/measurement.hpp"
#include "dqc1/multiparam.hpp"
#include "dqc1/pauli.hpp"
#include "dqc1/report.hpp"
#include "dqc1/search_bound.hpp"
#include "oracle.hpp"

using namespace dqc1;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

const char* kLetters = "IXYZ";

std::string random_letters(std::mt19937_64& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(kLetters[rng() % 4]);
  return s;
}

std::string letters_of(std::uint64_t code, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(kLetters[(code >> (2 * (n - 1 - i))) & 3]);
  return s;
}

oracle::Matrix dense_sum(const std::vector<std::pair<double, std::string>>& terms) {
  oracle::Matrix m = oracle::Matrix::Zero(std::size_t{1} << terms.front().second.size(),
                                          std::size_t{1} << terms.front().second.size());
  for (const auto& [c, p] : terms) m += c * oracle::pauli(p);
  return m;
}

PauliSum symbolic_sum(const std::vector<std::pair<double, std::string>>& terms) {
  std::string text;
  for (const auto& [c, p] : terms) {
    const char* sep = text.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    text += fmt::format("{}{:.17g}*{}", sep, std::abs(c), p);
  }
  return PauliSum::parse(text);
}

// Dense check of [A,B] = 2iC cyclically.
bool dense_triple(const oracle::Matrix& a, const oracle::Matrix& b, const oracle::Matrix& c) {
  const std::complex<double> two_i(0.0, 2.0);
  const auto ok = [&](const oracle::Matrix& x, const oracle::Matrix& y, const oracle::Matrix& z) {
    return oracle::max_abs(x * y - y * x - two_i * z) < 1e-10;
  };
  return ok(a, b, c) && ok(b, c, a) && ok(c, a, b);
}

// Compares commutation, triple check and decoupling for one set of operands.
void compare_algebra(const std::string& a, const std::string& b, const std::string& c,
                     double c_sign, Outcome& out) {
  const oracle::Matrix ma = oracle::pauli(a);
  const oracle::Matrix mb = oracle::pauli(b);
  const bool dense_commute = oracle::max_abs(ma * mb - mb * ma) < 1e-10;
  const bool sym_commute = commutes(PauliProduct::parse(a), PauliProduct::parse(b)) ==
                           PauliRelation::commute;
  out.require(dense_commute == sym_commute, "commutation " + a + " " + b);

  const PauliSum sa = PauliSum::parse(a);
  const PauliSum sb = PauliSum::parse(b);
  const PauliSum sc = PauliSum::single(PauliProduct::parse(c), c_sign);
  out.require(check_su2_triple(sa, sb, sc) == dense_triple(ma, mb, c_sign * oracle::pauli(c)),
              "triple " + a + " " + b + " " + c);
}

void compare_decoupling(const std::vector<std::pair<double, std::string>>& h,
                        const std::string& sigma, Outcome& out) {
  const oracle::Matrix mh = dense_sum(h);
  const oracle::Matrix ms = oracle::pauli(sigma);
  const PauliSum dec = decouple_hamiltonian(symbolic_sum(h), PauliProduct::parse(sigma));
  const oracle::Matrix dense = 0.5 * (mh + ms * mh * ms);
  oracle::Matrix sym = oracle::Matrix::Zero(mh.rows(), mh.cols());
  for (const auto& t : dec.terms()) sym += t.coefficient * oracle::pauli(t.product.to_string());
  out.require(oracle::max_abs(sym - dense) < 1e-10, "decoupling by " + sigma);
}

Outcome criterion_algebra() {
  Outcome out;
  // Exhaustive for n <= 2: every pair for commutation and decoupling,
  // every ordered triple of products for the su(2) check.
  for (std::size_t n = 1; n <= 2; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (2 * n);
    for (std::uint64_t i = 0; i < count; ++i) {
      for (std::uint64_t j = 0; j < count; ++j) {
        compare_decoupling({{0.7, letters_of(i, n)}}, letters_of(j, n), out);
        for (std::uint64_t k = 0; k < count; ++k) {
          compare_algebra(letters_of(i, n), letters_of(j, n), letters_of(k, n), 1.0, out);
        }
      }
    }
  }
  // 1000 random cases each for n = 3 and 4; half of the triples are built
  // to close so both answers are exercised.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (std::size_t n = 3; n <= 4; ++n) {
    int closed = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::string a = random_letters(rng, n);
      const std::string b = random_letters(rng, n);
      std::string c = random_letters(rng, n);
      double c_sign = 1.0;
      const PauliProduct pa = PauliProduct::parse(a);
      const PauliProduct pb = PauliProduct::parse(b);
      if (trial % 2 == 0 && commutes(pa, pb) == PauliRelation::anticommute) {
        // C = -i·A·B closes the triple whenever A and B anticommute.
        const PauliProduct pc = (pa * pb).with_phase(((pa * pb).phase_exponent() + 3) % 4);
        c = pc.without_phase().to_string();
        c_sign = pc.phase_exponent() == 2 ? -1.0 : 1.0;
        out.require(check_su2_triple(PauliSum::parse(a), PauliSum::parse(b),
                                     PauliSum::single(pc.without_phase(), c_sign)),
                    "constructed triple does not close");
        ++closed;
      }
      compare_algebra(a, b, c, c_sign, out);
      std::vector<std::pair<double, std::string>> h;
      for (int k = 0; k < 4; ++k) h.push_back({coeff(rng), random_letters(rng, n)});
      compare_decoupling(h, random_letters(rng, n), out);
    }
    out.require(closed > 100, "too few closed triples sampled");
  }
  if (out.pass) out.detail = "exhaustive n <= 2, 1000 random cases each for n = 3, 4";
  return out;
}

Outcome criterion_trace_identities() {
  Outcome out;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> theta_dist(0.05, 3.0);
  std::uniform_real_distribution<double> time_dist(0.1, 5.0);
  const char* cycles[] = {"XYZ", "YZX", "ZXY"};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const std::string map = cycles[rng() % 3];
    const auto on = [&](std::size_t j, char pauli) {
      std::string s(n, 'I');
      s[j] = map[pauli == 'X' ? 0 : pauli == 'Y' ? 1 : 2];
      return s;
    };
    std::vector<std::pair<double, std::string>> h0, h1, h2;
    for (std::size_t j = 0; j < n; ++j) {
      h0.push_back({1.0, on(j, 'Z')});
      h1.push_back({1.0, on(j, 'X')});
      h2.push_back({1.0, on(j, 'Y')});
    }
    const double theta = theta_dist(rng);
    const double t = time_dist(rng);
    const oracle::Matrix w = oracle::expm_minus_i(dense_sum(h0), theta * t);
    const oracle::Matrix m1 = dense_sum(h1);
    const oracle::Matrix m2 = dense_sum(h2);
    const double d = (m1 * m1).trace().real();
    const double expected_cos = std::cos(2 * theta * t);
    const double expected_sin = std::sin(2 * theta * t);

    // Dense L² path through heisenberg_trace.
    const double cos_l2 = heisenberg_trace(w, m1, m1).value.real() / d;
    const double sin_l2 = -heisenberg_trace(w, m1, m2).value.real() / d;
    out.require(std::abs(cos_l2 - expected_cos) < 1e-9, fmt::format("L2 cos, trial {}", trial));
    out.require(std::abs(sin_l2 - expected_sin) < 1e-9, fmt::format("L2 sin, trial {}", trial));

    // Shortcut: a single σ1 on a random qubit.
    const std::size_t k = rng() % n;
    const oracle::Matrix s1 = oracle::pauli(on(k, 'X'));
    const oracle::Matrix s2 = oracle::pauli(on(k, 'Y'));
    const double cos_sc = heisenberg_trace(w, s1, s1).normalized.real();
    const double sin_sc = -heisenberg_trace(w, s1, s2).normalized.real();
    out.require(std::abs(cos_sc - cos_l2) < 1e-9, fmt::format("shortcut cos, trial {}", trial));
    out.require(std::abs(sin_sc - sin_l2) < 1e-9, fmt::format("shortcut sin, trial {}", trial));

    // The probe's own recipes on both paths.
    const Su2Probe l2(symbolic_sum(h0), symbolic_sum(h1), symbolic_sum(h2));
    const Su2Probe shortcut(symbolic_sum(h0), PauliSum::parse(on(k, 'X')),
                            PauliSum::parse(on(k, 'Y')));
    out.require(l2.path() == (n == 1 ? ProbePath::shortcut : ProbePath::l2_sum), "probe path");
    out.require(shortcut.path() == ProbePath::shortcut, "shortcut path");
    for (const Su2Probe* p : {&l2, &shortcut}) {
      out.require(std::abs(p->exact_cos(w) - expected_cos) < 1e-9, "probe cos");
      out.require(std::abs(p->exact_sin(w) - expected_sin) < 1e-9, "probe sin");
    }
  }
  if (out.pass) out.detail = "100 instances, L2 and shortcut paths agree";
  return out;
}

Outcome criterion_intro_signal() {
  Outcome out;
  for (std::size_t n = 1; n <= 8; ++n) {
    std::vector<std::pair<double, std::string>> h;
    for (std::size_t j = 0; j < n; ++j) {
      std::string s(n, 'I');
      s[j] = 'Z';
      h.push_back({1.0, s});
    }
    const PauliSum sum = symbolic_sum(h);
    for (double theta_t : {0.3, 1.1, 2.5}) {
      const double mean = dqc1_mean(evolve(sum, theta_t)).mean_x;
      out.require(std::abs(mean - std::pow(std::cos(theta_t), n)) < 1e-9,
                  fmt::format("n = {}, θT = {}", n, theta_t));
    }
  }
  if (out.pass) out.detail = "n = 1..8";
  return out;
}

ExperimentConfig base_config(Mode mode, const char* h0, const char* h1, const char* h2,
                             double theta, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.seed = seed;
  cfg.h0_text = h0;
  cfg.h1_text = h1;
  cfg.h2_text = h2;
  cfg.theta = {theta};
  cfg.noise.delta = 1e-3;
  cfg.c = 10.0;
  cfg.c_prime = 10.0;
  cfg.b = 8;
  cfg.max_steps = 200;
  return cfg;
}

std::vector<double> log_grid(double hi, double lo, int per_decade) {
  std::vector<double> out;
  const int steps = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= steps; ++i) out.push_back(hi * std::pow(10.0, -static_cast<double>(i) / per_decade));
  return out;
}

void require_slope(const CampaignResult& r, double lo, double hi, Outcome& out,
                   const std::string& what) {
  if (!r.summary.scaling) {
    out.require(false, what + ": no fit (" + r.summary.scaling_error + ")");
    return;
  }
  const double s = r.summary.scaling->slope;
  out.detail += fmt::format("{}slope {:.3f}", out.detail.empty() ? "" : ", ", s);
  out.require(s >= lo && s <= hi, fmt::format("{} slope {:.4f} outside [{}, {}]", what, s, lo, hi));
}

Outcome criterion_continuous_scaling() {
  Outcome out;
  ExperimentConfig cfg = base_config(Mode::estimate_continuous, "Z", "X", "Y", 0.7, 41);
  cfg.trials = 200;
  cfg.target_precision = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  const CampaignResult r = run_campaign(cfg);
  const double bound = (cfg.c_prime - 4) / (cfg.c_prime - 5);
  std::size_t violations = 0;
  for (const auto& run : r.runs) {
    if (run.converged && !(run.total_time < bound * run.final_time)) ++violations;
  }
  out.require(r.summary.nonconverged_fraction <= 0.05, "too many non-converged runs");
  require_slope(r, 0.9, 1.1, out, "continuous");
  out.require(violations == 0, fmt::format("{} runs violate the total-time bound", violations));
  out.detail += fmt::format(", converged {}/{}", r.summary.converged, r.summary.rows);
  return out;
}

Outcome criterion_calibration() {
  Outcome out;
  ExperimentConfig cont = base_config(Mode::estimate_continuous, "Z", "X", "Y", 0.7, 51);
  cont.trials = 1000;
  cont.target_precision = {1e-6};
  const CampaignResult a = run_campaign(cont);

  ExperimentConfig disc = base_config(Mode::estimate_discrete, "Z", "X", "Y", 0.2, 53);
  disc.trials = 1000;
  disc.target_precision = {1e-6};
  disc.max_steps = 64;
  const CampaignResult b = run_campaign(disc);

  out.detail = fmt::format("continuous {:.3f} ({} converged), discrete {:.3f} ({} converged)",
                           a.summary.coverage, a.summary.converged, b.summary.coverage,
                           b.summary.converged);
  out.require(a.summary.coverage >= 0.90 && a.summary.converged >= 950, "continuous coverage");
  out.require(b.summary.coverage >= 0.90 && b.summary.converged >= 950, "discrete coverage");
  return out;
}

Outcome criterion_discrete_resources() {
  Outcome out;
  ExperimentConfig cfg = base_config(Mode::estimate_discrete, "\"ZI\" + \"IZ\"", "\"XI\" + \"IX\"",
                                     "\"YI\" + \"IY\"", 0.7, 61);
  cfg.trials = 60;
  cfg.max_steps = 64;
  cfg.target_precision = log_grid(1e-4, 1e-8, 4);
  const CampaignResult r = run_campaign(cfg);
  std::size_t mismatches = 0;
  for (const auto& run : r.runs) {
    if (!run.converged) continue;
    if (run.total_calls != geometric_calls(cfg.b, run.steps.size())) ++mismatches;
  }
  out.require(r.summary.nonconverged_fraction <= 0.05, "too many non-converged runs");
  out.require(mismatches == 0, fmt::format("{} runs off the geometric call count", mismatches));
  require_slope(r, 0.9, 1.1, out, "discrete");
  return out;
}

std::vector<std::size_t> indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

Outcome criterion_trotter() {
  Outcome out;
  // 100-instance corpus of random Hamiltonians, terms, orders and slices.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> theta(0.1, 1.0);
  std::uniform_real_distribution<double> time(0.1, 10.0);
  int instances = 0;
  double worst = 0.0;
  while (instances < 100) {
    const std::size_t n = 2 + rng() % 2;
    const std::size_t p = 2 + rng() % 2;
    MultiHamiltonian h;
    for (std::size_t k = 0; k < p; ++k) {
      std::string s = random_letters(rng, n);
      if (s == std::string(n, 'I')) s[0] = 'Z';
      h.terms.push_back({theta(rng), PauliProduct::parse(s)});
    }
    try {
      h.validate();
      const std::size_t nu = rng() % p;
      TrotterPlan plan;
      plan.order = 2 + static_cast<int>(rng() % 2);
      plan.slices = 1 + rng() % 20;
      plan.decoupler = select_decoupler(h, nu);
      const TrotterizedMean m =
          trotterized_measurement_mean(h, nu, plan, probe_partner(h, nu), time(rng));
      worst = std::max(worst, std::abs(m.gamma) - m.epsilon);
      out.require(std::abs(m.gamma) <= m.epsilon + 1e-12, "|gamma| > epsilon");
      ++instances;
    } catch (const Error&) {
      // No decoupler for this draw; sample another.
    }
  }

  MultiHamiltonian h;
  h.terms = {{0.3, PauliProduct::parse("ZI")}, {0.7, PauliProduct::parse("XX")},
             {0.5, PauliProduct::parse("XI")}};
  std::string ratios;
  std::string slopes;
  for (int order : {2, 3}) {
    const double expected_ratio = std::pow(2.0, order - 1);
    const double expected_slope = static_cast<double>(order) / (order - 1);
    for (std::size_t nu : indices(h.size())) {
      const TrotterOracle o(h.hamiltonian(), select_decoupler(h, nu));
      // Halving the slice length.
      const double ratio = o.error(1.0, 64, order) / o.error(1.0, 128, order);
      ratios += fmt::format(" {:.3f}", ratio);
      out.require(std::abs(ratio / expected_ratio - 1) <= 0.25,
                  fmt::format("halving ratio {:.3f} for p = {}, ν = {}", ratio, order, nu));
      // Slices needed at fixed ε as the evolution time grows.
      const double eps = order == 2 ? 1e-4 : 1e-6;
      std::vector<double> x;
      std::vector<double> y;
      for (int i = 0; i < 200; ++i) {
        const double t = 0.25 * std::pow(4.0, i / 199.0);
        x.push_back(std::log(t));
        y.push_back(std::log(static_cast<double>(minimal_slices(o, t, order, eps, 1u << 26))));
      }
      const double slope = fit_with_bootstrap(x, y, 1, 200).slope;
      slopes += fmt::format(" {:.3f}", slope);
      out.require(std::abs(slope / expected_slope - 1) <= 0.15,
                  fmt::format("slice slope {:.3f} for p = {}, ν = {}", slope, order, nu));
    }
  }
  if (out.pass) {
    out.detail = fmt::format("max(|γ|-ε) {:.2e}; halving ratios{}; slice slopes{}", worst, ratios,
                             slopes);
  }
  return out;
}

FrameMisalignment frame(MisalignmentKind kind, double theta, const std::string& h0,
                        const std::string& h1, const std::string& h2, double phi = 0.0,
                        double psi = 0.0) {
  FrameMisalignment m;
  m.kind = kind;
  m.theta = theta;
  m.phi = phi;
  m.psi = psi;
  m.h0 = PauliSum::parse(h0);
  m.h1 = PauliSum::parse(h1);
  m.h2 = PauliSum::parse(h2);
  return m;
}

// Σ_j P_j on n qubits.
std::string collective(std::size_t n, char pauli) {
  std::string text;
  for (std::size_t j = 0; j < n; ++j) {
    std::string s(n, 'I');
    s[j] = pauli;
    text += (j ? " + " : "") + s;
  }
  return text;
}

Outcome criterion_frame() {
  Outcome out;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (double theta : {0.0, 0.15, 0.4, 1.3}) {
      const auto uni = frame(MisalignmentKind::uniparametric, theta, collective(n, 'Z'),
                             collective(n, 'X'), collective(n, 'Y'));
      const oracle::Matrix expected =
          oracle::expm_minus_i(to_matrix(uni.h0), 2 * theta);
      out.require(oracle::max_abs(elementary_step(uni) - expected) < 1e-9,
                  fmt::format("elementary step n = {}", n));

      // Reduced probe state after full alignment circuits.
      const PauliProduct s1 = PauliProduct::parse(std::string("X") + std::string(n - 1, 'I'));
      for (std::uint64_t m : {0u, 1u, 3u}) {
        const CircuitOutcome c = simulate(alignment_circuit(uni, m, 0.2, s1, s1));
        const Eigen::Index d = Eigen::Index{1} << n;
        out.require(oracle::max_abs(c.probe_state - oracle::Matrix::Identity(d, d) / double(d)) <
                        1e-10,
                    fmt::format("probe state n = {}, m = {}", n, m));
      }
    }
  }
  // Appendix-style shortcut triple at n = 3.
  const auto three = frame(MisalignmentKind::uniparametric, 0.4, "ZZZ", "XZZ", "YII");
  out.require(oracle::max_abs(elementary_step(three) -
                              oracle::expm_minus_i(oracle::pauli("ZZZ"), 0.8)) < 1e-9,
              "elementary step, shortcut triple");

  // Euler traces: d·cos(2mθ), independent of φ and ψ.
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<double> reference;
    for (double phi : {0.0, 0.7, 2.1}) {
      for (double psi : {0.0, 1.1, -0.5}) {
        const auto mis = frame(MisalignmentKind::euler, 0.3, collective(n, 'Z'), collective(n, 'X'),
                               collective(n, 'Y'), phi, psi);
        const DenseOperator v = euler_step(mis);
        const DenseOperator h2 = to_matrix(mis.h2);
        const double d = (h2 * h2).trace().real();
        DenseOperator vm = DenseOperator::Identity(v.rows(), v.cols());
        std::vector<double> traces;
        for (int m = 1; m <= 32; ++m) {
          vm = v * vm;
          traces.push_back((vm.adjoint() * h2 * vm * h2).trace().real());
          out.require(std::abs(traces.back() - d * std::cos(2 * m * 0.3)) < 1e-9,
                      fmt::format("euler trace n = {}, m = {}", n, m));
        }
        if (reference.empty()) reference = traces;
        for (std::size_t i = 0; i < traces.size(); ++i) {
          out.require(std::abs(traces[i] - reference[i]) < 1e-9, "euler traces depend on angles");
        }
      }
    }
  }

  // QML scaling of the exchange count for both protocols.
  ExperimentConfig uni = base_config(Mode::frame_align, "\"ZI\" + \"IZ\"", "\"XI\" + \"IX\"",
                                     "\"YI\" + \"IY\"", 0.3, 71);
  uni.trials = 60;
  uni.max_steps = 64;
  uni.target_precision = log_grid(1e-4, 1e-7, 4);
  uni.frame_kind = MisalignmentKind::uniparametric;
  const CampaignResult ru = run_campaign(uni);
  out.require(ru.summary.nonconverged_fraction <= 0.05, "uniparametric runs did not converge");
  require_slope(ru, 0.9, 1.1, out, "uniparametric");

  ExperimentConfig eul = uni;
  eul.seed = 73;
  eul.theta = {0.4};
  eul.frame_kind = MisalignmentKind::euler;
  eul.phi = 0.3;
  eul.psi = 1.1;
  const CampaignResult re = run_campaign(eul);
  out.require(re.summary.nonconverged_fraction <= 0.05, "euler runs did not converge");
  require_slope(re, 0.9, 1.1, out, "euler");
  return out;
}

Outcome criterion_search() {
  Outcome out;
  std::size_t instances = 0;
  double worst_ratio = 0.0;
  for (std::size_t n = 2; n <= 8; ++n) {
    const std::vector<std::size_t> qs = n <= 7 ? std::vector<std::size_t>{1, 2}
                                               : std::vector<std::size_t>{1};
    for (std::size_t q : qs) {
      for (std::uint64_t i = 0; i < 100; ++i) {
        SearchInstance inst;
        inst.n = n;
        inst.q_calls = q;
        inst.theta = M_PI;
        inst.interleave = InterleaveKind::haar;
        inst.seed = mix64(0xacce55 ^ (n << 32) ^ (q << 8)) + i;
        inst.s_index = mix64(inst.seed) % (std::uint64_t{1} << n);
        const double sep = signal_separation(inst);
        const double bound = separation_bound(n, q);
        worst_ratio = std::max(worst_ratio, sep / bound);
        out.require(sep <= bound, fmt::format("Haar n = {}, Q = {}, instance {}", n, q, i));
        ++instances;
      }
    }
    // Structured interleave that saturates the bound at θ = π/2.
    for (std::size_t q = 1; q <= 4; ++q) {
      SearchInstance inst;
      inst.n = n;
      inst.q_calls = q;
      inst.theta = M_PI / 2;
      inst.interleave = InterleaveKind::offset_shift;
      const double sep = signal_separation(inst);
      out.require(sep <= separation_bound(n, q) + 1e-12, "offset_shift exceeds the bound");
      ++instances;
    }
  }

  const NoiseModel noise{0.5, 1, 0};
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t n = 4; n <= 8; ++n) {
    const SweepPoint p = optimal_detection(n, M_PI / 2, InterleaveKind::offset_shift, noise);
    x.push_back(static_cast<double>(n));
    y.push_back(std::log2(static_cast<double>(p.n_total)));
  }
  const double slope = fit_with_bootstrap(x, y, 1, 200).slope;
  out.require(std::abs(slope - 1.0) <= 0.15, fmt::format("sweep slope {:.3f}", slope));
  if (out.pass) {
    out.detail = fmt::format("{} instances, max separation/bound {:.3f}, log2 N slope {:.3f}",
                             instances, worst_ratio, slope);
  }
  return out;
}

std::string render_csvs(const CampaignResult& r) {
  std::ostringstream s;
  write_trials_csv(s, r.config_hash, r.runs);
  write_steps_csv(s, r.config_hash, r.runs);
  write_trace_csv(s, r.config_hash, r.trace);
  write_search_csv(s, r.config_hash, r.search);
  write_sweep_csv(s, r.config_hash, r.sweep);
  return s.str();
}

Outcome criterion_determinism() {
  Outcome out;
  std::vector<ExperimentConfig> configs;
  ExperimentConfig cont = base_config(Mode::estimate_continuous, "Z", "X", "Y", 0.7, 91);
  cont.trials = 20;
  cont.target_precision = {1e-4, 1e-6};
  configs.push_back(cont);

  ExperimentConfig disc = base_config(Mode::estimate_discrete, "Z", "X", "Y", 0.2, 92);
  disc.trials = 20;
  disc.target_precision = {1e-5, 1e-7};
  configs.push_back(disc);

  ExperimentConfig multi = base_config(Mode::multiparam, "Z", "X", "Y", 0.3, 93);
  multi.terms = {"ZI", "XX", "XI"};
  multi.theta = {0.3, 0.7, 0.5};
  multi.trials = 4;
  multi.target_precision = {1e-4};
  configs.push_back(multi);

  ExperimentConfig trace = base_config(Mode::trace, "\"ZI\" + \"IZ\"", "\"XI\" + \"IX\"",
                                       "\"YI\" + \"IY\"", 0.4, 94);
  trace.trials = 10;
  trace.times = {0.5, 1.0, 2.0};
  configs.push_back(trace);

  ExperimentConfig search = base_config(Mode::search_bound, "Z", "X", "Y", 0.7, 95);
  search.n_min = 3;
  search.n_max = 5;
  search.instances = 5;
  configs.push_back(search);

  for (const auto& cfg : configs) {
    const std::string one = render_csvs(run_campaign(cfg, 1));
    const std::string again = render_csvs(run_campaign(cfg, 1));
    const std::string two = render_csvs(run_campaign(cfg, 2));
    const std::string four = render_csvs(run_campaign(cfg, 4));
    out.require(one == again, mode_name(cfg.mode) + ": repeated run differs");
    out.require(one == two && one == four, mode_name(cfg.mode) + ": thread count changes output");
  }
  if (out.pass) out.detail = fmt::format("{} campaigns, threads 1/2/4", configs.size());
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "algebra matches dense matrices", criterion_algebra},
      {2, "trace identities", criterion_trace_identities},
      {3, "collective field signal", criterion_intro_signal},
      {4, "continuous QML scaling", criterion_continuous_scaling},
      {5, "credible interval calibration", criterion_calibration},
      {6, "discrete black-box resources", criterion_discrete_resources},
      {7, "product-formula bias and slices", criterion_trotter},
      {8, "frame alignment", criterion_frame},
      {9, "search separation bound", criterion_search},
      {10, "determinism across threads", criterion_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s) [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
