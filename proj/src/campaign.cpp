#include "dqc1/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <fmt/core.h>

#include "dqc1/bayes_continuous.hpp"
#include "dqc1/blackbox_discrete.hpp"
#include "dqc1/dense.hpp"
#include "dqc1/frame_alignment.hpp"
#include "dqc1/multiparam.hpp"
#include "dqc1/sampling.hpp"

namespace dqc1 {
namespace {

// Runs body(0..count-1) on a pool; each index writes only its own slot.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

RunRecord failed_record(std::uint64_t trial, double target, const std::exception& e) {
  RunRecord r;
  r.trial = trial;
  r.target_precision = target;
  r.error = e.what();
  return r;
}

MultiHamiltonian multi_hamiltonian(const ExperimentConfig& cfg) {
  MultiHamiltonian h;
  for (std::size_t i = 0; i < cfg.terms.size(); ++i) {
    h.terms.push_back({cfg.theta[i], PauliProduct::parse(cfg.terms[i])});
  }
  return h;
}

std::vector<RunRecord> estimator_job(const ExperimentConfig& cfg, double target,
                                     std::uint64_t trial) {
  NoiseModel noise = cfg.noise;
  noise.seed = cfg.seed;
  switch (cfg.mode) {
    case Mode::estimate_continuous:
      return {run_estimation(parse_quoted_sum(cfg.h0_text), parse_quoted_sum(cfg.h1_text),
                             parse_quoted_sum(cfg.h2_text), cfg.theta.front(),
                             cfg.zoom_policy(target), noise, trial)};
    case Mode::estimate_discrete:
      return {run_discrete(parse_quoted_sum(cfg.h0_text), parse_quoted_sum(cfg.h1_text),
                           parse_quoted_sum(cfg.h2_text), cfg.theta.front(),
                           cfg.blackbox_policy(target), noise, trial)};
    case Mode::frame_align:
      return {align(cfg.misalignment(), cfg.blackbox_policy(target), noise, trial)};
    case Mode::multiparam: {
      const MultiHamiltonian h = multi_hamiltonian(cfg);
      std::vector<TrotterPlan> plans;
      for (std::size_t nu = 0; nu < h.size(); ++nu) {
        plans.push_back(default_plan(h, nu, cfg.trotter_order,
                                     cfg.epsilon_ratio * noise.effective_delta()));
      }
      return estimate_all(h, plans, cfg.zoom_policy(target), noise, trial);
    }
    default:
      throw PreconditionError("estimator_job called for a non-estimator mode");
  }
}

void run_estimators(const ExperimentConfig& cfg, std::size_t threads, CampaignResult& out) {
  const std::size_t per_target = cfg.trials;
  const std::size_t jobs = per_target * cfg.target_precision.size();
  std::vector<std::vector<RunRecord>> slots(jobs);
  parallel_for(jobs, threads, [&](std::size_t j) {
    const double target = cfg.target_precision[j / per_target];
    const std::uint64_t trial = j;
    try {
      slots[j] = estimator_job(cfg, target, trial);
    } catch (const std::exception& e) {
      slots[j] = {failed_record(trial, target, e)};
    }
    for (auto& r : slots[j]) {
      r.trial = trial;
      r.target_precision = target;
    }
  });
  for (auto& s : slots) {
    for (auto& r : s) out.runs.push_back(std::move(r));
  }
}

void run_trace(const ExperimentConfig& cfg, std::size_t threads, CampaignResult& out) {
  const Su2Probe probe(parse_quoted_sum(cfg.h0_text), parse_quoted_sum(cfg.h1_text),
                       parse_quoted_sum(cfg.h2_text));
  NoiseModel noise = cfg.noise;
  noise.seed = cfg.seed;
  const std::size_t per_trial = cfg.times.size();
  const std::size_t jobs = cfg.trials * per_trial;
  std::vector<TraceRow> rows(jobs);
  parallel_for(jobs, threads, [&](std::size_t j) {
    const std::uint64_t trial = j / per_trial;
    const double t = cfg.times[j % per_trial];
    const double theta = cfg.theta.front();
    SampleStream stream(StreamKey{cfg.seed, trial, j % per_trial});
    const DenseOperator w = evolve(probe.h0(), theta * t);
    const CosSinEstimate e = probe.estimate_for(w, noise, true, stream);
    rows[j] = {trial, theta, t, probe.exact_cos(w), e.cos_hat, probe.exact_sin(w),
               e.sin_hat.value_or(0.0)};
  });
  out.trace = std::move(rows);
}

void run_search(const ExperimentConfig& cfg, std::size_t threads, CampaignResult& out) {
  struct Job {
    std::size_t n;
    std::size_t q;
    std::uint64_t instance;
  };
  std::vector<Job> jobs;
  const std::uint64_t instances = cfg.interleave == InterleaveKind::haar ? cfg.instances : 1;
  for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (auto q : cfg.q_calls) {
      for (std::uint64_t i = 0; i < instances; ++i) jobs.push_back({n, q, i});
    }
  }
  std::vector<SearchRow> rows(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    SearchInstance inst;
    inst.n = job.n;
    inst.q_calls = job.q;
    inst.theta = cfg.search_theta;
    inst.interleave = cfg.interleave;
    inst.seed = mix64(cfg.seed ^ (job.n << 32) ^ (job.q << 8)) + job.instance;
    SampleStream pick(StreamKey{cfg.seed, j, 0x5e});
    inst.s_index = pick.next_u64() % (std::uint64_t{1} << job.n);
    rows[j] = {job.n, job.q, job.instance, signal_separation(inst), separation_bound(job.n, job.q)};
  });
  out.search = std::move(rows);

  NoiseModel noise = cfg.noise;
  noise.seed = cfg.seed;
  std::vector<SweepPoint> sweep(cfg.n_max - cfg.n_min + 1);
  parallel_for(sweep.size(), threads, [&](std::size_t i) {
    sweep[i] = optimal_detection(cfg.n_min + i, cfg.search_theta, cfg.sweep_interleave, noise);
  });
  out.sweep = std::move(sweep);
}

Resource resource_for(Mode mode) {
  return mode == Mode::estimate_discrete || mode == Mode::frame_align ? Resource::total_calls
                                                                      : Resource::total_time;
}

CampaignSummary summarize(const CampaignResult& r) {
  const ExperimentConfig& cfg = r.config;
  CampaignSummary s;
  s.mode = mode_name(cfg.mode);
  if (cfg.mode == Mode::search_bound) {
    s.rows = r.search.size();
    for (const auto& row : r.search) {
      if (row.separation > row.bound + 1e-12) ++s.bound_violations;
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& p : r.sweep) {
      x.push_back(static_cast<double>(p.n));
      y.push_back(std::log2(static_cast<double>(p.n_total)));
      s.total_calls += p.n_total;
    }
    try {
      s.scaling = fit_with_bootstrap(x, y, cfg.seed);
    } catch (const Error& e) {
      s.scaling_error = e.what();
    }
    return s;
  }
  if (cfg.mode == Mode::trace) {
    s.rows = r.trace.size();
    return s;
  }
  s.rows = r.runs.size();
  std::size_t covered = 0;
  for (const auto& run : r.runs) {
    if (!run.error.empty()) ++s.failed;
    if (run.converged) {
      ++s.converged;
      if (run.covers()) ++covered;
    }
    s.total_time += run.total_time;
    s.total_calls += run.total_calls;
    s.total_slices += run.total_slices;
  }
  if (s.rows > 0) {
    s.nonconverged_fraction = static_cast<double>(s.rows - s.converged) / static_cast<double>(s.rows);
  }
  if (s.converged > 0) s.coverage = static_cast<double>(covered) / static_cast<double>(s.converged);
  try {
    s.scaling = scaling_report(r.runs, resource_for(cfg.mode), cfg.seed);
  } catch (const Error& e) {
    s.scaling_error = e.what();
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(fmt::format("cannot write '{}'", path.string()));
  f << body;
}

template <typename Writer, typename Rows>
std::string render(Writer writer, const std::string& hash, const Rows& rows) {
  std::ostringstream s;
  writer(s, hash, rows);
  return s.str();
}

}  // namespace

CampaignResult run_campaign(const ExperimentConfig& cfg, std::size_t threads) {
  validate_config(cfg);
  CampaignResult out;
  out.config = cfg;
  out.config_hash = sha256_hex(cfg.canonical());
  switch (cfg.mode) {
    case Mode::trace:
      run_trace(cfg, threads, out);
      break;
    case Mode::search_bound:
      run_search(cfg, threads, out);
      break;
    default:
      run_estimators(cfg, threads, out);
      break;
  }
  out.summary = summarize(out);
  return out;
}

OutputFiles write_outputs(const CampaignResult& r, const std::string& out_dir, bool svg) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  OutputFiles files;
  const auto emit = [&](const std::string& name, const std::string& body) {
    write_file(dir / name, body);
    files.written.push_back(name);
  };
  std::vector<double> x;
  std::vector<double> y;
  std::string x_label;
  std::string y_label;
  switch (r.config.mode) {
    case Mode::trace:
      emit("trace.csv", render(write_trace_csv, r.config_hash, r.trace));
      break;
    case Mode::search_bound:
      emit("search.csv", render(write_search_csv, r.config_hash, r.search));
      emit("sweep.csv", render(write_sweep_csv, r.config_hash, r.sweep));
      for (const auto& p : r.sweep) {
        x.push_back(static_cast<double>(p.n));
        y.push_back(std::log2(static_cast<double>(p.n_total)));
      }
      x_label = "n";
      y_label = "log2 N_total";
      break;
    default: {
      emit("trials.csv", render(write_trials_csv, r.config_hash, r.runs));
      emit("steps.csv", render(write_steps_csv, r.config_hash, r.runs));
      const bool calls = resource_for(r.config.mode) == Resource::total_calls;
      for (const auto& run : r.runs) {
        if (!run.converged) continue;
        const double v = calls ? static_cast<double>(run.total_calls) : run.total_time;
        if (!(v > 0.0)) continue;
        x.push_back(std::log(1.0 / run.target_precision));
        y.push_back(std::log(v));
      }
      x_label = "ln(1/target precision)";
      y_label = calls ? "ln(total calls)" : "ln(total time)";
      break;
    }
  }
  emit("summary.json", summary_json(r.summary, r.config_hash));
  if (svg) {
    try {
      if (x.empty()) throw Error("nothing to plot for this mode");
      emit("scaling.svg", scaling_svg(x, y, r.summary.scaling, x_label, y_label));
    } catch (const std::exception& e) {
      files.svg_error = e.what();
    }
  }
  return files;
}

}  // namespace dqc1
