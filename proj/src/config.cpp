#include "dqc1/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "dqc1/multiparam.hpp"

namespace dqc1 {
namespace {

namespace pt = boost::property_tree;

constexpr double kPi = std::numbers::pi;

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string unquote(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), '"'), s.end());
  return trim(s);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = unquote(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Collects malformed-value problems instead of stopping at the first one.
class Reader {
 public:
  Reader(const pt::ptree& tree, std::vector<std::string>& problems)
      : tree_(tree), problems_(problems) {}

  template <typename T>
  void number(const std::string& key, T& out) {
    const auto raw = raw_value(key);
    if (!raw) return;
    T value{};
    if (!parse_number(*raw, value)) {
      problems_.push_back(fmt::format("{}: '{}' is not a valid number", key, *raw));
      return;
    }
    out = value;
  }

  template <typename T>
  void number_list(const std::string& key, std::vector<T>& out) {
    const auto raw = raw_value(key);
    if (!raw) return;
    std::vector<T> values;
    for (const auto& item : split_list(*raw)) {
      T value{};
      if (!parse_number(item, value)) {
        problems_.push_back(fmt::format("{}: '{}' is not a valid number", key, item));
        return;
      }
      values.push_back(value);
    }
    out = std::move(values);
  }

  void text(const std::string& key, std::string& out) {
    if (const auto raw = raw_value(key)) out = *raw;
  }

  void flag(const std::string& key, bool& out) {
    const auto raw = raw_value(key);
    if (!raw) return;
    if (*raw == "true" || *raw == "1" || *raw == "yes") {
      out = true;
    } else if (*raw == "false" || *raw == "0" || *raw == "no") {
      out = false;
    } else {
      problems_.push_back(fmt::format("{}: '{}' is not a boolean", key, *raw));
    }
  }

  std::optional<std::string> raw_value(const std::string& key) {
    known_.insert(key);
    const auto node = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!node) return std::nullopt;
    return trim(*node);
  }

  void report_unknown() const {
    for (const auto& [section, body] : tree_) {
      if (body.empty()) {
        problems_.push_back(fmt::format("key '{}' must live in a section", section));
        continue;
      }
      for (const auto& [key, value] : body) {
        (void)value;
        const std::string full = section + "." + key;
        if (!known_.count(full)) problems_.push_back(fmt::format("unknown key '{}'", full));
      }
    }
  }

 private:
  template <typename T>
  static bool parse_number(const std::string& text, T& value) {
    const std::string s = trim(text);
    if (s.empty()) return false;
    if constexpr (std::is_floating_point_v<T>) {
      // from_chars for double is not available in every libstdc++ we target.
      try {
        std::size_t used = 0;
        value = static_cast<T>(std::stod(s, &used));
        return used == s.size();
      } catch (const std::exception&) {
        return false;
      }
    } else {
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      return ec == std::errc() && ptr == s.data() + s.size();
    }
  }

  const pt::ptree& tree_;
  std::vector<std::string>& problems_;
  std::set<std::string> known_;
};

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += fmt::format("{}{:.17g}", i ? "," : "", v[i]);
  return out;
}

std::string join_strings(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

std::string interleave_name(InterleaveKind k) {
  switch (k) {
    case InterleaveKind::haar: return "haar";
    case InterleaveKind::identity: return "identity";
    case InterleaveKind::offset_shift: return "offset_shift";
  }
  return "haar";
}

void check_su2(const ExperimentConfig& cfg, std::vector<std::string>& out) {
  try {
    const PauliSum h0 = parse_quoted_sum(cfg.h0_text);
    const PauliSum h1 = parse_quoted_sum(cfg.h1_text);
    const PauliSum h2 = parse_quoted_sum(cfg.h2_text);
    if (h0.num_qubits() != h1.num_qubits() || h0.num_qubits() != h2.num_qubits()) {
      out.push_back("hamiltonian: h0, h1, h2 act on different qubit counts");
      return;
    }
    if (h0.num_qubits() > kMaxDenseQubits) {
      out.push_back(fmt::format("hamiltonian: {} qubits exceeds the dense limit {}",
                                h0.num_qubits(), kMaxDenseQubits));
      return;
    }
    Su2Probe probe(h0, h1, h2);
    (void)probe;
  } catch (const Error& e) {
    out.push_back(fmt::format("hamiltonian: {}", e.what()));
  }
}

void check_thetas(const ExperimentConfig& cfg, double lo, double hi, std::vector<std::string>& out) {
  if (cfg.theta.empty()) out.push_back("hamiltonian.theta: at least one value is required");
  for (double t : cfg.theta) {
    if (!(t > lo && t < hi)) {
      out.push_back(fmt::format("hamiltonian.theta: {} outside ({}, {})", t, lo, hi));
    }
  }
}

// The discrete estimator needs the scaled frequency κθ inside (0, π/4).
void check_scaled_theta(const ExperimentConfig& cfg, double scale, std::vector<std::string>& out) {
  for (double t : cfg.theta) {
    if (!(scale * t > 0.0 && scale * t < kPi / 4.0)) {
      out.push_back(fmt::format(
          "hamiltonian.theta: {} gives scaled frequency {} outside (0, pi/4) (scale {})", t,
          scale * t, scale));
    }
  }
}

void check_targets(const ExperimentConfig& cfg, std::vector<std::string>& out) {
  if (cfg.target_precision.empty()) out.push_back("policy.target_precision: at least one value");
  for (double t : cfg.target_precision) {
    if (!(t > 0.0)) out.push_back(fmt::format("policy.target_precision: {} must be > 0", t));
  }
}

}  // namespace

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::trace: return "trace";
    case Mode::estimate_continuous: return "estimate-continuous";
    case Mode::estimate_discrete: return "estimate-discrete";
    case Mode::multiparam: return "multiparam";
    case Mode::frame_align: return "frame-align";
    case Mode::search_bound: return "search-bound";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(const std::string& text) {
  for (Mode m : {Mode::trace, Mode::estimate_continuous, Mode::estimate_discrete, Mode::multiparam,
                 Mode::frame_align, Mode::search_bound}) {
    if (mode_name(m) == text) return m;
  }
  return std::nullopt;
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  - " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

PauliSum parse_quoted_sum(const std::string& text) { return PauliSum::parse(unquote(text)); }

ZoomPolicy ExperimentConfig::zoom_policy(double target) const {
  ZoomPolicy p;
  p.c = c;
  p.c_prime = c_prime;
  p.delta = noise.effective_delta();
  p.target_precision = target;
  p.theta_floor = theta_floor;
  p.max_steps = max_steps;
  return p;
}

BlackBoxPolicy ExperimentConfig::blackbox_policy(double target) const {
  BlackBoxPolicy p;
  p.b = b;
  p.delta = noise.effective_delta();
  p.c = c;
  p.target_precision = target;
  p.max_steps = max_steps;
  p.compensate = compensate;
  return p;
}

FrameMisalignment ExperimentConfig::misalignment() const {
  FrameMisalignment m;
  m.kind = frame_kind;
  m.theta = theta.empty() ? 0.0 : theta.front();
  m.phi = phi;
  m.psi = psi;
  m.h0 = parse_quoted_sum(h0_text);
  m.h1 = parse_quoted_sum(h1_text);
  m.h2 = parse_quoted_sum(h2_text);
  return m;
}

std::string ExperimentConfig::canonical() const {
  std::string q;
  for (std::size_t i = 0; i < q_calls.size(); ++i) q += fmt::format("{}{}", i ? "," : "", q_calls[i]);
  std::string s;
  s += fmt::format("mode={}\ntrials={}\nseed={}\nmax_nonconverged={:.17g}\n", mode_name(mode),
                   trials, seed, max_nonconverged);
  s += fmt::format("h0={}\nh1={}\nh2={}\ntheta={}\nterms={}\ntimes={}\n", unquote(h0_text),
                   unquote(h1_text), unquote(h2_text), join_doubles(theta), join_strings(terms),
                   join_doubles(times));
  s += fmt::format("delta={:.17g}\nrepetitions={}\n", noise.delta, noise.repetitions);
  s += fmt::format("c={:.17g}\nc_prime={:.17g}\nb={}\ntheta_floor={:.17g}\ntarget_precision={}\n",
                   c, c_prime, b, theta_floor, join_doubles(target_precision));
  s += fmt::format("max_steps={}\ncompensate={}\n", max_steps, compensate);
  s += fmt::format("trotter_order={}\nepsilon_ratio={:.17g}\n", trotter_order, epsilon_ratio);
  s += fmt::format("frame_kind={}\nphi={:.17g}\npsi={:.17g}\n",
                   frame_kind == MisalignmentKind::euler ? "euler" : "uniparametric", phi, psi);
  s += fmt::format("n_min={}\nn_max={}\nsearch_theta={:.17g}\ninterleave={}\ninstances={}\nq_calls={}\n",
                   n_min, n_max, search_theta, interleave_name(interleave), instances, q);
  s += fmt::format("sweep_interleave={}\n", interleave_name(sweep_interleave));
  return s;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError({fmt::format("syntax: {} (line {})", e.message(), e.line())});
  }
  std::vector<std::string> problems;
  Reader r(tree, problems);
  ExperimentConfig cfg;

  if (const auto mode = r.raw_value("experiment.mode")) {
    if (const auto m = parse_mode(*mode)) {
      cfg.mode = *m;
    } else {
      problems.push_back(fmt::format("experiment.mode: unknown mode '{}'", *mode));
    }
  }
  r.number("experiment.trials", cfg.trials);
  r.number("experiment.seed", cfg.seed);
  r.number("experiment.threads", cfg.threads);
  r.number("experiment.max_nonconverged", cfg.max_nonconverged);

  r.text("hamiltonian.h0", cfg.h0_text);
  r.text("hamiltonian.h1", cfg.h1_text);
  r.text("hamiltonian.h2", cfg.h2_text);
  r.number_list("hamiltonian.theta", cfg.theta);
  if (const auto t = r.raw_value("hamiltonian.terms")) cfg.terms = split_list(*t);
  r.number_list("hamiltonian.times", cfg.times);

  r.number("noise.delta", cfg.noise.delta);
  r.number("noise.repetitions", cfg.noise.repetitions);

  r.number("policy.c", cfg.c);
  r.number("policy.c_prime", cfg.c_prime);
  r.number("policy.b", cfg.b);
  r.number("policy.theta_floor", cfg.theta_floor);
  r.number_list("policy.target_precision", cfg.target_precision);
  r.number("policy.max_steps", cfg.max_steps);
  r.flag("policy.compensate", cfg.compensate);

  r.number("trotter.order", cfg.trotter_order);
  r.number("trotter.epsilon_ratio", cfg.epsilon_ratio);

  if (const auto kind = r.raw_value("frame.kind")) {
    if (*kind == "uniparametric") {
      cfg.frame_kind = MisalignmentKind::uniparametric;
    } else if (*kind == "euler") {
      cfg.frame_kind = MisalignmentKind::euler;
    } else {
      problems.push_back(fmt::format("frame.kind: '{}' is not uniparametric|euler", *kind));
    }
  }
  r.number("frame.phi", cfg.phi);
  r.number("frame.psi", cfg.psi);

  r.number("search.n_min", cfg.n_min);
  r.number("search.n_max", cfg.n_max);
  r.number("search.theta", cfg.search_theta);
  const auto interleave = [&](const std::string& key, InterleaveKind& out) {
    const auto kind = r.raw_value(key);
    if (!kind) return;
    if (*kind == "haar") {
      out = InterleaveKind::haar;
    } else if (*kind == "identity") {
      out = InterleaveKind::identity;
    } else if (*kind == "offset_shift") {
      out = InterleaveKind::offset_shift;
    } else {
      problems.push_back(fmt::format("{}: '{}' is not haar|identity|offset_shift", key, *kind));
    }
  };
  interleave("search.interleave", cfg.interleave);
  interleave("search.sweep_interleave", cfg.sweep_interleave);
  r.number("search.instances", cfg.instances);
  r.number_list("search.q_calls", cfg.q_calls);

  r.report_unknown();
  if (!problems.empty()) {
    // Report the semantic violations of the readable fields in the same pass.
    for (auto& v : config_violations(cfg)) problems.push_back(std::move(v));
    throw ConfigError(std::move(problems));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({fmt::format("cannot read config file '{}'", path)});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::string> config_violations(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  try {
    cfg.noise.validate();
  } catch (const Error& e) {
    out.push_back(fmt::format("noise: {}", e.what()));
  }
  if (!(cfg.max_nonconverged >= 0.0 && cfg.max_nonconverged <= 1.0)) {
    out.push_back("experiment.max_nonconverged must lie in [0, 1]");
  }
  const bool noise_ok = cfg.noise.delta > 0.0 && cfg.noise.repetitions > 0;

  const auto zoom_checks = [&] {
    check_targets(cfg, out);
    if (!noise_ok) return;
    const double target = cfg.target_precision.empty() ? 1e-6 : cfg.target_precision.front();
    for (const auto& v : cfg.zoom_policy(target).violations()) out.push_back("policy: " + v);
  };
  const auto blackbox_checks = [&] {
    check_targets(cfg, out);
    if (!noise_ok) return;
    const double target = cfg.target_precision.empty() ? 1e-6 : cfg.target_precision.front();
    for (const auto& v : cfg.blackbox_policy(target).violations()) out.push_back("policy: " + v);
  };

  switch (cfg.mode) {
    case Mode::trace:
      check_su2(cfg, out);
      check_thetas(cfg, 0.0, kPi, out);
      if (cfg.times.empty()) out.push_back("hamiltonian.times: at least one time is required");
      for (double t : cfg.times) {
        if (!std::isfinite(t) || t < 0.0) out.push_back(fmt::format("hamiltonian.times: {} invalid", t));
      }
      break;
    case Mode::estimate_continuous:
      check_su2(cfg, out);
      zoom_checks();
      check_thetas(cfg, cfg.theta_floor, kPi, out);
      if (cfg.theta.size() > 1) out.push_back("hamiltonian.theta: one value expected");
      break;
    case Mode::estimate_discrete:
      check_su2(cfg, out);
      blackbox_checks();
      check_thetas(cfg, 0.0, kPi / 2.0, out);
      if (cfg.theta.size() > 1) out.push_back("hamiltonian.theta: one value expected");
      if (out.empty()) {
        const Su2Probe probe(parse_quoted_sum(cfg.h0_text), parse_quoted_sum(cfg.h1_text),
                             parse_quoted_sum(cfg.h2_text));
        check_scaled_theta(cfg, probe.frequency_scale(), out);
      }
      break;
    case Mode::multiparam: {
      zoom_checks();
      check_thetas(cfg, cfg.theta_floor, kPi, out);
      if (cfg.terms.size() != cfg.theta.size()) {
        out.push_back(fmt::format("hamiltonian: {} terms but {} theta values", cfg.terms.size(),
                                  cfg.theta.size()));
        break;
      }
      if (cfg.trotter_order != 2 && cfg.trotter_order != 3) {
        out.push_back(fmt::format("trotter.order: {} is not 2 or 3", cfg.trotter_order));
      }
      if (!(cfg.epsilon_ratio > 0.0)) out.push_back("trotter.epsilon_ratio must be > 0");
      try {
        MultiHamiltonian h;
        for (std::size_t i = 0; i < cfg.terms.size(); ++i) {
          h.terms.push_back({cfg.theta[i], PauliProduct::parse(cfg.terms[i])});
        }
        h.validate();
        if (h.num_qubits() > kMaxDenseQubits) throw ResourceLimitError("too many qubits");
        for (std::size_t nu = 0; nu < h.size(); ++nu) {
          (void)select_decoupler(h, nu);
          (void)probe_partner(h, nu);
        }
      } catch (const Error& e) {
        out.push_back(fmt::format("hamiltonian: {}", e.what()));
      }
      break;
    }
    case Mode::frame_align:
      blackbox_checks();
      check_thetas(cfg, 0.0, kPi / 2.0, out);
      if (cfg.theta.size() > 1) out.push_back("hamiltonian.theta: one value expected");
      try {
        const FrameMisalignment mis = cfg.misalignment();
        mis.validate();
        if (out.empty()) {
          check_scaled_theta(cfg, AlignmentSignal(mis, NoiseModel{}).frequency_scale(), out);
        }
      } catch (const Error& e) {
        out.push_back(fmt::format("frame: {}", e.what()));
      }
      break;
    case Mode::search_bound:
      if (cfg.n_min < 2 || cfg.n_max < cfg.n_min || cfg.n_max > kMaxSearchQubits) {
        out.push_back(fmt::format("search: need 2 <= n_min <= n_max <= {}", kMaxSearchQubits));
      }
      if (cfg.search_theta == 0.0 || !std::isfinite(cfg.search_theta)) {
        out.push_back("search.theta must be finite and non-zero");
      }
      if (cfg.q_calls.empty()) out.push_back("search.q_calls: at least one value");
      for (auto q : cfg.q_calls) {
        if (q == 0) out.push_back("search.q_calls: values must be >= 1");
      }
      if (cfg.instances == 0 && cfg.interleave == InterleaveKind::haar) {
        out.push_back("search.instances must be >= 1 for haar interleaves");
      }
      break;
  }
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  auto problems = config_violations(cfg);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

}  // namespace dqc1
