// dqc1m: batch driver for the DQC1 estimation campaigns.
//
//   dqc1m <mode> --config <file> [--seed S] [--trials N] [--threads N]
//         [--out DIR] [--svg]
//
// Exit codes: 0 ok, 2 invalid config, 3 too many non-converged runs,
// 1 any other failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "dqc1/campaign.hpp"
#include "dqc1/config.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNonConverged = 3;

void print_config_error(const dqc1::ConfigError& e) {
  std::cerr << "error_category=config_invalid\n";
  for (const auto& p : e.problems()) std::cerr << "violation: " << p << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DQC1 metrology campaign driver"};
  std::string mode_text;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::size_t> threads;
  std::string out_dir = "out";
  bool svg = false;
  app.add_option("mode", mode_text,
                 "trace | estimate-continuous | estimate-discrete | multiparam | frame-align | "
                 "search-bound")
      ->required();
  app.add_option("--config", config_path, "INI experiment file")->required();
  app.add_option("--seed", seed, "override experiment.seed");
  app.add_option("--trials", trials, "override experiment.trials");
  app.add_option("--threads", threads, "worker threads (default: available cores)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--svg", svg, "also write scaling.svg");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    dqc1::ExperimentConfig cfg = dqc1::load_config(config_path);
    const auto mode = dqc1::parse_mode(mode_text);
    if (!mode) throw dqc1::ConfigError({fmt::format("unknown mode '{}'", mode_text)});
    if (cfg.mode != *mode) {
      // The command-line mode wins; the file may be shared across modes.
      cfg.mode = *mode;
    }
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;

    const dqc1::CampaignResult result = dqc1::run_campaign(cfg, cfg.threads);
    const dqc1::OutputFiles files = dqc1::write_outputs(result, out_dir, svg);
    for (const auto& f : files.written) std::cout << "wrote " << out_dir << '/' << f << '\n';
    if (!files.svg_error.empty()) std::cerr << "warning: svg skipped: " << files.svg_error << '\n';

    const auto& s = result.summary;
    std::cout << fmt::format("mode={} rows={} converged={} failed={} coverage={:.4f}\n", s.mode,
                             s.rows, s.converged, s.failed, s.coverage);
    if (s.scaling) {
      std::cout << fmt::format("scaling slope={:.4f} ci95=[{:.4f}, {:.4f}]\n", s.scaling->slope,
                               s.scaling->ci_lo, s.scaling->ci_hi);
    }
    const bool estimator = cfg.mode != dqc1::Mode::trace && cfg.mode != dqc1::Mode::search_bound;
    if (estimator && s.nonconverged_fraction > cfg.max_nonconverged) {
      std::cerr << fmt::format("error_category=nonconverged fraction={:.4f} threshold={:.4f}\n",
                               s.nonconverged_fraction, cfg.max_nonconverged);
      return kExitNonConverged;
    }
    return 0;
  } catch (const dqc1::ConfigError& e) {
    print_config_error(e);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error_category=runtime\nerror: " << e.what() << '\n';
    return 1;
  }
}
