#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dqc1/config.hpp"
#include "dqc1/report.hpp"
#include "dqc1/run_record.hpp"
#include "dqc1/search_bound.hpp"

namespace dqc1 {

/// All rows of a campaign, in a fixed order that does not depend on the
/// number of worker threads.
struct CampaignResult {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<RunRecord> runs;
  std::vector<TraceRow> trace;
  std::vector<SearchRow> search;
  std::vector<SweepPoint> sweep;
  CampaignSummary summary;
};

/// Validates the config (ConfigError listing every violation), then runs
/// trials × target_precision jobs on `threads` workers (0: hardware
/// concurrency). A failing trial is recorded in RunRecord::error and the
/// campaign continues. Job j draws from the stream of trial index j, so the
/// result is independent of scheduling.
CampaignResult run_campaign(const ExperimentConfig& cfg, std::size_t threads = 0);

/// Files written by write_outputs, relative to the output directory.
struct OutputFiles {
  std::vector<std::string> written;
  std::string svg_error;
};

/// Writes trials.csv + steps.csv (estimator modes), trace.csv, or
/// search.csv + sweep.csv, always summary.json; scaling.svg when requested
/// (a plotting failure is reported, never thrown).
OutputFiles write_outputs(const CampaignResult& result, const std::string& out_dir, bool svg);

}  // namespace dqc1
