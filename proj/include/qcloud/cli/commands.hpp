#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcloud/agents/training.hpp"
#include "qcloud/cli/config.hpp"

namespace qcloud::cli {

inline constexpr int kTrainCurveWindow = 20;
inline constexpr int kEvalCurveWindow = 10;

struct TrainOutputs {
    std::vector<agents::EpisodeLog> log;
    std::filesystem::path checkpoint; ///< empty for greedy
    std::filesystem::path rewards;
    std::filesystem::path curve;
};

/// Trains `cfg.algorithm` and writes, under the output directory:
/// <prefix>.ckpt, <prefix>_rewards.csv, <prefix>_curve.csv,
/// <prefix>_config.json and, if requested, <prefix>_curve.svg.
/// The prefix is the algorithm name, or "noisy-<algorithm>" for
/// density-matrix runs.
TrainOutputs cmd_train(const ExperimentConfig &cfg, std::ostream &log);

struct AgentSummary {
    std::string name;
    std::string algorithm;
    double mean_return = 0.0;
    double mean_wait = 0.0;
};

/// Paired evaluation of the greedy baseline plus every configured agent.
/// Writes eval_summary.csv/.txt and per-agent episode, curve and trace CSVs.
std::vector<AgentSummary> cmd_eval(const ExperimentConfig &cfg, std::ostream &log);

void write_summary_table(std::ostream &os, const std::vector<AgentSummary> &rows);

/// Full command line entry point. Exit codes: 0 success, 1 usage or
/// configuration error, 2 runtime failure.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace qcloud::cli
