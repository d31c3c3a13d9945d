#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcloud/agents/training.hpp"
#include "qcloud/cloudenv/env.hpp"
#include "qcloud/qsim/density.hpp"
#include "qcloud/workload/generator.hpp"

namespace qcloud::cli {

inline constexpr const char *kAlgorithms[] = {"greedy", "reinforce-pqc", "dqn-pqc", "reinforce-mlp",
                                              "dqn-mlp"};

[[nodiscard]] bool is_algorithm(std::string_view name);
[[nodiscard]] inline bool is_pqc(std::string_view algorithm) { return algorithm.ends_with("-pqc"); }
[[nodiscard]] inline bool is_dqn(std::string_view algorithm) { return algorithm.starts_with("dqn-"); }

/// One entry of an evaluation run.
struct AgentSpec {
    std::string name;
    std::string algorithm;
    std::string checkpoint; ///< empty for greedy
};

struct ExperimentConfig {
    std::string algorithm = "reinforce-pqc";
    int episodes = 1500;
    std::uint64_t seed = 1;
    std::uint64_t eval_seed = 1000;
    int eval_episodes = 50;
    double gamma = 0.99;

    int pqc_layers = 5;
    autograd::PqcLearningRates pqc_lr{};
    double classical_lr = 1e-3;
    std::vector<int> mlp_hidden{64, 64, 64};

    std::size_t batch_size = 16;
    std::size_t buffer_capacity = 10000;
    int update_every = 10;
    int target_sync_every = 30;
    agents::EpsilonSchedule epsilon{};
    std::string td_loss = "mse"; ///< mse | huber
    double huber_delta = 1.0;

    std::string node_table; ///< path; empty uses the built-in table
    std::vector<std::string> node_ids; ///< subset/order of nodes; empty keeps all
    int tasks_per_episode = 10;
    double arrival_interval = cloudenv::EnvConfig{}.arrival_interval;
    double pending_cap = 20.0;
    double qubit_cap = 50.0;
    double layer_cap = 0.0;

    std::string manifest; ///< path; empty uses the generator below
    int workload_tasks = 1000;
    std::uint64_t workload_seed = 1;
    workload::WorkloadDistribution distribution{};

    bool density = false;
    qsim::NoisePolicy noise{0.01, 0.01}; ///< used only when density is set

    std::string output_dir;
    bool svg = false;
    std::vector<AgentSpec> agents;

    /// Throws ConfigError naming the first offending key.
    void validate() const;
};

/// Reads a JSON config; keys missing from the file keep the values of `base`.
[[nodiscard]] ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base = {});
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path &path, ExperimentConfig base = {});

/// Starting point of the noisy verb: two nodes, one layer, 150 episodes,
/// density-matrix circuits.
[[nodiscard]] ExperimentConfig noisy_defaults();
[[nodiscard]] std::string config_to_json(const ExperimentConfig &cfg);

/// Output directory: config value, else $QCLOUD_OUTPUT_DIR, else "qcloud_out".
[[nodiscard]] std::filesystem::path resolve_output_dir(const ExperimentConfig &cfg);

[[nodiscard]] cloudenv::EnvConfig make_env_config(const ExperimentConfig &cfg);
[[nodiscard]] workload::TaskManifest make_workload(const ExperimentConfig &cfg);
[[nodiscard]] agents::TrainConfig make_train_config(const ExperimentConfig &cfg);

} // namespace qcloud::cli
