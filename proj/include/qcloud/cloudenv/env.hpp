#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcloud/cloudenv/node_table.hpp"
#include "qcloud/cloudenv/transition.hpp"
#include "qcloud/workload/manifest.hpp"

namespace qcloud::cloudenv {

/// A task as presented to the scheduler. arrival_time is relative to the
/// episode start.
struct QTask {
    std::string id;
    double arrival_time = 0.0;
    int n_qubits = 1;
    int layers = 1;
    int gate_count = 1;
    int shots = 1024;
};

/// Seconds to run every shot of `task` on a node: shots * layers / clops.
[[nodiscard]] inline double execution_time(const QTask &task, const NodeSpec &node) {
    return static_cast<double>(task.shots) * static_cast<double>(task.layers) / node.clops;
}

inline constexpr double kInfeasibleReward = -10.0;

struct EnvConfig {
    std::vector<NodeSpec> nodes = default_node_table();
    int tasks_per_episode = 10;
    double arrival_interval = 20.0; ///< seconds between consecutive arrivals
    double pending_cap = 20.0;     ///< normalizer for pending counts
    double qubit_cap = 50.0;       ///< normalizer for task width
    double layer_cap = 0.0;        ///< normalizer for depth; 0 uses the pool maximum

    void validate() const;
};

struct QNode {
    NodeSpec spec;
    double busy_until = 0.0;
    int pending_count = 0; ///< tasks whose completion lies after the current time
};

struct StepRecord {
    int episode = 0;
    int step = 0;
    std::string task_id;
    int action = 0;
    double reward = 0.0;
    double wait = 0.0; ///< start - arrival; 0 for dropped tasks
    bool executed = false;
};

struct StepResult {
    Eigen::VectorXd observation;
    double reward = 0.0;
    bool done = false;
};

/// Queueing environment. Each step presents one task; the action names the
/// node that receives it. Feasible tasks queue FIFO behind the node's
/// previous work and earn 1/T where T runs from arrival to completion.
/// Tasks wider than the node are dropped with kInfeasibleReward.
///
/// Observation: pending_count / pending_cap per node, then arrival / horizon,
/// width / qubit_cap, layers / layer_cap, all clamped to [0, 1]. The terminal
/// observation carries zero task features.
class CloudEnv {
  public:
    CloudEnv(EnvConfig config, workload::TaskManifest pool);

    /// Clears queues and clock and draws the episode's tasks from `seed`.
    Eigen::VectorXd reset(std::uint64_t seed, int episode = 0);
    StepResult step(int action);

    [[nodiscard]] Eigen::VectorXd observation() const;
    [[nodiscard]] int observation_size() const { return n_actions() + 3; }
    [[nodiscard]] int n_actions() const { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] bool done() const { return cursor_ >= tasks_.size(); }
    [[nodiscard]] const QTask &current_task() const;
    [[nodiscard]] const std::vector<QNode> &nodes() const { return nodes_; }
    [[nodiscard]] const std::vector<QTask> &episode_tasks() const { return tasks_; }
    [[nodiscard]] const std::vector<StepRecord> &trace() const { return trace_; }
    [[nodiscard]] const EnvConfig &config() const { return config_; }
    [[nodiscard]] double now() const { return now_; }
    [[nodiscard]] double horizon() const;

  private:
    void advance_clock(double t);

    EnvConfig config_;
    workload::TaskManifest pool_;
    double layer_cap_ = 1.0;
    std::vector<QNode> nodes_;
    std::vector<std::vector<double>> completions_;
    std::vector<QTask> tasks_;
    std::vector<StepRecord> trace_;
    std::size_t cursor_ = 0;
    double now_ = 0.0;
    int episode_ = 0;
    bool started_ = false;
};

struct EpisodeMetrics {
    double total_return = 0.0;
    double total_wait = 0.0;
    int executed = 0;
    int dropped = 0;
};

[[nodiscard]] EpisodeMetrics cumulative_metrics(std::span<const StepRecord> trace);

/// CSV rows: episode,step,task_id,action,reward,wait
void write_trace_header(std::ostream &out);
void write_trace_rows(std::ostream &out, std::span<const StepRecord> trace);

} // namespace qcloud::cloudenv
