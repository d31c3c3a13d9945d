#include "qcloud/cloudenv/env.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qcloud/core/error.hpp"
#include "qcloud/core/flat_text.hpp"
#include "qcloud/core/random.hpp"

namespace qcloud::cloudenv {

void EnvConfig::validate() const {
    if (nodes.empty()) {
        throw InvalidArgument("env: node table is empty");
    }
    for (const auto &n : nodes) {
        n.validate();
    }
    if (tasks_per_episode < 1) {
        throw InvalidArgument("env: tasks_per_episode must be >= 1");
    }
    if (!(arrival_interval >= 0.0) || !std::isfinite(arrival_interval)) {
        throw InvalidArgument("env: arrival_interval must be finite and >= 0");
    }
    if (!(pending_cap > 0.0) || !(qubit_cap > 0.0) || !(layer_cap >= 0.0)) {
        throw InvalidArgument("env: normalization caps must be positive");
    }
}

CloudEnv::CloudEnv(EnvConfig config, workload::TaskManifest pool)
    : config_(std::move(config)), pool_(std::move(pool)) {
    config_.validate();
    if (pool_.empty()) {
        throw InvalidArgument("env: workload source is empty");
    }
    pool_.validate();
    layer_cap_ = config_.layer_cap > 0.0 ? config_.layer_cap : static_cast<double>(pool_.max_layers());
    for (const auto &spec : config_.nodes) {
        nodes_.push_back({spec, 0.0, 0});
    }
    completions_.resize(nodes_.size());
    cursor_ = 0;
}

double CloudEnv::horizon() const {
    return config_.arrival_interval * config_.tasks_per_episode;
}

Eigen::VectorXd CloudEnv::reset(std::uint64_t seed, int episode) {
    Rng rng(seed);
    tasks_.clear();
    trace_.clear();
    for (int k = 0; k < config_.tasks_per_episode; ++k) {
        const auto &rec = pool_.records[uniform_index(rng, pool_.size())];
        tasks_.push_back({rec.id, k * config_.arrival_interval, rec.n_qubits, rec.layers,
                          rec.gate_count, rec.shots});
    }
    for (auto &n : nodes_) {
        n.busy_until = 0.0;
        n.pending_count = 0;
    }
    for (auto &c : completions_) {
        c.clear();
    }
    cursor_ = 0;
    episode_ = episode;
    started_ = true;
    now_ = 0.0;
    advance_clock(tasks_.front().arrival_time);
    return observation();
}

void CloudEnv::advance_clock(double t) {
    now_ = t;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        nodes_[i].pending_count = static_cast<int>(
            std::count_if(completions_[i].begin(), completions_[i].end(), [&](double c) { return c > now_; }));
    }
}

const QTask &CloudEnv::current_task() const {
    if (!started_ || done()) {
        throw InvalidArgument("env: no pending task; call reset()");
    }
    return tasks_[cursor_];
}

Eigen::VectorXd CloudEnv::observation() const {
    Eigen::VectorXd obs = Eigen::VectorXd::Zero(observation_size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        obs(static_cast<Eigen::Index>(i)) = nodes_[i].pending_count / config_.pending_cap;
    }
    if (started_ && !done()) {
        const QTask &t = tasks_[cursor_];
        const Eigen::Index base = n_actions();
        const double h = horizon();
        obs(base) = h > 0.0 ? t.arrival_time / h : 0.0;
        obs(base + 1) = t.n_qubits / config_.qubit_cap;
        obs(base + 2) = t.layers / layer_cap_;
    }
    return obs.cwiseMax(0.0).cwiseMin(1.0);
}

StepResult CloudEnv::step(int action) {
    if (!started_ || done()) {
        throw InvalidArgument("env: episode finished; call reset()");
    }
    if (action < 0 || action >= n_actions()) {
        throw InvalidArgument("env: action " + std::to_string(action) + " out of range [0, " +
                              std::to_string(n_actions()) + ")");
    }
    const QTask &task = tasks_[cursor_];
    QNode &node = nodes_[static_cast<std::size_t>(action)];
    StepRecord rec{episode_, static_cast<int>(cursor_), task.id, action, kInfeasibleReward, 0.0, false};
    if (task.n_qubits <= node.spec.n_qubits) {
        const double start = std::max(task.arrival_time, node.busy_until);
        const double completion = start + execution_time(task, node.spec);
        node.busy_until = completion;
        completions_[static_cast<std::size_t>(action)].push_back(completion);
        rec.reward = 1.0 / (completion - task.arrival_time);
        rec.wait = start - task.arrival_time;
        rec.executed = true;
    }
    trace_.push_back(rec);
    ++cursor_;
    advance_clock(done() ? horizon() : tasks_[cursor_].arrival_time);
    return {observation(), rec.reward, done()};
}

EpisodeMetrics cumulative_metrics(std::span<const StepRecord> trace) {
    EpisodeMetrics m;
    for (const auto &r : trace) {
        m.total_return += r.reward;
        m.total_wait += r.wait;
        (r.executed ? m.executed : m.dropped) += 1;
    }
    return m;
}

void write_trace_header(std::ostream &out) { out << "episode,step,task_id,action,reward,wait\n"; }

void write_trace_rows(std::ostream &out, std::span<const StepRecord> trace) {
    for (const auto &r : trace) {
        out << r.episode << ',' << r.step << ',' << r.task_id << ',' << r.action << ','
            << format_double(r.reward) << ',' << format_double(r.wait) << '\n';
    }
}

} // namespace qcloud::cloudenv
