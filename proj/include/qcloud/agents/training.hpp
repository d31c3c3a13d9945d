#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qcloud/agents/mlp.hpp"
#include "qcloud/agents/replay.hpp"
#include "qcloud/autograd/adam.hpp"
#include "qcloud/autograd/losses.hpp"
#include "qcloud/autograd/param_shift.hpp"
#include "qcloud/cloudenv/env.hpp"

namespace qcloud::agents {

struct LearningRates {
    autograd::PqcLearningRates pqc{};
    double classical = 1e-3;
};

struct TrainConfig {
    int episodes = 1500;
    double gamma = 0.99;
    std::uint64_t seed = 0;
    LearningRates lr{};
    // Q-learning only.
    std::size_t batch_size = 16;
    std::size_t buffer_capacity = 10000;
    int update_every = 10;      ///< environment steps between online updates
    int target_sync_every = 30; ///< environment steps between target copies
    EpsilonSchedule epsilon{};
    autograd::TdLoss loss = autograd::TdLoss::Mse;
    double huber_delta = 1.0;

    void validate() const;
};

struct EpisodeLog {
    int episode = 0;
    double total_return = 0.0;
    double total_wait = 0.0;
    double epsilon = 0.0; ///< 0 for policy-gradient runs
};

using EpisodeCallback = std::function<void(const EpisodeLog &)>;

[[nodiscard]] autograd::AdamState make_optimizer(const autograd::PqcModel &model, const LearningRates &lr);
[[nodiscard]] autograd::AdamState make_optimizer(const MlpModel &model, const LearningRates &lr);
void apply_gradient(autograd::AdamState &opt, autograd::PqcModel &model, const autograd::GradientSet &g);
void apply_gradient(autograd::AdamState &opt, MlpModel &model, const MlpGradient &g);

/// Index of the largest entry, lowest index on ties.
[[nodiscard]] int argmax(const Eigen::VectorXd &v);
/// Draw from a categorical distribution.
[[nodiscard]] int sample_categorical(const Eigen::VectorXd &probs, Rng &rng);

/// Seed of training episode k; the environment and agent streams never
/// overlap.
[[nodiscard]] inline std::uint64_t episode_seed(std::uint64_t seed, int k) {
    return derive_seed(seed, static_cast<std::uint64_t>(k));
}
[[nodiscard]] inline std::uint64_t agent_seed(std::uint64_t seed) {
    return derive_seed(seed ^ 0x5eed5eed5eed5eedULL, 0);
}

/// REINFORCE: sample a full episode from softmax(model outputs), then one
/// optimizer step on the episode's loss.
template <autograd::DifferentiableModel M>
std::vector<EpisodeLog> train_reinforce(cloudenv::CloudEnv &env, M &model, const TrainConfig &cfg,
                                        const EpisodeCallback &on_episode = {}) {
    cfg.validate();
    auto opt = make_optimizer(model, cfg.lr);
    Rng rng(agent_seed(cfg.seed));
    std::vector<EpisodeLog> log;
    log.reserve(static_cast<std::size_t>(cfg.episodes));
    for (int k = 0; k < cfg.episodes; ++k) {
        Eigen::VectorXd s = env.reset(episode_seed(cfg.seed, k), k);
        cloudenv::Trajectory traj;
        while (!env.done()) {
            const int a = sample_categorical(pqc::softmax(model.outputs(s)), rng);
            auto res = env.step(a);
            traj.push_back({s, a, res.reward, res.observation, res.done});
            s = std::move(res.observation);
        }
        const auto lg = autograd::reinforce_loss_grad(model, traj, cfg.gamma);
        apply_gradient(opt, model, lg.grad);
        const auto m = cloudenv::cumulative_metrics(env.trace());
        log.push_back({k, m.total_return, m.total_wait, 0.0});
        if (on_episode) {
            on_episode(log.back());
        }
    }
    return log;
}

/// Deep Q-learning with replay, a periodically synchronised target copy and
/// per-episode epsilon decay.
template <autograd::DifferentiableModel M>
std::vector<EpisodeLog> train_dqn(cloudenv::CloudEnv &env, M &model, const TrainConfig &cfg,
                                  const EpisodeCallback &on_episode = {}) {
    cfg.validate();
    auto opt = make_optimizer(model, cfg.lr);
    Rng rng(agent_seed(cfg.seed));
    ReplayBuffer buffer(cfg.buffer_capacity);
    M target = model;
    long long steps = 0;
    std::vector<EpisodeLog> log;
    log.reserve(static_cast<std::size_t>(cfg.episodes));
    for (int k = 0; k < cfg.episodes; ++k) {
        const double eps = cfg.epsilon.value(k);
        Eigen::VectorXd s = env.reset(episode_seed(cfg.seed, k), k);
        while (!env.done()) {
            int a = 0;
            if (uniform01(rng) < eps) {
                a = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(env.n_actions())));
            } else {
                a = argmax(model.outputs(s));
            }
            auto res = env.step(a);
            buffer.push({s, a, res.reward, res.observation, res.done});
            s = std::move(res.observation);
            ++steps;
            if (steps % cfg.update_every == 0 && buffer.size() >= cfg.batch_size) {
                const auto batch = buffer.sample(cfg.batch_size, rng);
                const auto lg = autograd::dqn_loss_grad(model, target, std::span<const cloudenv::Transition>(batch),
                                                        cfg.gamma, cfg.loss, cfg.huber_delta);
                apply_gradient(opt, model, lg.grad);
            }
            if (steps % cfg.target_sync_every == 0) {
                target = model;
            }
        }
        const auto m = cloudenv::cumulative_metrics(env.trace());
        log.push_back({k, m.total_return, m.total_wait, eps});
        if (on_episode) {
            on_episode(log.back());
        }
    }
    return log;
}

} // namespace qcloud::agents
