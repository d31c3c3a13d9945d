#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qcloud/agents/greedy.hpp"
#include "qcloud/agents/training.hpp"
#include "qcloud/cloudenv/env.hpp"

namespace qcloud::agents {

/// Maps the environment state (and its observation vector) to an action.
using PolicyFn = std::function<int(const cloudenv::CloudEnv &, const Eigen::VectorXd &)>;

struct EvalResult {
    std::vector<cloudenv::EpisodeMetrics> episodes;
    std::vector<cloudenv::StepRecord> trace;

    [[nodiscard]] double mean_return() const;
    [[nodiscard]] double mean_wait() const;
};

/// Seed of evaluation episode k. Every agent evaluated with the same base
/// seed sees the same task stream.
[[nodiscard]] inline std::uint64_t eval_episode_seed(std::uint64_t seed, int k) {
    return derive_seed(seed ^ 0xe7a1e7a1e7a1e7a1ULL, static_cast<std::uint64_t>(k));
}

[[nodiscard]] EvalResult evaluate(cloudenv::CloudEnv &env, const PolicyFn &policy, int n_episodes,
                                  std::uint64_t seed);

[[nodiscard]] PolicyFn greedy_policy();

/// argmax over model outputs; for the softmax policy this is also the mode.
template <autograd::DifferentiableModel M> [[nodiscard]] PolicyFn argmax_policy(M model) {
    return [m = std::move(model)](const cloudenv::CloudEnv &, const Eigen::VectorXd &s) {
        return argmax(m.outputs(s));
    };
}

} // namespace qcloud::agents
