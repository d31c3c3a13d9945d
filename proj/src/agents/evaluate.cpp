#include "qcloud/agents/evaluate.hpp"

#include <cmath>

#include "qcloud/core/error.hpp"

namespace qcloud::agents {

void TrainConfig::validate() const {
    if (episodes < 0) {
        throw InvalidArgument("train: episodes must be >= 0");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw InvalidArgument("train: gamma must be in (0, 1]");
    }
    if (batch_size < 1 || buffer_capacity < batch_size) {
        throw InvalidArgument("train: need 1 <= batch_size <= buffer_capacity");
    }
    if (update_every < 1 || target_sync_every < 1) {
        throw InvalidArgument("train: update periods must be >= 1");
    }
    if (!(lr.classical > 0.0 && lr.pqc.phi > 0.0 && lr.pqc.lambda > 0.0 && lr.pqc.w > 0.0)) {
        throw InvalidArgument("train: learning rates must be positive");
    }
    epsilon.validate();
}

autograd::AdamState make_optimizer(const autograd::PqcModel &model, const LearningRates &lr) {
    return autograd::make_pqc_adam(model.arch, lr.pqc);
}

autograd::AdamState make_optimizer(const MlpModel &model, const LearningRates &lr) {
    autograd::AdamState st;
    st.add_group("theta", lr.classical, model.theta.size());
    return st;
}

void apply_gradient(autograd::AdamState &opt, autograd::PqcModel &model, const autograd::GradientSet &g) {
    autograd::adam_step(opt, model.params, g);
}

void apply_gradient(autograd::AdamState &opt, MlpModel &model, const MlpGradient &g) {
    autograd::adam_step(opt, {&model.theta}, {&g.g});
}

int argmax(const Eigen::VectorXd &v) {
    if (v.size() == 0) {
        throw InvalidArgument("argmax of empty vector");
    }
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (v(i) > v(best)) {
            best = i;
        }
    }
    return static_cast<int>(best);
}

int sample_categorical(const Eigen::VectorXd &probs, Rng &rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        acc += probs(i);
        if (u < acc) {
            return static_cast<int>(i);
        }
    }
    // Rounding left u above the total; take the last positive entry.
    for (Eigen::Index i = probs.size(); i-- > 0;) {
        if (probs(i) > 0.0) {
            return static_cast<int>(i);
        }
    }
    throw InvalidArgument("sample_categorical: no positive probability");
}

double EvalResult::mean_return() const {
    double s = 0.0;
    for (const auto &e : episodes) {
        s += e.total_return;
    }
    return episodes.empty() ? 0.0 : s / static_cast<double>(episodes.size());
}

double EvalResult::mean_wait() const {
    double s = 0.0;
    for (const auto &e : episodes) {
        s += e.total_wait;
    }
    return episodes.empty() ? 0.0 : s / static_cast<double>(episodes.size());
}

EvalResult evaluate(cloudenv::CloudEnv &env, const PolicyFn &policy, int n_episodes, std::uint64_t seed) {
    if (n_episodes < 1) {
        throw InvalidArgument("evaluate: n_episodes must be >= 1");
    }
    EvalResult out;
    for (int k = 0; k < n_episodes; ++k) {
        Eigen::VectorXd s = env.reset(eval_episode_seed(seed, k), k);
        while (!env.done()) {
            s = env.step(policy(env, s)).observation;
        }
        out.episodes.push_back(cloudenv::cumulative_metrics(env.trace()));
        out.trace.insert(out.trace.end(), env.trace().begin(), env.trace().end());
    }
    return out;
}

PolicyFn greedy_policy() {
    return [](const cloudenv::CloudEnv &env, const Eigen::VectorXd &) { return greedy_select(env); };
}

} // namespace qcloud::agents
