#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "qcloud/autograd/model.hpp"
#include "qcloud/cloudenv/transition.hpp"
#include "qcloud/core/error.hpp"
#include "qcloud/pqc/pqc.hpp"

namespace qcloud::autograd {

/// Probability floor inside log pi.
inline constexpr double kLogProbFloor = 1e-12;

/// G_t = sum_k gamma^k r_{t+k}
[[nodiscard]] inline Eigen::VectorXd discounted_returns(std::span<const double> rewards, double gamma) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(rewards.size()));
    double acc = 0.0;
    for (std::size_t i = rewards.size(); i-- > 0;) {
        acc = rewards[i] + gamma * acc;
        g(static_cast<Eigen::Index>(i)) = acc;
    }
    return g;
}

template <typename Gradient> struct LossAndGrad {
    double loss = 0.0;
    Gradient grad;
};

/// L = -sum_t G_t log pi(a_t | s_t) with pi = softmax(model outputs). The
/// gradient uses d log pi(a) / d o_b = delta_ab - pi(b).
template <DifferentiableModel M>
[[nodiscard]] LossAndGrad<typename M::Gradient>
reinforce_loss_grad(const M &model, const cloudenv::Trajectory &trajectory, double gamma) {
    if (trajectory.empty()) {
        throw InvalidArgument("reinforce_loss_grad: empty trajectory");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw InvalidArgument("reinforce_loss_grad: gamma must be in (0, 1]");
    }
    std::vector<double> rewards;
    rewards.reserve(trajectory.size());
    for (const auto &t : trajectory) {
        rewards.push_back(t.r);
    }
    const Eigen::VectorXd returns = discounted_returns(rewards, gamma);

    LossAndGrad<typename M::Gradient> out{0.0, model.zero_gradient()};
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        const auto &tr = trajectory[t];
        const Eigen::VectorXd pi = pqc::softmax(model.outputs(tr.s));
        if (tr.a < 0 || tr.a >= pi.size()) {
            throw InvalidArgument("reinforce_loss_grad: action " + std::to_string(tr.a) +
                                  " out of range");
        }
        const double g = returns(static_cast<Eigen::Index>(t));
        out.loss -= g * std::log(std::max(pi(tr.a), kLogProbFloor));
        if (g != 0.0) {
            Eigen::VectorXd upstream = g * pi;
            upstream(tr.a) -= g;
            out.grad += model.vjp(tr.s, upstream);
        }
    }
    if (!std::isfinite(out.loss) || !out.grad.all_finite()) {
        throw NumericalError("reinforce_loss_grad: non-finite loss or gradient");
    }
    return out;
}

enum class TdLoss { Mse, Huber };

/// Mean TD loss between Q(s_i, a_i) and y_i = r_i + gamma max_a' Q_target(s'_i, a')
/// (y_i = r_i when terminal). Gradients flow through `online` only.
template <DifferentiableModel M>
[[nodiscard]] LossAndGrad<typename M::Gradient>
dqn_loss_grad(const M &online, const M &target, std::span<const cloudenv::Transition> batch,
              double gamma, TdLoss kind = TdLoss::Mse, double huber_delta = 1.0) {
    if (batch.empty()) {
        throw InvalidArgument("dqn_loss_grad: empty batch");
    }
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    LossAndGrad<typename M::Gradient> out{0.0, online.zero_gradient()};
    for (const auto &tr : batch) {
        double y = tr.r;
        if (!tr.terminal) {
            y += gamma * target.outputs(tr.s_next).maxCoeff();
        }
        const Eigen::VectorXd q = online.outputs(tr.s);
        if (tr.a < 0 || tr.a >= q.size()) {
            throw InvalidArgument("dqn_loss_grad: action " + std::to_string(tr.a) + " out of range");
        }
        const double err = q(tr.a) - y;
        double dloss = 0.0;
        if (kind == TdLoss::Mse) {
            out.loss += err * err * inv_n;
            dloss = 2.0 * err * inv_n;
        } else {
            const double a = std::abs(err);
            out.loss += (a <= huber_delta ? 0.5 * err * err : huber_delta * (a - 0.5 * huber_delta)) * inv_n;
            dloss = std::clamp(err, -huber_delta, huber_delta) * inv_n;
        }
        if (dloss != 0.0) {
            out.grad += online.vjp(tr.s, Eigen::VectorXd::Unit(q.size(), tr.a) * dloss);
        }
    }
    if (!std::isfinite(out.loss) || !out.grad.all_finite()) {
        throw NumericalError("dqn_loss_grad: non-finite loss or gradient");
    }
    return out;
}

} // namespace qcloud::autograd
