#pragma once

#include <concepts>

#include <Eigen/Dense>

namespace qcloud::autograd {

/// A function approximator s -> R^{n_actions} with a vector-Jacobian product.
/// Both the PQC and the classical MLP satisfy it, so the RL losses and
/// training loops are written once.
template <typename M>
concept DifferentiableModel =
    requires(const M &m, const Eigen::VectorXd &s, const Eigen::VectorXd &up,
             typename M::Gradient g) {
        { m.outputs(s) } -> std::convertible_to<Eigen::VectorXd>;
        { m.vjp(s, up) } -> std::convertible_to<typename M::Gradient>;
        { m.zero_gradient() } -> std::convertible_to<typename M::Gradient>;
        { g += g };
        { g *= 1.0 };
        { g.all_finite() } -> std::convertible_to<bool>;
    };

} // namespace qcloud::autograd
