#pragma once

#include <Eigen/Dense>

#include "qcloud/autograd/gradient.hpp"
#include "qcloud/pqc/pqc.hpp"

namespace qcloud::autograd {

/// Raw per-action expectations z_a = <Z_{q(a)}> and their derivatives.
struct RawJacobian {
    Eigen::VectorXd z;        ///< n_actions
    Eigen::MatrixXd d_phi;    ///< n_actions x |phi|
    Eigen::MatrixXd d_lambda; ///< n_actions x |lambda|, chain rule through x applied
};

/// Parameter-shift Jacobian. Every phi and every encoding angle enters
/// exactly one rotation exp(-i theta sigma / 2), so
///   dz/dtheta = (z(theta + pi/2) - z(theta - pi/2)) / 2
/// is exact. Encoding angles are lambda_{l,j} x_j, giving the factor x_j; in
/// the QValue head x_j = tanh(lambda_{0,j} s_j) adds a second path through
/// lambda_{0,j}.
[[nodiscard]] RawJacobian raw_jacobian(const pqc::PqcArchitecture &arch,
                                       const pqc::ParameterSet &params, const Eigen::VectorXd &s,
                                       pqc::Head head = pqc::Head::Policy,
                                       const pqc::EvalOptions &opts = {});

/// Gradient of <O_a> = w_a z_a with respect to every parameter.
[[nodiscard]] GradientSet param_shift_grad(const pqc::PqcArchitecture &arch,
                                           const pqc::ParameterSet &params,
                                           const Eigen::VectorXd &s, int action,
                                           pqc::Head head = pqc::Head::Policy,
                                           const pqc::EvalOptions &opts = {});

/// sum_a upstream_a * d<O_a>/dtheta from an already computed Jacobian.
[[nodiscard]] GradientSet contract(const RawJacobian &jac, const pqc::ParameterSet &params,
                                   const Eigen::VectorXd &upstream);

/// PQC as a differentiable model: outputs are <O_a> under the chosen head.
struct PqcModel {
    using Gradient = GradientSet;

    pqc::PqcArchitecture arch;
    pqc::ParameterSet params;
    pqc::Head head = pqc::Head::Policy;
    pqc::EvalOptions opts{};

    [[nodiscard]] Eigen::VectorXd outputs(const Eigen::VectorXd &s) const;
    [[nodiscard]] GradientSet vjp(const Eigen::VectorXd &s, const Eigen::VectorXd &upstream) const;
    [[nodiscard]] GradientSet zero_gradient() const { return GradientSet::zeros(arch); }
    [[nodiscard]] Eigen::Index parameter_count() const { return arch.parameter_count(); }
};

} // namespace qcloud::autograd
