#pragma once

#include <functional>

#include <Eigen/Dense>

#include "qcloud/autograd/gradient.hpp"
#include "qcloud/pqc/pqc.hpp"

namespace qcloud::autograd {

/// Central differences (f(x+h) - f(x-h)) / 2h, one coordinate at a time.
[[nodiscard]] Eigen::VectorXd finite_diff_grad(const std::function<double(const Eigen::VectorXd &)> &f,
                                               const Eigen::VectorXd &x, double h);

/// Same over a ParameterSet; used as the reference for parameter-shift
/// gradients.
[[nodiscard]] GradientSet finite_diff_grad(const std::function<double(const pqc::ParameterSet &)> &f,
                                           const pqc::ParameterSet &params, double h);

} // namespace qcloud::autograd
