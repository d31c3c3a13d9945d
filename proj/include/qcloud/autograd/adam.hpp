#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcloud/autograd/gradient.hpp"
#include "qcloud/pqc/pqc.hpp"

namespace qcloud::autograd {

struct AdamGroup {
    std::string name;
    double lr = 1e-3;
    Eigen::VectorXd m;
    Eigen::VectorXd v;
};

/// Adam with bias correction and one learning rate per parameter group.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;
    long long step = 0;
    std::vector<AdamGroup> groups;

    /// Adds a zero-initialised group of `size` parameters.
    AdamState &add_group(std::string name, double lr, Eigen::Index size);
};

/// Learning rates for the three PQC groups.
struct PqcLearningRates {
    double phi = 0.03;
    double lambda = 0.05;
    double w = 0.03;
};

[[nodiscard]] AdamState make_pqc_adam(const pqc::PqcArchitecture &arch, const PqcLearningRates &lr);

/// One step on every group: params[i] -= lr_i * mhat / (sqrt(vhat) + eps).
/// `params` and `grads` are matched to the state's groups in order.
void adam_step(AdamState &state, const std::vector<Eigen::VectorXd *> &params,
               const std::vector<const Eigen::VectorXd *> &grads);

void adam_step(AdamState &state, pqc::ParameterSet &params, const GradientSet &grads);

} // namespace qcloud::autograd
