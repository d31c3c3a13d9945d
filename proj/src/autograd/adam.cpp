#include "qcloud/autograd/adam.hpp"

#include <cmath>

#include "qcloud/core/error.hpp"

namespace qcloud::autograd {

AdamState &AdamState::add_group(std::string name, double lr, Eigen::Index size) {
    groups.push_back({std::move(name), lr, Eigen::VectorXd::Zero(size), Eigen::VectorXd::Zero(size)});
    return *this;
}

AdamState make_pqc_adam(const pqc::PqcArchitecture &arch, const PqcLearningRates &lr) {
    AdamState st;
    st.add_group("phi", lr.phi, arch.phi_size());
    st.add_group("lambda", lr.lambda, arch.lambda_size());
    st.add_group("w", lr.w, arch.w_size());
    return st;
}

void adam_step(AdamState &state, const std::vector<Eigen::VectorXd *> &params,
               const std::vector<const Eigen::VectorXd *> &grads) {
    if (params.size() != state.groups.size() || grads.size() != state.groups.size()) {
        throw InvalidArgument("adam_step: expected " + std::to_string(state.groups.size()) +
                              " parameter groups");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto n = state.groups[i].m.size();
        if (params[i]->size() != n || grads[i]->size() != n) {
            throw InvalidArgument("adam_step: shape mismatch in group '" + state.groups[i].name + "'");
        }
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto &g = state.groups[i];
        const Eigen::VectorXd &grad = *grads[i];
        g.m = state.beta1 * g.m + (1.0 - state.beta1) * grad;
        g.v = state.beta2 * g.v + (1.0 - state.beta2) * grad.cwiseAbs2();
        const Eigen::ArrayXd mhat = g.m.array() / c1;
        const Eigen::ArrayXd vhat = g.v.array() / c2;
        params[i]->array() -= g.lr * mhat / (vhat.sqrt() + state.epsilon);
    }
}

void adam_step(AdamState &state, pqc::ParameterSet &params, const GradientSet &grads) {
    adam_step(state, {&params.phi, &params.lambda, &params.w},
              {&grads.d_phi, &grads.d_lambda, &grads.d_w});
}

} // namespace qcloud::autograd
