#pragma once

#include <Eigen/Dense>

#include "qcloud/pqc/pqc.hpp"

namespace qcloud::autograd {

/// d(loss)/d(theta), shaped like ParameterSet.
struct GradientSet {
    Eigen::VectorXd d_phi;
    Eigen::VectorXd d_lambda;
    Eigen::VectorXd d_w;

    static GradientSet zeros(const pqc::PqcArchitecture &arch) {
        return {Eigen::VectorXd::Zero(arch.phi_size()), Eigen::VectorXd::Zero(arch.lambda_size()),
                Eigen::VectorXd::Zero(arch.w_size())};
    }

    GradientSet &operator+=(const GradientSet &o) {
        d_phi += o.d_phi;
        d_lambda += o.d_lambda;
        d_w += o.d_w;
        return *this;
    }
    GradientSet &operator*=(double c) {
        d_phi *= c;
        d_lambda *= c;
        d_w *= c;
        return *this;
    }

    [[nodiscard]] bool all_finite() const {
        return d_phi.allFinite() && d_lambda.allFinite() && d_w.allFinite();
    }
    /// phi, lambda, w concatenated.
    [[nodiscard]] Eigen::VectorXd flat() const {
        Eigen::VectorXd out(d_phi.size() + d_lambda.size() + d_w.size());
        out << d_phi, d_lambda, d_w;
        return out;
    }
};

} // namespace qcloud::autograd
