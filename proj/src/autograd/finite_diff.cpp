#include "qcloud/autograd/finite_diff.hpp"

#include "qcloud/core/error.hpp"

namespace qcloud::autograd {

Eigen::VectorXd finite_diff_grad(const std::function<double(const Eigen::VectorXd &)> &f,
                                 const Eigen::VectorXd &x, double h) {
    if (!(h > 0.0)) {
        throw InvalidArgument("finite_diff_grad: step h must be > 0");
    }
    Eigen::VectorXd probe = x;
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe(i) = x(i) + h;
        const double up = f(probe);
        probe(i) = x(i) - h;
        const double down = f(probe);
        probe(i) = x(i);
        g(i) = (up - down) / (2.0 * h);
    }
    return g;
}

GradientSet finite_diff_grad(const std::function<double(const pqc::ParameterSet &)> &f,
                             const pqc::ParameterSet &params, double h) {
    const Eigen::Index np = params.phi.size();
    const Eigen::Index nl = params.lambda.size();
    const Eigen::Index nw = params.w.size();
    Eigen::VectorXd flat(np + nl + nw);
    flat << params.phi, params.lambda, params.w;
    auto unflatten = [&](const Eigen::VectorXd &v) {
        return pqc::ParameterSet{v.head(np), v.segment(np, nl), v.tail(nw)};
    };
    const Eigen::VectorXd g =
        finite_diff_grad([&](const Eigen::VectorXd &v) { return f(unflatten(v)); }, flat, h);
    return {g.head(np), g.segment(np, nl), g.tail(nw)};
}

} // namespace qcloud::autograd
