#include "qcloud/autograd/param_shift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcloud/qsim/density.hpp"
#include "qcloud/qsim/statevector.hpp"

namespace qcloud::autograd {

namespace {

constexpr double kShift = std::numbers::pi / 2;
/// Shift differences below this are round-off of the forward pass.
constexpr double kRoundoffFloor = 1e-12;
constexpr std::size_t kCheckpointBudgetBytes = std::size_t{64} << 20U;

struct PureBackend {
    using State = qsim::StateVector<double>;
    State initial(int n) const { return State(n); }
    void apply(State &psi, const qsim::GateOp &op) const {
        qsim::kernels::apply_op<double>(psi.data(), 1, psi.dimension(), op);
    }
    static std::size_t bytes(int n) { return (std::size_t{1} << n) * sizeof(std::complex<double>); }
};

struct DensityBackend {
    using State = qsim::DensityMatrix<double>;
    bool noiseless = true;
    qsim::Matrix4c<double> noise = qsim::Matrix4c<double>::Identity();
    State initial(int n) const { return State(n); }
    void apply(State &rho, const qsim::GateOp &op) const {
        if (noiseless) {
            qsim::apply_gate_inplace(rho, op);
        } else {
            qsim::apply_noisy_gate_inplace(rho, op, noise);
        }
    }
    static std::size_t bytes(int n) {
        return (std::size_t{1} << (2 * n)) * sizeof(std::complex<double>);
    }
};

/// Evaluates z after replacing one rotation angle, resuming from cached
/// intermediate states. States are cached every `stride` ops so the cache
/// stays within kCheckpointBudgetBytes.
template <typename Backend> class ShiftEngine {
  public:
    ShiftEngine(const qsim::Circuit &circuit, int n_out, Backend backend)
        : circuit_(circuit), n_out_(n_out), backend_(std::move(backend)) {
        circuit_.validate();
        const std::size_t n_ops = circuit_.ops.size();
        const std::size_t per_state = Backend::bytes(circuit_.n_qubits);
        const std::size_t max_states = std::max<std::size_t>(1, kCheckpointBudgetBytes / per_state);
        stride_ = std::max<std::size_t>(1, (n_ops + max_states - 1) / max_states);
        auto state = backend_.initial(circuit_.n_qubits);
        for (std::size_t i = 0; i < n_ops; ++i) {
            if (i % stride_ == 0) {
                checkpoints_.push_back(state);
            }
            backend_.apply(state, circuit_.ops[i]);
        }
        base_ = qsim::single_qubit_z_expectations(state).head(n_out_);
    }

    [[nodiscard]] const Eigen::VectorXd &base() const { return base_; }

    /// z with ops[index].theta replaced by theta + delta.
    [[nodiscard]] Eigen::VectorXd shifted(std::size_t index, double delta) const {
        const std::size_t start = (index / stride_) * stride_;
        auto state = checkpoints_[index / stride_];
        for (std::size_t i = start; i < index; ++i) {
            backend_.apply(state, circuit_.ops[i]);
        }
        qsim::GateOp op = circuit_.ops[index];
        op.theta += delta;
        backend_.apply(state, op);
        for (std::size_t i = index + 1; i < circuit_.ops.size(); ++i) {
            backend_.apply(state, circuit_.ops[i]);
        }
        return qsim::single_qubit_z_expectations(state).head(n_out_);
    }

    [[nodiscard]] Eigen::VectorXd derivative(std::size_t index) const {
        Eigen::VectorXd d = 0.5 * (shifted(index, kShift) - shifted(index, -kShift));
        return d.unaryExpr([](double v) { return std::abs(v) < kRoundoffFloor ? 0.0 : v; });
    }

  private:
    qsim::Circuit circuit_;
    int n_out_;
    Backend backend_;
    std::size_t stride_ = 1;
    std::vector<typename Backend::State> checkpoints_;
    Eigen::VectorXd base_;
};

template <typename Backend>
RawJacobian jacobian_with(const pqc::PqcArchitecture &arch, const pqc::ParameterSet &params,
                          const Eigen::VectorXd &s, pqc::Head head, Backend backend) {
    const Eigen::VectorXd x = pqc::encoding_inputs(arch, params, s, head);
    const auto tagged =
        pqc::build_tagged_circuit(arch, params.phi, pqc::encoding_angles(arch, params, x));
    const ShiftEngine<Backend> engine(tagged.circuit, arch.n_actions, std::move(backend));

    RawJacobian jac;
    jac.z = engine.base();
    jac.d_phi.resize(arch.n_actions, arch.phi_size());
    jac.d_lambda.setZero(arch.n_actions, arch.lambda_size());
    for (Eigen::Index k = 0; k < arch.phi_size(); ++k) {
        jac.d_phi.col(k) = engine.derivative(tagged.phi_ops[static_cast<std::size_t>(k)]);
    }
    const int n = arch.n_qubits;
    for (int l = 0; l < arch.n_layers; ++l) {
        for (int j = 0; j < n; ++j) {
            const Eigen::Index k = l * n + j;
            const Eigen::VectorXd g = engine.derivative(tagged.encoding_ops[static_cast<std::size_t>(k)]);
            jac.d_lambda.col(k) += g * x(j);
            if (head == pqc::Head::QValue) {
                // x_j = tanh(lambda_{0,j} s_j) feeds every layer's angle.
                const double dx = (1.0 - x(j) * x(j)) * s(j);
                jac.d_lambda.col(j) += g * params.lambda(k) * dx;
            }
        }
    }
    return jac;
}

} // namespace

RawJacobian raw_jacobian(const pqc::PqcArchitecture &arch, const pqc::ParameterSet &params,
                         const Eigen::VectorXd &s, pqc::Head head, const pqc::EvalOptions &opts) {
    if (opts.density) {
        return jacobian_with(arch, params, s, head,
                             DensityBackend{opts.noise.is_noiseless(),
                                            qsim::compose_channels(qsim::noise_channels<double>(opts.noise))});
    }
    return jacobian_with(arch, params, s, head, PureBackend{});
}

GradientSet contract(const RawJacobian &jac, const pqc::ParameterSet &params,
                     const Eigen::VectorXd &upstream) {
    if (upstream.size() != jac.z.size()) {
        throw InvalidArgument("contract: upstream has " + std::to_string(upstream.size()) +
                              " entries, expected " + std::to_string(jac.z.size()));
    }
    const Eigen::VectorXd weighted = upstream.cwiseProduct(params.w);
    GradientSet g;
    g.d_phi = jac.d_phi.transpose() * weighted;
    g.d_lambda = jac.d_lambda.transpose() * weighted;
    g.d_w = upstream.cwiseProduct(jac.z);
    return g;
}

GradientSet param_shift_grad(const pqc::PqcArchitecture &arch, const pqc::ParameterSet &params,
                             const Eigen::VectorXd &s, int action, pqc::Head head,
                             const pqc::EvalOptions &opts) {
    if (action < 0 || action >= arch.n_actions) {
        throw InvalidArgument("param_shift_grad: action " + std::to_string(action) +
                              " out of range");
    }
    const RawJacobian jac = raw_jacobian(arch, params, s, head, opts);
    return contract(jac, params, Eigen::VectorXd::Unit(arch.n_actions, action));
}

Eigen::VectorXd PqcModel::outputs(const Eigen::VectorXd &s) const {
    return params.w.cwiseProduct(pqc::raw_expectations(arch, params, s, head, opts));
}

GradientSet PqcModel::vjp(const Eigen::VectorXd &s, const Eigen::VectorXd &upstream) const {
    return contract(raw_jacobian(arch, params, s, head, opts), params, upstream);
}

} // namespace qcloud::autograd
