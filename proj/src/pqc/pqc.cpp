#include "qcloud/pqc/pqc.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcloud/qsim/statevector.hpp"

namespace qcloud::pqc {

std::vector<std::pair<int, int>> PqcArchitecture::ring() const {
    std::vector<std::pair<int, int>> pairs;
    if (n_qubits == 2) {
        pairs.emplace_back(0, 1);
    } else if (n_qubits > 2) {
        for (int j = 0; j < n_qubits; ++j) {
            pairs.emplace_back(j, (j + 1) % n_qubits);
        }
    }
    return pairs;
}

void PqcArchitecture::validate() const {
    if (n_qubits < 1 || n_qubits > qsim::StateVector<double>::kMaxQubits) {
        throw InvalidArgument("PqcArchitecture: n_qubits must be in [1, 12], got " +
                              std::to_string(n_qubits));
    }
    if (n_layers < 1) {
        throw InvalidArgument("PqcArchitecture: n_layers must be >= 1");
    }
    if (n_actions < 1 || n_actions > n_qubits) {
        throw InvalidArgument("PqcArchitecture: n_actions must be in [1, n_qubits], got " +
                              std::to_string(n_actions));
    }
}

ParameterSet ParameterSet::zeros(const PqcArchitecture &arch) {
    arch.validate();
    return {Eigen::VectorXd::Zero(arch.phi_size()), Eigen::VectorXd::Zero(arch.lambda_size()),
            Eigen::VectorXd::Zero(arch.w_size())};
}

ParameterSet ParameterSet::initialize(const PqcArchitecture &arch, Rng &rng) {
    ParameterSet p = zeros(arch);
    for (Eigen::Index i = 0; i < p.phi.size(); ++i) {
        p.phi(i) = uniform(rng, -std::numbers::pi, std::numbers::pi);
    }
    p.lambda.setOnes();
    p.w.setOnes();
    return p;
}

void ParameterSet::validate(const PqcArchitecture &arch) const {
    if (phi.size() != arch.phi_size() || lambda.size() != arch.lambda_size() ||
        w.size() != arch.w_size()) {
        throw InvalidArgument("ParameterSet: shape mismatch (phi " + std::to_string(phi.size()) +
                              "/" + std::to_string(arch.phi_size()) + ", lambda " +
                              std::to_string(lambda.size()) + "/" +
                              std::to_string(arch.lambda_size()) + ", w " +
                              std::to_string(w.size()) + "/" + std::to_string(arch.w_size()) + ")");
    }
    if (!phi.allFinite() || !lambda.allFinite() || !w.allFinite()) {
        throw InvalidArgument("ParameterSet: non-finite entry");
    }
}

namespace {

void check_observation(const PqcArchitecture &arch, const Eigen::VectorXd &s) {
    if (s.size() != arch.n_qubits) {
        throw InvalidArgument("observation has length " + std::to_string(s.size()) +
                              ", architecture expects " + std::to_string(arch.n_qubits));
    }
}

} // namespace

Eigen::VectorXd encoding_inputs(const PqcArchitecture &arch, const ParameterSet &params,
                                const Eigen::VectorXd &s, Head head) {
    arch.validate();
    params.validate(arch);
    check_observation(arch, s);
    if (head == Head::Policy) {
        if (!s.allFinite() || s.cwiseAbs().maxCoeff() > 1.0) {
            throw InvalidArgument("observation entries must satisfy |s_j| <= 1");
        }
        return s;
    }
    if (!s.allFinite()) {
        throw InvalidArgument("observation has non-finite entries");
    }
    Eigen::VectorXd x(arch.n_qubits);
    for (int j = 0; j < arch.n_qubits; ++j) {
        x(j) = std::tanh(params.lambda(j) * s(j));
    }
    return x;
}

Eigen::VectorXd encoding_angles(const PqcArchitecture &arch, const ParameterSet &params,
                                const Eigen::VectorXd &x) {
    Eigen::VectorXd angles(arch.lambda_size());
    for (int l = 0; l < arch.n_layers; ++l) {
        for (int j = 0; j < arch.n_qubits; ++j) {
            const Eigen::Index k = l * arch.n_qubits + j;
            angles(k) = params.lambda(k) * x(j);
        }
    }
    return angles;
}

TaggedCircuit build_tagged_circuit(const PqcArchitecture &arch, const Eigen::VectorXd &phi,
                                   const Eigen::VectorXd &angles) {
    arch.validate();
    if (phi.size() != arch.phi_size() || angles.size() != arch.lambda_size()) {
        throw InvalidArgument("build_circuit: parameter shapes do not match the architecture");
    }
    const int n = arch.n_qubits;
    const auto ring = arch.ring();
    TaggedCircuit out;
    out.circuit.n_qubits = n;
    out.phi_ops.resize(static_cast<std::size_t>(phi.size()));
    out.encoding_ops.resize(static_cast<std::size_t>(angles.size()));
    auto &ops = out.circuit.ops;
    ops.reserve(static_cast<std::size_t>((arch.n_layers + 1) * (3 * n + static_cast<int>(ring.size())) +
                                         arch.n_layers * n));

    auto variational = [&](int layer) {
        for (int j = 0; j < n; ++j) {
            const auto base = static_cast<std::size_t>(3 * (layer * n + j));
            const auto k = static_cast<Eigen::Index>(base);
            out.phi_ops[base] = ops.size();
            ops.push_back(qsim::GateOp::rz(j, phi(k)));
            out.phi_ops[base + 1] = ops.size();
            ops.push_back(qsim::GateOp::ry(j, phi(k + 1)));
            out.phi_ops[base + 2] = ops.size();
            ops.push_back(qsim::GateOp::rz(j, phi(k + 2)));
        }
        for (const auto &[a, b] : ring) {
            ops.push_back(qsim::GateOp::cz(a, b));
        }
    };

    for (int l = 0; l < arch.n_layers; ++l) {
        variational(l);
        for (int j = 0; j < n; ++j) {
            const auto k = static_cast<std::size_t>(l * n + j);
            out.encoding_ops[k] = ops.size();
            ops.push_back(qsim::GateOp::rx(j, angles(static_cast<Eigen::Index>(k))));
        }
    }
    variational(arch.n_layers);
    return out;
}

qsim::Circuit build_circuit(const PqcArchitecture &arch, const ParameterSet &params,
                            const Eigen::VectorXd &s) {
    const Eigen::VectorXd x = encoding_inputs(arch, params, s, Head::Policy);
    return build_tagged_circuit(arch, params.phi, encoding_angles(arch, params, x)).circuit;
}

Eigen::VectorXd z_expectations(const qsim::Circuit &circuit, int n_out, const EvalOptions &opts) {
    Eigen::VectorXd z;
    if (opts.density) {
        const auto rho = qsim::run_circuit_noisy(qsim::DensityMatrix<double>(circuit.n_qubits),
                                                 circuit, opts.noise);
        z = qsim::single_qubit_z_expectations(rho);
    } else {
        const auto psi = qsim::run_circuit(qsim::StateVector<double>(circuit.n_qubits), circuit);
        z = qsim::single_qubit_z_expectations(psi);
    }
    return z.head(n_out);
}

Eigen::VectorXd raw_expectations(const PqcArchitecture &arch, const ParameterSet &params,
                                 const Eigen::VectorXd &s, Head head, const EvalOptions &opts) {
    const Eigen::VectorXd x = encoding_inputs(arch, params, s, head);
    const auto tagged = build_tagged_circuit(arch, params.phi, encoding_angles(arch, params, x));
    return z_expectations(tagged.circuit, arch.n_actions, opts);
}

Eigen::VectorXd action_expectations(const PqcArchitecture &arch, const ParameterSet &params,
                                    const Eigen::VectorXd &s, const EvalOptions &opts) {
    return params.w.cwiseProduct(raw_expectations(arch, params, s, Head::Policy, opts));
}

Eigen::VectorXd policy(const PqcArchitecture &arch, const ParameterSet &params,
                       const Eigen::VectorXd &s, const EvalOptions &opts) {
    return softmax(action_expectations(arch, params, s, opts));
}

Eigen::VectorXd q_values(const PqcArchitecture &arch, const ParameterSet &params,
                         const Eigen::VectorXd &s, const EvalOptions &opts) {
    return params.w.cwiseProduct(raw_expectations(arch, params, s, Head::QValue, opts));
}

Eigen::VectorXd softmax(const Eigen::VectorXd &logits) {
    if (logits.size() == 0) {
        throw InvalidArgument("softmax: empty input");
    }
    const Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
    return e / e.sum();
}

} // namespace qcloud::pqc
