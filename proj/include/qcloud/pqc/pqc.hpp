#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qcloud/core/random.hpp"
#include "qcloud/qsim/density.hpp"
#include "qcloud/qsim/types.hpp"

namespace qcloud::pqc {

/// Data re-uploading circuit: L encoding layers interleaved between L+1
/// variational layers. Each variational layer is RZ.RY.RZ on every qubit
/// followed by a CZ ring; each encoding layer is RX(lambda_{l,j} x_j) on
/// qubit j. Action a reads Pauli-Z on qubit a.
struct PqcArchitecture {
    int n_qubits = 8;
    int n_layers = 5;
    int n_actions = 5;

    [[nodiscard]] Eigen::Index phi_size() const { return 3 * n_qubits * (n_layers + 1); }
    [[nodiscard]] Eigen::Index lambda_size() const { return n_qubits * n_layers; }
    [[nodiscard]] Eigen::Index w_size() const { return n_actions; }
    [[nodiscard]] Eigen::Index parameter_count() const {
        return phi_size() + lambda_size() + w_size();
    }

    /// CZ pairs of one entangling ring: (j, j+1 mod n). Two qubits need one
    /// CZ, one qubit none.
    [[nodiscard]] std::vector<std::pair<int, int>> ring() const;

    void validate() const;

    friend bool operator==(const PqcArchitecture &, const PqcArchitecture &) = default;
};

/// Trainable variables. phi is indexed 3*(layer*n + qubit) + {0:RZ, 1:RY,
/// 2:RZ}; lambda is indexed layer*n + qubit; w by action.
struct ParameterSet {
    Eigen::VectorXd phi;
    Eigen::VectorXd lambda;
    Eigen::VectorXd w;

    static ParameterSet zeros(const PqcArchitecture &arch);
    /// phi ~ U(-pi, pi), lambda = 1, w = 1.
    static ParameterSet initialize(const PqcArchitecture &arch, Rng &rng);

    void validate(const PqcArchitecture &arch) const;

    friend bool operator==(const ParameterSet &a, const ParameterSet &b) {
        return a.phi == b.phi && a.lambda == b.lambda && a.w == b.w;
    }
};

/// How the observation enters the encoding layers.
enum class Head {
    Policy, ///< x_j = s_j, |s_j| <= 1 required
    QValue, ///< x_j = tanh(lambda_{0,j} s_j)
};

/// Pure-state simulation unless `density` is set, in which case the circuit
/// runs as a density matrix under `noise`.
struct EvalOptions {
    bool density = false;
    qsim::NoisePolicy noise{};
};

/// A circuit plus the op positions of every trainable angle.
struct TaggedCircuit {
    qsim::Circuit circuit;
    std::vector<std::size_t> phi_ops;      ///< op index of phi_k
    std::vector<std::size_t> encoding_ops; ///< op index of encoding angle (l, j)
};

/// Encoding inputs x for the given head.
[[nodiscard]] Eigen::VectorXd encoding_inputs(const PqcArchitecture &arch, const ParameterSet &params,
                                              const Eigen::VectorXd &s, Head head);

/// lambda_{l,j} * x_j, indexed like lambda.
[[nodiscard]] Eigen::VectorXd encoding_angles(const PqcArchitecture &arch,
                                              const ParameterSet &params, const Eigen::VectorXd &x);

[[nodiscard]] TaggedCircuit build_tagged_circuit(const PqcArchitecture &arch,
                                                 const Eigen::VectorXd &phi,
                                                 const Eigen::VectorXd &angles);

/// U_var(phi_0) U_enc(s, lambda_0) ... U_enc(s, lambda_{L-1}) U_var(phi_L)
/// applied in that order to |0...0>.
[[nodiscard]] qsim::Circuit build_circuit(const PqcArchitecture &arch, const ParameterSet &params,
                                          const Eigen::VectorXd &s);

/// <Z_q> for q < n_out after running `circuit` from |0...0>.
[[nodiscard]] Eigen::VectorXd z_expectations(const qsim::Circuit &circuit, int n_out,
                                             const EvalOptions &opts = {});

/// Unweighted <Z_{q(a)}> per action.
[[nodiscard]] Eigen::VectorXd raw_expectations(const PqcArchitecture &arch,
                                               const ParameterSet &params, const Eigen::VectorXd &s,
                                               Head head, const EvalOptions &opts = {});

/// <O_a> = w_a <Z_{q(a)}> with the raw observation encoded directly.
[[nodiscard]] Eigen::VectorXd action_expectations(const PqcArchitecture &arch,
                                                  const ParameterSet &params,
                                                  const Eigen::VectorXd &s,
                                                  const EvalOptions &opts = {});

/// Softmax of action_expectations.
[[nodiscard]] Eigen::VectorXd policy(const PqcArchitecture &arch, const ParameterSet &params,
                                     const Eigen::VectorXd &s, const EvalOptions &opts = {});

/// <O_a> evaluated on the tanh-squashed observation.
[[nodiscard]] Eigen::VectorXd q_values(const PqcArchitecture &arch, const ParameterSet &params,
                                       const Eigen::VectorXd &s, const EvalOptions &opts = {});

/// Max-subtracted softmax.
[[nodiscard]] Eigen::VectorXd softmax(const Eigen::VectorXd &logits);

} // namespace qcloud::pqc
