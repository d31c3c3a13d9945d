#pragma once

#include <bit>

#include "qcloud/qsim/gates.hpp"

namespace qcloud::qsim {

/// K0 = diag(1, sqrt(1-gamma)), K1 = sqrt(gamma) |0><1|.
template <typename Scalar = double>
[[nodiscard]] KrausChannel<Scalar> amplitude_damping(Scalar gamma) {
    if (!(gamma >= Scalar(0) && gamma <= Scalar(1))) {
        throw InvalidArgument("amplitude_damping: gamma must be in [0, 1]");
    }
    using C = Complex<Scalar>;
    Matrix2c<Scalar> k0;
    Matrix2c<Scalar> k1;
    k0 << C(1), C(0), C(0), C(std::sqrt(Scalar(1) - gamma));
    k1 << C(0), C(std::sqrt(gamma)), C(0), C(0);
    return {{k0, k1}};
}

/// {sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}
template <typename Scalar = double> [[nodiscard]] KrausChannel<Scalar> depolarizing(Scalar p) {
    if (!(p >= Scalar(0) && p <= Scalar(1))) {
        throw InvalidArgument("depolarizing: p must be in [0, 1]");
    }
    using C = Complex<Scalar>;
    const Scalar a = std::sqrt(Scalar(1) - Scalar(3) * p / Scalar(4));
    const Scalar b = std::sqrt(p / Scalar(4));
    Matrix2c<Scalar> i;
    Matrix2c<Scalar> x;
    Matrix2c<Scalar> y;
    Matrix2c<Scalar> z;
    i << C(a), C(0), C(0), C(a);
    x << C(0), C(b), C(b), C(0);
    y << C(0), C(0, -b), C(0, b), C(0);
    z << C(b), C(0), C(0), C(-b);
    return {{i, x, y, z}};
}

/// Per-gate noise: after every gate the configured channels act on that
/// gate's target qubits (amplitude damping first, then depolarizing).
/// A zero strength disables the corresponding channel.
struct NoisePolicy {
    double amplitude_damping = 0.0;
    double depolarizing = 0.0;

    [[nodiscard]] bool is_noiseless() const noexcept {
        return amplitude_damping == 0.0 && depolarizing == 0.0;
    }
};

template <typename Scalar> using Matrix4c = Eigen::Matrix<Complex<Scalar>, 4, 4>;

/// Channel acting on one qubit's 2x2 block (b00, b01, b10, b11) of rho.
template <typename Scalar>
[[nodiscard]] Matrix4c<Scalar> superoperator(const KrausChannel<Scalar> &channel) {
    Matrix4c<Scalar> s = Matrix4c<Scalar>::Zero();
    for (const auto &k : channel.operators) {
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                for (int rp = 0; rp < 2; ++rp) {
                    for (int cp = 0; cp < 2; ++cp) {
                        s(2 * r + c, 2 * rp + cp) += k(r, rp) * std::conj(k(c, cp));
                    }
                }
            }
        }
    }
    return s;
}

/// Applies a block superoperator on qubit `q`.
template <typename Scalar>
void apply_superoperator(DensityMatrix<Scalar> &rho, const Matrix4c<Scalar> &s, int q) {
    if (q < 0 || q >= rho.n_qubits()) {
        throw InvalidArgument("apply_channel: qubit index " + std::to_string(q) + " out of range");
    }
    auto &m = rho.mutable_matrix();
    const auto dim = static_cast<Eigen::Index>(rho.dimension());
    const Eigen::Index bit = Eigen::Index{1} << q;
    Eigen::Matrix<Complex<Scalar>, 4, 1> b;
    for (Eigen::Index c = 0; c < dim; ++c) {
        if (c & bit) {
            continue;
        }
        for (Eigen::Index r = 0; r < dim; ++r) {
            if (r & bit) {
                continue;
            }
            b << m(r, c), m(r, c | bit), m(r | bit, c), m(r | bit, c | bit);
            b = s * b;
            m(r, c) = b(0);
            m(r, c | bit) = b(1);
            m(r | bit, c) = b(2);
            m(r | bit, c | bit) = b(3);
        }
    }
}

/// rho -> sum_k K_k rho K_k^dagger on qubit `q`.
template <typename Scalar>
void apply_channel(DensityMatrix<Scalar> &rho, const KrausChannel<Scalar> &channel, int q) {
    apply_superoperator(rho, superoperator(channel), q);
}

/// rho -> U rho U^dagger
template <typename Scalar> void apply_gate_inplace(DensityMatrix<Scalar> &rho, const GateOp &op) {
    validate_op(op, rho.n_qubits());
    auto &m = rho.mutable_matrix();
    const auto dim = rho.dimension();
    const auto ld = static_cast<std::ptrdiff_t>(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        kernels::apply_op<Scalar>(m.data() + static_cast<std::ptrdiff_t>(c) * ld, 1, dim, op);
    }
    for (std::size_t r = 0; r < dim; ++r) {
        kernels::apply_op<Scalar>(m.data() + static_cast<std::ptrdiff_t>(r), ld, dim, op, true);
    }
}

/// Channels realising `noise`, in application order.
template <typename Scalar>
[[nodiscard]] std::vector<KrausChannel<Scalar>> noise_channels(const NoisePolicy &noise) {
    std::vector<KrausChannel<Scalar>> channels;
    if (noise.amplitude_damping != 0.0) {
        channels.push_back(amplitude_damping<Scalar>(static_cast<Scalar>(noise.amplitude_damping)));
    }
    if (noise.depolarizing != 0.0) {
        channels.push_back(depolarizing<Scalar>(static_cast<Scalar>(noise.depolarizing)));
    }
    return channels;
}

/// Composition of `channels` in order; identity when empty.
template <typename Scalar>
[[nodiscard]] Matrix4c<Scalar> compose_channels(const std::vector<KrausChannel<Scalar>> &channels) {
    Matrix4c<Scalar> s = Matrix4c<Scalar>::Identity();
    for (const auto &ch : channels) {
        s = superoperator(ch) * s;
    }
    return s;
}

/// Gate conjugation followed by the composed noise on each of the gate's targets.
template <typename Scalar>
void apply_noisy_gate_inplace(DensityMatrix<Scalar> &rho, const GateOp &op, const Matrix4c<Scalar> &noise) {
    apply_gate_inplace(rho, op);
    for (int k = 0; k < op.arity(); ++k) {
        apply_superoperator(rho, noise, op.targets[static_cast<std::size_t>(k)]);
    }
}

template <typename Scalar>
void apply_noisy_gate_inplace(DensityMatrix<Scalar> &rho, const GateOp &op,
                              const std::vector<KrausChannel<Scalar>> &channels) {
    if (channels.empty()) {
        apply_gate_inplace(rho, op);
        return;
    }
    apply_noisy_gate_inplace(rho, op, compose_channels(channels));
}

template <typename Scalar>
[[nodiscard]] DensityMatrix<Scalar> run_circuit_noisy(DensityMatrix<Scalar> rho, const Circuit &circuit,
                                                      const NoisePolicy &noise) {
    if (circuit.n_qubits != rho.n_qubits()) {
        throw InvalidArgument("run_circuit_noisy: circuit has " +
                              std::to_string(circuit.n_qubits) + " qubits, state has " +
                              std::to_string(rho.n_qubits()));
    }
    const auto channels = noise_channels<Scalar>(noise);
    const Matrix4c<Scalar> composed = compose_channels(channels);
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        try {
            if (channels.empty()) {
                apply_gate_inplace(rho, circuit.ops[i]);
            } else {
                apply_noisy_gate_inplace(rho, circuit.ops[i], composed);
            }
        } catch (const InvalidArgument &e) {
            throw InvalidArgument("op " + std::to_string(i) + ": " + e.what());
        }
    }
    return rho;
}

/// Re Tr(rho Z_mask)
template <typename Scalar>
[[nodiscard]] Scalar expectation_z_density(const DensityMatrix<Scalar> &rho, const ZObservable &obs) {
    obs.validate(rho.n_qubits());
    Scalar acc(0);
    const auto &m = rho.matrix();
    for (std::size_t b = 0; b < rho.dimension(); ++b) {
        const Scalar p = std::real(m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)));
        acc += (std::popcount(b & obs.mask) & 1U) ? -p : p;
    }
    return acc;
}

/// Tr(rho Z_q) for every qubit.
template <typename Scalar>
[[nodiscard]] Eigen::Matrix<Scalar, Eigen::Dynamic, 1>
single_qubit_z_expectations(const DensityMatrix<Scalar> &rho) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(rho.n_qubits());
    const auto &m = rho.matrix();
    for (std::size_t b = 0; b < rho.dimension(); ++b) {
        const Scalar p = std::real(m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)));
        for (int q = 0; q < rho.n_qubits(); ++q) {
            z(q) += ((b >> q) & 1U) ? -p : p;
        }
    }
    return z;
}

} // namespace qcloud::qsim
