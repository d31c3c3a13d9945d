#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "qcloud/core/random.hpp"
#include "qcloud/qsim/gates.hpp"

namespace qcloud::qsim {

template <typename Scalar> void apply_gate_inplace(StateVector<Scalar> &psi, const GateOp &op) {
    validate_op(op, psi.n_qubits());
    kernels::apply_op<Scalar>(psi.data(), 1, psi.dimension(), op);
}

/// U|psi>
template <typename Scalar>
[[nodiscard]] StateVector<Scalar> apply_gate(StateVector<Scalar> psi, const GateOp &op) {
    apply_gate_inplace(psi, op);
    return psi;
}

template <typename Scalar>
void run_circuit_inplace(StateVector<Scalar> &psi, const Circuit &circuit) {
    if (circuit.n_qubits != psi.n_qubits()) {
        throw InvalidArgument("run_circuit: circuit has " + std::to_string(circuit.n_qubits) +
                              " qubits, state has " + std::to_string(psi.n_qubits()));
    }
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        try {
            apply_gate_inplace(psi, circuit.ops[i]);
        } catch (const InvalidArgument &e) {
            throw InvalidArgument("op " + std::to_string(i) + ": " + e.what());
        }
    }
}

/// Applies the ops of `circuit` in order.
template <typename Scalar>
[[nodiscard]] StateVector<Scalar> run_circuit(StateVector<Scalar> initial, const Circuit &circuit) {
    run_circuit_inplace(initial, circuit);
    return initial;
}

/// sum_b (-1)^{popcount(b & mask)} |psi_b|^2
template <typename Scalar>
[[nodiscard]] Scalar expectation_z(const StateVector<Scalar> &psi, const ZObservable &obs) {
    obs.validate(psi.n_qubits());
    Scalar acc(0);
    const auto &amps = psi.amplitudes();
    for (std::size_t b = 0; b < psi.dimension(); ++b) {
        const Scalar p = std::norm(amps(static_cast<Eigen::Index>(b)));
        acc += (std::popcount(b & obs.mask) & 1U) ? -p : p;
    }
    return acc;
}

/// <Z_q> for every qubit in one pass over the amplitudes.
template <typename Scalar>
[[nodiscard]] Eigen::Matrix<Scalar, Eigen::Dynamic, 1>
single_qubit_z_expectations(const StateVector<Scalar> &psi) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(psi.n_qubits());
    const auto &amps = psi.amplitudes();
    for (std::size_t b = 0; b < psi.dimension(); ++b) {
        const Scalar p = std::norm(amps(static_cast<Eigen::Index>(b)));
        for (int q = 0; q < psi.n_qubits(); ++q) {
            z(q) += ((b >> q) & 1U) ? -p : p;
        }
    }
    return z;
}

/// Bitstring of basis index `b`, qubit 0 rightmost.
[[nodiscard]] inline std::string bitstring(std::size_t b, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q) {
        if ((b >> q) & 1U) {
            s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
        }
    }
    return s;
}

/// Draws `shots` computational-basis outcomes with probabilities |psi_b|^2.
/// Identical seeds give identical maps.
template <typename Scalar>
[[nodiscard]] std::map<std::string, std::uint64_t>
sample_measurement(const StateVector<Scalar> &psi, std::uint64_t shots, std::uint64_t rng_seed) {
    if (shots < 1) {
        throw InvalidArgument("sample_measurement: shots must be >= 1");
    }
    const std::size_t dim = psi.dimension();
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::size_t b = 0; b < dim; ++b) {
        acc += static_cast<double>(std::norm(psi[b]));
        cdf[b] = acc;
    }
    Rng rng(rng_seed);
    std::vector<std::uint64_t> counts(dim, 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = uniform01(rng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t b = static_cast<std::size_t>(it - cdf.begin());
        if (b >= dim) {
            b = dim - 1;
        }
        ++counts[b];
    }
    std::map<std::string, std::uint64_t> out;
    for (std::size_t b = 0; b < dim; ++b) {
        if (counts[b] > 0) {
            out.emplace(bitstring(b, psi.n_qubits()), counts[b]);
        }
    }
    return out;
}

} // namespace qcloud::qsim
