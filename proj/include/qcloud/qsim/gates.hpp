#pragma once

#include <cmath>
#include <numbers>

#include "qcloud/qsim/types.hpp"

namespace qcloud::qsim {

/// 2x2 matrix of a single-qubit gate. Rotations follow
/// R_a(theta) = exp(-i theta sigma_a / 2).
template <typename Scalar>
[[nodiscard]] Matrix2c<Scalar> single_qubit_matrix(GateKind kind, Scalar theta = Scalar(0)) {
    using C = Complex<Scalar>;
    const Scalar c = std::cos(theta / 2);
    const Scalar s = std::sin(theta / 2);
    Matrix2c<Scalar> m;
    switch (kind) {
    case GateKind::H: {
        const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
        m << C(r), C(r), C(r), C(-r);
        break;
    }
    case GateKind::X:
        m << C(0), C(1), C(1), C(0);
        break;
    case GateKind::RX:
        m << C(c), C(0, -s), C(0, -s), C(c);
        break;
    case GateKind::RY:
        m << C(c), C(-s), C(s), C(c);
        break;
    case GateKind::RZ:
        m << std::polar(Scalar(1), -theta / 2), C(0), C(0), std::polar(Scalar(1), theta / 2);
        break;
    default:
        throw InvalidArgument("single_qubit_matrix: " + to_string(kind) + " is a two-qubit gate");
    }
    return m;
}

/// 4x4 matrix in the local basis k = bit(targets[0]) | bit(targets[1]) << 1.
template <typename Scalar> [[nodiscard]] Matrix4c<Scalar> two_qubit_matrix(GateKind kind) {
    using C = Complex<Scalar>;
    Matrix4c<Scalar> m = Matrix4c<Scalar>::Zero();
    switch (kind) {
    case GateKind::CZ:
        m.diagonal() << C(1), C(1), C(1), C(-1);
        break;
    case GateKind::CNOT:
        // control = local bit 0: |c=1,t> -> |c=1,t^1>, i.e. 1 <-> 3
        m(0, 0) = m(2, 2) = C(1);
        m(3, 1) = m(1, 3) = C(1);
        break;
    case GateKind::SWAP:
        m(0, 0) = m(3, 3) = C(1);
        m(2, 1) = m(1, 2) = C(1);
        break;
    default:
        throw InvalidArgument("two_qubit_matrix: " + to_string(kind) + " is a single-qubit gate");
    }
    return m;
}

/// Local matrix of `op` (2x2 or 4x4).
template <typename Scalar> [[nodiscard]] CMatrix<Scalar> gate_matrix(const GateOp &op) {
    if (op.arity() == 1) {
        return single_qubit_matrix<Scalar>(op.kind, static_cast<Scalar>(op.theta));
    }
    return two_qubit_matrix<Scalar>(op.kind);
}

namespace kernels {

/// Index with a zero inserted at bit position `q`.
[[nodiscard]] inline std::size_t insert_zero(std::size_t k, int q) noexcept {
    const std::size_t low = k & ((std::size_t{1} << q) - 1);
    return ((k >> q) << (q + 1)) | low;
}

/// Apply a 2x2 matrix to bit `q` of a strided vector of length `dim`.
template <typename Scalar, typename Mat>
void apply_1q(Complex<Scalar> *data, std::ptrdiff_t stride, std::size_t dim, int q, const Mat &m) {
    const std::size_t bit = std::size_t{1} << q;
    const Complex<Scalar> m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    for (std::size_t k = 0; k < dim / 2; ++k) {
        const std::size_t i0 = insert_zero(k, q);
        auto &a0 = data[static_cast<std::ptrdiff_t>(i0) * stride];
        auto &a1 = data[static_cast<std::ptrdiff_t>(i0 | bit) * stride];
        const Complex<Scalar> v0 = a0;
        const Complex<Scalar> v1 = a1;
        a0 = m00 * v0 + m01 * v1;
        a1 = m10 * v0 + m11 * v1;
    }
}

/// Apply a 4x4 matrix to bits (q0, q1) of a strided vector.
template <typename Scalar, typename Mat>
void apply_2q(Complex<Scalar> *data, std::ptrdiff_t stride, std::size_t dim, int q0, int q1,
              const Mat &m) {
    const std::size_t b0 = std::size_t{1} << q0;
    const std::size_t b1 = std::size_t{1} << q1;
    const int lo = std::min(q0, q1);
    const int hi = std::max(q0, q1);
    for (std::size_t k = 0; k < dim / 4; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, lo), hi);
        const std::array<std::size_t, 4> idx{base, base | b0, base | b1, base | b0 | b1};
        std::array<Complex<Scalar>, 4> v;
        for (std::size_t j = 0; j < 4; ++j) {
            v[j] = data[static_cast<std::ptrdiff_t>(idx[j]) * stride];
        }
        for (std::size_t r = 0; r < 4; ++r) {
            Complex<Scalar> acc(0);
            for (std::size_t c = 0; c < 4; ++c) {
                acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * v[c];
            }
            data[static_cast<std::ptrdiff_t>(idx[r]) * stride] = acc;
        }
    }
}

/// Apply `op` to a strided vector, using dedicated paths for diagonal and
/// permutation gates.
template <typename Scalar>
void apply_op(Complex<Scalar> *data, std::ptrdiff_t stride, std::size_t dim, const GateOp &op,
              bool conjugate = false) {
    const int q0 = op.targets[0];
    const int q1 = op.targets[1];
    switch (op.kind) {
    case GateKind::RZ: {
        const Scalar half = static_cast<Scalar>(op.theta) / 2;
        const Complex<Scalar> p0 = std::polar(Scalar(1), conjugate ? half : -half);
        const Complex<Scalar> p1 = std::conj(p0);
        const std::size_t bit = std::size_t{1} << q0;
        for (std::size_t i = 0; i < dim; ++i) {
            data[static_cast<std::ptrdiff_t>(i) * stride] *= (i & bit) ? p1 : p0;
        }
        return;
    }
    case GateKind::X: {
        const std::size_t bit = std::size_t{1} << q0;
        for (std::size_t k = 0; k < dim / 2; ++k) {
            const std::size_t i0 = insert_zero(k, q0);
            std::swap(data[static_cast<std::ptrdiff_t>(i0) * stride],
                      data[static_cast<std::ptrdiff_t>(i0 | bit) * stride]);
        }
        return;
    }
    case GateKind::CZ: {
        const std::size_t both = (std::size_t{1} << q0) | (std::size_t{1} << q1);
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & both) == both) {
                data[static_cast<std::ptrdiff_t>(i) * stride] *= Scalar(-1);
            }
        }
        return;
    }
    case GateKind::CNOT:
    case GateKind::SWAP:
        apply_2q<Scalar>(data, stride, dim, q0, q1, two_qubit_matrix<Scalar>(op.kind));
        return;
    default: {
        Matrix2c<Scalar> m = single_qubit_matrix<Scalar>(op.kind, static_cast<Scalar>(op.theta));
        if (conjugate) {
            m = m.conjugate().eval();
        }
        apply_1q<Scalar>(data, stride, dim, q0, m);
        return;
    }
    }
}

} // namespace kernels
} // namespace qcloud::qsim
