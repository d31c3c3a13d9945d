#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcloud/core/error.hpp"

namespace qcloud::qsim {

template <typename Scalar> using Complex = std::complex<Scalar>;
template <typename Scalar>
using AmpVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using CMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar> using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;
template <typename Scalar> using Matrix4c = Eigen::Matrix<Complex<Scalar>, 4, 4>;

enum class GateKind { H, X, RX, RY, RZ, CZ, CNOT, SWAP };

[[nodiscard]] constexpr int arity(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::CZ:
    case GateKind::CNOT:
    case GateKind::SWAP:
        return 2;
    default:
        return 1;
    }
}

[[nodiscard]] constexpr bool is_rotation(GateKind kind) noexcept {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

[[nodiscard]] inline std::string to_string(GateKind kind) {
    switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CZ: return "CZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
    }
    return "?";
}

/// One gate application. For two-qubit gates the local basis index is
/// bit(targets[0]) | bit(targets[1]) << 1; CNOT uses targets[0] as control.
struct GateOp {
    GateKind kind = GateKind::H;
    std::array<int, 2> targets{0, 0};
    double theta = 0.0;

    [[nodiscard]] int arity() const noexcept { return qsim::arity(kind); }

    static GateOp h(int q) { return {GateKind::H, {q, 0}, 0.0}; }
    static GateOp x(int q) { return {GateKind::X, {q, 0}, 0.0}; }
    static GateOp rx(int q, double theta) { return {GateKind::RX, {q, 0}, theta}; }
    static GateOp ry(int q, double theta) { return {GateKind::RY, {q, 0}, theta}; }
    static GateOp rz(int q, double theta) { return {GateKind::RZ, {q, 0}, theta}; }
    static GateOp cz(int a, int b) { return {GateKind::CZ, {a, b}, 0.0}; }
    static GateOp cnot(int control, int target) {
        return {GateKind::CNOT, {control, target}, 0.0};
    }
    static GateOp swap(int a, int b) { return {GateKind::SWAP, {a, b}, 0.0}; }

    friend bool operator==(const GateOp &, const GateOp &) = default;
};

[[nodiscard]] inline std::string describe(const GateOp &op) {
    std::string s = to_string(op.kind) + "(" + std::to_string(op.targets[0]);
    if (op.arity() == 2) {
        s += "," + std::to_string(op.targets[1]);
    }
    return s + ")";
}

/// Throws InvalidArgument naming the op and offending index.
inline void validate_op(const GateOp &op, int n_qubits) {
    for (int k = 0; k < op.arity(); ++k) {
        const int q = op.targets[static_cast<std::size_t>(k)];
        if (q < 0 || q >= n_qubits) {
            throw InvalidArgument("gate " + describe(op) + ": qubit index " +
                                  std::to_string(q) + " out of range for " +
                                  std::to_string(n_qubits) + " qubits");
        }
    }
    if (op.arity() == 2 && op.targets[0] == op.targets[1]) {
        throw InvalidArgument("gate " + describe(op) + ": targets must be distinct");
    }
}

struct Circuit {
    int n_qubits = 1;
    std::vector<GateOp> ops;

    void validate() const {
        for (std::size_t i = 0; i < ops.size(); ++i) {
            try {
                validate_op(ops[i], n_qubits);
            } catch (const InvalidArgument &e) {
                throw InvalidArgument("op " + std::to_string(i) + ": " + e.what());
            }
        }
    }
};

/// Pauli-Z on every qubit in the mask, identity elsewhere.
struct ZObservable {
    std::uint64_t mask = 0;

    static ZObservable on(std::initializer_list<int> qubits) {
        ZObservable obs;
        for (int q : qubits) {
            if (q < 0 || q >= 64) {
                throw InvalidArgument("ZObservable: qubit index " + std::to_string(q));
            }
            obs.mask |= std::uint64_t{1} << static_cast<unsigned>(q);
        }
        return obs;
    }
    static ZObservable single(int q) { return on({q}); }

    void validate(int n_qubits) const {
        if (n_qubits < 64 && (mask >> static_cast<unsigned>(n_qubits)) != 0) {
            throw InvalidArgument("ZObservable: mask addresses qubits beyond " +
                                  std::to_string(n_qubits));
        }
    }
};

namespace detail {

inline std::size_t dimension_for(int n_qubits, int cap, const char *what) {
    if (n_qubits < 1 || n_qubits > cap) {
        throw InvalidArgument(std::string(what) + ": n_qubits must be in [1, " +
                              std::to_string(cap) + "], got " +
                              std::to_string(n_qubits));
    }
    return std::size_t{1} << static_cast<unsigned>(n_qubits);
}

inline int qubits_for_dimension(Eigen::Index dim, const char *what) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        ++n;
    }
    if (dim < 2 || (Eigen::Index{1} << n) != dim) {
        throw InvalidArgument(std::string(what) + ": dimension " + std::to_string(dim) +
                              " is not a power of two >= 2");
    }
    return n;
}

} // namespace detail

/// Pure state of an n-qubit register, little-endian: qubit 0 is the least
/// significant bit of the basis index.
template <typename Scalar = double> class StateVector {
  public:
    static constexpr int kMaxQubits = 12;

    /// |0...0>
    explicit StateVector(int n_qubits)
        : n_qubits_(n_qubits),
          amps_(AmpVector<Scalar>::Zero(static_cast<Eigen::Index>(
              detail::dimension_for(n_qubits, kMaxQubits, "StateVector")))) {
        amps_(0) = Complex<Scalar>(1);
    }

    static StateVector basis(int n_qubits, std::size_t index) {
        StateVector psi(n_qubits);
        if (index >= psi.dimension()) {
            throw InvalidArgument("StateVector::basis: index out of range");
        }
        psi.amps_(0) = Complex<Scalar>(0);
        psi.amps_(static_cast<Eigen::Index>(index)) = Complex<Scalar>(1);
        return psi;
    }

    /// Validates length (power of two) and normalisation within `tol`.
    static StateVector from_amplitudes(AmpVector<Scalar> amps, Scalar tol = Scalar(1e-10)) {
        const int n = detail::qubits_for_dimension(amps.size(), "StateVector");
        StateVector psi(n);
        const Scalar norm2 = amps.squaredNorm();
        if (std::abs(norm2 - Scalar(1)) > tol) {
            throw InvalidArgument("StateVector: amplitudes not normalised (|psi|^2 = " +
                                  std::to_string(static_cast<double>(norm2)) + ")");
        }
        psi.amps_ = std::move(amps);
        return psi;
    }

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(amps_.size());
    }
    [[nodiscard]] const AmpVector<Scalar> &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] Complex<Scalar> operator[](std::size_t i) const {
        return amps_(static_cast<Eigen::Index>(i));
    }
    [[nodiscard]] Scalar norm_squared() const { return amps_.squaredNorm(); }

    /// Raw access for gate kernels; callers keep the state normalised.
    [[nodiscard]] Complex<Scalar> *data() noexcept { return amps_.data(); }

  private:
    int n_qubits_;
    AmpVector<Scalar> amps_;
};

/// Mixed state as a dense 2^n x 2^n matrix (column-major, same qubit order
/// as StateVector).
template <typename Scalar = double> class DensityMatrix {
  public:
    static constexpr int kMaxQubits = 8;

    /// |0...0><0...0|
    explicit DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
        const auto dim = static_cast<Eigen::Index>(
            detail::dimension_for(n_qubits, kMaxQubits, "DensityMatrix"));
        rho_ = CMatrix<Scalar>::Zero(dim, dim);
        rho_(0, 0) = Complex<Scalar>(1);
    }

    static DensityMatrix from_pure(const StateVector<Scalar> &psi) {
        DensityMatrix rho(psi.n_qubits());
        rho.rho_ = psi.amplitudes() * psi.amplitudes().adjoint();
        return rho;
    }

    /// Validates shape, Hermiticity and unit trace within `tol`.
    static DensityMatrix from_matrix(CMatrix<Scalar> m, Scalar tol = Scalar(1e-10)) {
        if (m.rows() != m.cols()) {
            throw InvalidArgument("DensityMatrix: matrix is not square");
        }
        const int n = detail::qubits_for_dimension(m.rows(), "DensityMatrix");
        DensityMatrix rho(n);
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
            throw InvalidArgument("DensityMatrix: matrix is not Hermitian");
        }
        if (std::abs(m.trace() - Complex<Scalar>(1)) > tol) {
            throw InvalidArgument("DensityMatrix: trace is not 1");
        }
        rho.rho_ = std::move(m);
        return rho;
    }

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(rho_.rows());
    }
    [[nodiscard]] const CMatrix<Scalar> &matrix() const noexcept { return rho_; }
    [[nodiscard]] CMatrix<Scalar> &mutable_matrix() noexcept { return rho_; }
    [[nodiscard]] Complex<Scalar> trace() const { return rho_.trace(); }

  private:
    int n_qubits_;
    CMatrix<Scalar> rho_;
};

/// Single-qubit CPTP map in Kraus form.
template <typename Scalar = double> struct KrausChannel {
    std::vector<Matrix2c<Scalar>> operators;

    /// max |sum_k K_k^dagger K_k - I|
    [[nodiscard]] Scalar completeness_error() const {
        Matrix2c<Scalar> sum = Matrix2c<Scalar>::Zero();
        for (const auto &k : operators) {
            sum += k.adjoint() * k;
        }
        return (sum - Matrix2c<Scalar>::Identity()).cwiseAbs().maxCoeff();
    }
};

} // namespace qcloud::qsim
