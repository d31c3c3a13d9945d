#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcloud/core/random.hpp"

namespace qcloud::agents {

/// Fully connected network with tanh hidden layers and a linear output.
struct MlpArchitecture {
    std::vector<int> widths{8, 64, 64, 64, 5};

    [[nodiscard]] int n_inputs() const { return widths.front(); }
    [[nodiscard]] int n_outputs() const { return widths.back(); }
    [[nodiscard]] int n_layers() const { return static_cast<int>(widths.size()) - 1; }
    [[nodiscard]] Eigen::Index parameter_count() const;
    /// Offset of layer l's weights in the flat vector; biases follow them.
    [[nodiscard]] Eigen::Index offset(int layer) const;

    void validate() const;

    friend bool operator==(const MlpArchitecture &, const MlpArchitecture &) = default;
};

struct MlpGradient {
    Eigen::VectorXd g;

    MlpGradient &operator+=(const MlpGradient &o) {
        g += o.g;
        return *this;
    }
    MlpGradient &operator*=(double c) {
        g *= c;
        return *this;
    }
    [[nodiscard]] bool all_finite() const { return g.allFinite(); }
    [[nodiscard]] const Eigen::VectorXd &flat() const { return g; }
};

/// Parameters are stored flat, layer by layer: W_l (column-major,
/// out x in) then b_l.
struct MlpModel {
    using Gradient = MlpGradient;

    MlpArchitecture arch;
    Eigen::VectorXd theta;

    static MlpModel zeros(const MlpArchitecture &arch);
    /// Glorot-uniform weights, zero biases.
    static MlpModel initialize(const MlpArchitecture &arch, Rng &rng);

    [[nodiscard]] Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
    [[nodiscard]] Eigen::Map<const Eigen::VectorXd> bias(int layer) const;

    [[nodiscard]] Eigen::VectorXd outputs(const Eigen::VectorXd &s) const;
    /// sum_k upstream_k d out_k / d theta via backpropagation.
    [[nodiscard]] MlpGradient vjp(const Eigen::VectorXd &s, const Eigen::VectorXd &upstream) const;
    [[nodiscard]] MlpGradient zero_gradient() const { return {Eigen::VectorXd::Zero(theta.size())}; }
    [[nodiscard]] Eigen::Index parameter_count() const { return theta.size(); }
};

/// Text checkpoint: format qcloud-mlp-v1, algorithm, widths, theta.
struct MlpCheckpoint {
    std::string algorithm;
    MlpModel model;
};

void write_mlp_checkpoint(std::ostream &os, const MlpCheckpoint &ckpt);
[[nodiscard]] MlpCheckpoint read_mlp_checkpoint(std::istream &is);
void save_mlp_checkpoint(const std::filesystem::path &path, const MlpCheckpoint &ckpt);
[[nodiscard]] MlpCheckpoint load_mlp_checkpoint(const std::filesystem::path &path);

} // namespace qcloud::agents
