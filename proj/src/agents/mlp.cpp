#include "qcloud/agents/mlp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qcloud/core/error.hpp"
#include "qcloud/core/flat_text.hpp"

namespace qcloud::agents {

Eigen::Index MlpArchitecture::parameter_count() const { return offset(n_layers()); }

Eigen::Index MlpArchitecture::offset(int layer) const {
    Eigen::Index off = 0;
    for (int l = 0; l < layer; ++l) {
        off += static_cast<Eigen::Index>(widths[static_cast<std::size_t>(l) + 1]) *
               (widths[static_cast<std::size_t>(l)] + 1);
    }
    return off;
}

void MlpArchitecture::validate() const {
    if (widths.size() < 2) {
        throw InvalidArgument("mlp: need at least input and output widths");
    }
    for (int w : widths) {
        if (w < 1) {
            throw InvalidArgument("mlp: layer widths must be >= 1");
        }
    }
}

MlpModel MlpModel::zeros(const MlpArchitecture &arch) {
    arch.validate();
    return {arch, Eigen::VectorXd::Zero(arch.parameter_count())};
}

MlpModel MlpModel::initialize(const MlpArchitecture &arch, Rng &rng) {
    MlpModel m = zeros(arch);
    for (int l = 0; l < arch.n_layers(); ++l) {
        const int fan_in = arch.widths[static_cast<std::size_t>(l)];
        const int fan_out = arch.widths[static_cast<std::size_t>(l) + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        const Eigen::Index off = arch.offset(l);
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(fan_in) * fan_out; ++k) {
            m.theta(off + k) = uniform(rng, -limit, limit);
        }
    }
    return m;
}

Eigen::Map<const Eigen::MatrixXd> MlpModel::weight(int layer) const {
    const auto l = static_cast<std::size_t>(layer);
    return {theta.data() + arch.offset(layer), arch.widths[l + 1], arch.widths[l]};
}

Eigen::Map<const Eigen::VectorXd> MlpModel::bias(int layer) const {
    const auto l = static_cast<std::size_t>(layer);
    const Eigen::Index n_w = static_cast<Eigen::Index>(arch.widths[l + 1]) * arch.widths[l];
    return {theta.data() + arch.offset(layer) + n_w, arch.widths[l + 1]};
}

Eigen::VectorXd MlpModel::outputs(const Eigen::VectorXd &s) const {
    if (s.size() != arch.n_inputs()) {
        throw InvalidArgument("mlp: observation has " + std::to_string(s.size()) + " entries, expected " +
                              std::to_string(arch.n_inputs()));
    }
    Eigen::VectorXd h = s;
    for (int l = 0; l < arch.n_layers(); ++l) {
        h = weight(l) * h + bias(l);
        if (l + 1 < arch.n_layers()) {
            h = h.array().tanh();
        }
    }
    return h;
}

MlpGradient MlpModel::vjp(const Eigen::VectorXd &s, const Eigen::VectorXd &upstream) const {
    if (upstream.size() != arch.n_outputs()) {
        throw InvalidArgument("mlp: upstream size mismatch");
    }
    (void)outputs(s); // shape check
    const int n = arch.n_layers();
    std::vector<Eigen::VectorXd> acts{s};
    for (int l = 0; l < n; ++l) {
        Eigen::VectorXd z = weight(l) * acts.back() + bias(l);
        acts.push_back(l + 1 < n ? Eigen::VectorXd(z.array().tanh()) : z);
    }
    MlpGradient grad = zero_gradient();
    Eigen::VectorXd delta = upstream;
    for (int l = n - 1; l >= 0; --l) {
        const auto &in = acts[static_cast<std::size_t>(l)];
        const Eigen::Index off = arch.offset(l);
        const Eigen::Index rows = delta.size();
        Eigen::Map<Eigen::MatrixXd>(grad.g.data() + off, rows, in.size()) = delta * in.transpose();
        grad.g.segment(off + rows * in.size(), rows) = delta;
        if (l > 0) {
            delta = (weight(l).transpose() * delta).cwiseProduct((1.0 - in.array().square()).matrix());
        }
    }
    return grad;
}

void write_mlp_checkpoint(std::ostream &os, const MlpCheckpoint &ckpt) {
    FlatTextWriter w(os);
    w.value("format", "qcloud-mlp-v1");
    w.value("algorithm", ckpt.algorithm);
    Eigen::VectorXd widths(static_cast<Eigen::Index>(ckpt.model.arch.widths.size()));
    for (std::size_t i = 0; i < ckpt.model.arch.widths.size(); ++i) {
        widths(static_cast<Eigen::Index>(i)) = ckpt.model.arch.widths[i];
    }
    w.array("widths", widths);
    w.array("theta", ckpt.model.theta);
}

MlpCheckpoint read_mlp_checkpoint(std::istream &is) {
    const FlatTextReader r(is);
    if (r.string("format") != "qcloud-mlp-v1") {
        throw ParseError("unsupported checkpoint format '" + r.string("format") + "'", 0);
    }
    MlpCheckpoint ckpt;
    ckpt.algorithm = r.string("algorithm");
    const Eigen::VectorXd widths = r.array("widths");
    ckpt.model.arch.widths.clear();
    for (double v : widths) {
        ckpt.model.arch.widths.push_back(static_cast<int>(v));
    }
    ckpt.model.arch.validate();
    ckpt.model.theta = r.array("theta");
    if (ckpt.model.theta.size() != ckpt.model.arch.parameter_count()) {
        throw InvalidArgument("mlp checkpoint: theta has " + std::to_string(ckpt.model.theta.size()) +
                              " values, architecture needs " +
                              std::to_string(ckpt.model.arch.parameter_count()));
    }
    return ckpt;
}

void save_mlp_checkpoint(const std::filesystem::path &path, const MlpCheckpoint &ckpt) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write checkpoint " + path.string());
    }
    write_mlp_checkpoint(out, ckpt);
}

MlpCheckpoint load_mlp_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open checkpoint " + path.string());
    }
    return read_mlp_checkpoint(in);
}

} // namespace qcloud::agents
