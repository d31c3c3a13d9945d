#include "qcloud/pqc/checkpoint.hpp"

#include <fstream>

#include "qcloud/core/flat_text.hpp"

namespace qcloud::pqc {

namespace {
constexpr const char *kFormat = "qcloud-pqc-v1";
}

void write_checkpoint(std::ostream &os, const PqcCheckpoint &ckpt) {
    ckpt.params.validate(ckpt.arch);
    FlatTextWriter w(os);
    w.comment("parameterized quantum circuit checkpoint");
    w.value("format", kFormat);
    w.value("algorithm", ckpt.algorithm.empty() ? std::string("unspecified") : ckpt.algorithm);
    w.value("n_qubits", ckpt.arch.n_qubits);
    w.value("n_layers", ckpt.arch.n_layers);
    w.value("n_actions", ckpt.arch.n_actions);
    w.array("phi", ckpt.params.phi);
    w.array("lambda", ckpt.params.lambda);
    w.array("w", ckpt.params.w);
}

PqcCheckpoint read_checkpoint(std::istream &is) {
    const FlatTextReader r(is);
    if (r.string("format") != kFormat) {
        throw ParseError("unsupported checkpoint format '" + r.string("format") + "'", 0);
    }
    PqcCheckpoint ckpt;
    ckpt.algorithm = r.string("algorithm");
    ckpt.arch.n_qubits = static_cast<int>(r.integer("n_qubits"));
    ckpt.arch.n_layers = static_cast<int>(r.integer("n_layers"));
    ckpt.arch.n_actions = static_cast<int>(r.integer("n_actions"));
    ckpt.arch.validate();
    ckpt.params.phi = r.array("phi");
    ckpt.params.lambda = r.array("lambda");
    ckpt.params.w = r.array("w");
    ckpt.params.validate(ckpt.arch);
    return ckpt;
}

void save_checkpoint(const std::filesystem::path &path, const PqcCheckpoint &ckpt) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    write_checkpoint(os, ckpt);
}

PqcCheckpoint load_checkpoint(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw Error("cannot open checkpoint '" + path.string() + "'");
    }
    return read_checkpoint(is);
}

} // namespace qcloud::pqc
