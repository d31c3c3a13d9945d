#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qcloud/pqc/pqc.hpp"

namespace qcloud::pqc {

/// On-disk PQC checkpoint. Field order is fixed:
///
///   format qcloud-pqc-v1
///   algorithm <name>
///   n_qubits <int>
///   n_layers <int>
///   n_actions <int>
///   phi <count> <values...>
///   lambda <count> <values...>
///   w <count> <values...>
///
/// Lines starting with '#' are comments. Values use 17 significant digits.
struct PqcCheckpoint {
    std::string algorithm;
    PqcArchitecture arch;
    ParameterSet params;
};

void write_checkpoint(std::ostream &os, const PqcCheckpoint &ckpt);
[[nodiscard]] PqcCheckpoint read_checkpoint(std::istream &is);

void save_checkpoint(const std::filesystem::path &path, const PqcCheckpoint &ckpt);
[[nodiscard]] PqcCheckpoint load_checkpoint(const std::filesystem::path &path);

} // namespace qcloud::pqc
