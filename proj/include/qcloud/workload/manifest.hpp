#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qcloud::workload {

/// Scalar metrics of one circuit; all the environment needs.
struct TaskRecord {
    std::string id;
    int n_qubits = 0;
    int layers = 0;
    int gate_count = 0;
    int shots = 1024;

    /// n_qubits, layers, shots >= 1 and gate_count >= layers.
    void validate() const;

    friend bool operator==(const TaskRecord &, const TaskRecord &) = default;
};

struct TaskManifest {
    std::vector<TaskRecord> records;

    void validate() const;
    [[nodiscard]] int max_layers() const;
    [[nodiscard]] int max_qubits() const;
    [[nodiscard]] bool empty() const { return records.empty(); }
    [[nodiscard]] std::size_t size() const { return records.size(); }

    friend bool operator==(const TaskManifest &, const TaskManifest &) = default;
};

inline constexpr const char *kManifestHeader = "id,n_qubits,layers,gate_count,shots";

/// CSV with kManifestHeader, LF line endings.
void write_manifest(std::ostream &out, const TaskManifest &manifest);
[[nodiscard]] TaskManifest read_manifest(std::istream &in);

void save_manifest(const std::filesystem::path &path, const TaskManifest &manifest);
[[nodiscard]] TaskManifest load_manifest(const std::filesystem::path &path);

} // namespace qcloud::workload
