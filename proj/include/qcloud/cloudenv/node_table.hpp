#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qcloud::cloudenv {

/// Static description of one QPU.
struct NodeSpec {
    std::string id;
    int n_qubits = 0;
    double clops = 0.0; ///< circuit layer operations per second
    double eplg = 0.0;  ///< error per layered gate; reported only

    void validate() const;

    friend bool operator==(const NodeSpec &, const NodeSpec &) = default;
};

/// Marrakesh, Torino, Quebec, Brisbane, Kolkata.
[[nodiscard]] std::vector<NodeSpec> default_node_table();

/// JSON: {"nodes": [{"id", "n_qubits", "clops", "eplg"}, ...]}
[[nodiscard]] std::vector<NodeSpec> parse_node_table(std::string_view json_text);
[[nodiscard]] std::vector<NodeSpec> load_node_table(const std::filesystem::path &path);
[[nodiscard]] std::string node_table_json(const std::vector<NodeSpec> &nodes);

} // namespace qcloud::cloudenv
