#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qcloud::workload {

struct QasmCircuitSummary {
    int n_qubits = 0;   ///< sum of qreg sizes
    int depth = 0;      ///< ASAP layer count
    int gate_count = 0; ///< measures and barriers excluded
    std::vector<std::string> warnings;
};

/// Parses a small OpenQASM 2.0 subset: qreg/creg, the gates
/// h x rx ry rz cz cx swap, measure and barrier. Gate arguments may be whole
/// registers (broadcast). Angles are numeric literals or products/quotients
/// of literals and pi. Each gate sits one layer above the latest layer of its
/// operands; a barrier lifts its qubits to their common maximum.
/// Throws ParseError carrying the offending line.
[[nodiscard]] QasmCircuitSummary parse_qasm_subset(std::string_view text);

} // namespace qcloud::workload
