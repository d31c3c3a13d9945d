#include "qcloud/agents/greedy.hpp"

#include "qcloud/core/error.hpp"

namespace qcloud::agents {

int greedy_select(const cloudenv::QTask &task, std::span<const cloudenv::QNode> nodes) {
    if (nodes.empty()) {
        throw InvalidArgument("greedy_select: no nodes");
    }
    int best = -1;
    int largest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto &n = nodes[i];
        if (n.spec.n_qubits > nodes[static_cast<std::size_t>(largest)].spec.n_qubits) {
            largest = static_cast<int>(i);
        }
        if (n.spec.n_qubits < task.n_qubits) {
            continue;
        }
        if (best < 0 || n.pending_count < nodes[static_cast<std::size_t>(best)].pending_count) {
            best = static_cast<int>(i);
        }
    }
    return best >= 0 ? best : largest;
}

} // namespace qcloud::agents
