#pragma once

#include <span>

#include "qcloud/cloudenv/env.hpp"

namespace qcloud::agents {

/// Least-pending node among those wide enough for the task, lowest index on
/// ties. With no wide-enough node, the largest node (accepting the penalty).
[[nodiscard]] int greedy_select(const cloudenv::QTask &task, std::span<const cloudenv::QNode> nodes);

[[nodiscard]] inline int greedy_select(const cloudenv::CloudEnv &env) {
    return greedy_select(env.current_task(), env.nodes());
}

} // namespace qcloud::agents
