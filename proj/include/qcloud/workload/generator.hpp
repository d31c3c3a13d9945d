#pragma once

#include <cstdint>

#include "qcloud/workload/manifest.hpp"

namespace qcloud::workload {

/// Benchmark-like task distribution. Widths are uniform integers; depths are
/// log-uniform, then (d - min_layers) is rescaled so the sample mean lands
/// on target_mean_layers.
struct WorkloadDistribution {
    int min_qubits = 2;
    int max_qubits = 50;
    int min_layers = 2;
    int max_layers = 17598;
    double target_mean_layers = 400.0;
    int shots = 1024;

    void validate() const;
};

[[nodiscard]] TaskManifest generate_workload(int n_tasks, std::uint64_t seed,
                                             const WorkloadDistribution &dist = {});

} // namespace qcloud::workload
