#include "qcloud/workload/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qcloud/core/error.hpp"
#include "qcloud/core/random.hpp"

namespace qcloud::workload {

void WorkloadDistribution::validate() const {
    if (min_qubits < 1 || max_qubits < min_qubits) {
        throw InvalidArgument("workload: need 1 <= min_qubits <= max_qubits");
    }
    if (min_layers < 1 || max_layers <= min_layers) {
        throw InvalidArgument("workload: need 1 <= min_layers < max_layers");
    }
    if (!(target_mean_layers > min_layers && target_mean_layers < max_layers)) {
        throw InvalidArgument("workload: target_mean_layers must lie strictly inside the depth range");
    }
    if (shots < 1) {
        throw InvalidArgument("workload: shots must be >= 1");
    }
}

TaskManifest generate_workload(int n_tasks, std::uint64_t seed, const WorkloadDistribution &dist) {
    if (n_tasks < 1) {
        throw InvalidArgument("generate_workload: n_tasks must be >= 1");
    }
    dist.validate();
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(n_tasks);
    std::vector<int> widths(n);
    std::vector<double> raw(n);
    std::vector<double> density(n);
    const double log_lo = std::log(static_cast<double>(dist.min_layers));
    const double log_hi = std::log(static_cast<double>(dist.max_layers));
    const auto width_span = static_cast<std::uint64_t>(dist.max_qubits - dist.min_qubits + 1);
    for (std::size_t i = 0; i < n; ++i) {
        widths[i] = dist.min_qubits + static_cast<int>(uniform_index(rng, width_span));
        raw[i] = std::exp(uniform(rng, log_lo, log_hi));
        density[i] = uniform(rng, 0.5, 1.0);
    }

    double mean = 0.0;
    for (double d : raw) {
        mean += d;
    }
    mean /= static_cast<double>(n);
    const double lo = dist.min_layers;
    const double scale = mean > lo ? (dist.target_mean_layers - lo) / (mean - lo) : 1.0;

    TaskManifest manifest;
    manifest.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::clamp(lo + (raw[i] - lo) * scale, lo, static_cast<double>(dist.max_layers));
        const int layers = static_cast<int>(std::lround(d));
        const int gates = std::max(layers, static_cast<int>(std::lround(layers * widths[i] * density[i])));
        char id[32];
        std::snprintf(id, sizeof id, "task-%05zu", i);
        manifest.records.push_back({id, widths[i], layers, gates, dist.shots});
    }
    return manifest;
}

} // namespace qcloud::workload
