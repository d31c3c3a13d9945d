#include "qcloud/agents/replay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcloud/core/error.hpp"

namespace qcloud::agents {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw InvalidArgument("replay buffer capacity must be >= 1");
    }
    items_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::push(cloudenv::Transition t) {
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
        return;
    }
    items_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

const cloudenv::Transition &ReplayBuffer::at(std::size_t i) const {
    if (i >= items_.size()) {
        throw InvalidArgument("replay buffer index out of range");
    }
    return items_[(head_ + i) % items_.size()];
}

std::vector<cloudenv::Transition> ReplayBuffer::sample(std::size_t n, Rng &rng) const {
    if (n > items_.size()) {
        throw InvalidArgument("cannot sample " + std::to_string(n) + " from " +
                              std::to_string(items_.size()) + " transitions");
    }
    // Partial Fisher-Yates over indices.
    std::vector<std::size_t> idx(items_.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<cloudenv::Transition> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = k + uniform_index(rng, idx.size() - k);
        std::swap(idx[k], idx[j]);
        out.push_back(items_[idx[k]]);
    }
    return out;
}

double EpsilonSchedule::value(int episode) const {
    return std::max(min, start * std::pow(decay, episode));
}

void EpsilonSchedule::validate() const {
    if (!(min >= 0.0 && min <= start && start <= 1.0 && decay > 0.0 && decay <= 1.0)) {
        throw InvalidArgument("epsilon schedule: need 0 <= min <= start <= 1 and decay in (0, 1]");
    }
}

} // namespace qcloud::agents
