#pragma once

#include <cstddef>
#include <vector>

#include "qcloud/cloudenv/transition.hpp"
#include "qcloud/core/random.hpp"

namespace qcloud::agents {

/// Fixed-capacity FIFO of transitions.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(cloudenv::Transition t);
    [[nodiscard]] std::size_t size() const { return items_.size(); }
    [[nodiscard]] std::size_t capacity() const { return capacity_; }
    /// i-th oldest stored transition.
    [[nodiscard]] const cloudenv::Transition &at(std::size_t i) const;
    /// `n` distinct transitions drawn uniformly.
    [[nodiscard]] std::vector<cloudenv::Transition> sample(std::size_t n, Rng &rng) const;

  private:
    std::size_t capacity_;
    std::size_t head_ = 0; ///< oldest item once full
    std::vector<cloudenv::Transition> items_;
};

/// eps(k) = max(eps_min, eps_start * decay^k), k = episode index.
struct EpsilonSchedule {
    double start = 1.0;
    double min = 0.01;
    double decay = 0.99;

    [[nodiscard]] double value(int episode) const;
    void validate() const;
};

} // namespace qcloud::agents
