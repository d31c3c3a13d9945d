#pragma once

#include <vector>

#include <Eigen/Dense>

namespace qcloud::cloudenv {

/// One (s, a, r, s') interaction.
struct Transition {
    Eigen::VectorXd s;
    int a = 0;
    double r = 0.0;
    Eigen::VectorXd s_next;
    bool terminal = false;
};

/// Ordered transitions of one episode.
using Trajectory = std::vector<Transition>;

} // namespace qcloud::cloudenv
