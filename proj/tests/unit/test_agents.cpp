#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "qcloud/agents/evaluate.hpp"
#include "qcloud/agents/greedy.hpp"
#include "qcloud/agents/mlp.hpp"
#include "qcloud/agents/replay.hpp"
#include "qcloud/agents/training.hpp"
#include "qcloud/autograd/finite_diff.hpp"
#include "qcloud/workload/generator.hpp"

using namespace qcloud;
using namespace qcloud::agents;
using cloudenv::QNode;
using cloudenv::QTask;

namespace {

std::vector<QNode> make_nodes(const std::vector<int> &caps, const std::vector<int> &pending) {
    std::vector<QNode> nodes;
    for (std::size_t i = 0; i < caps.size(); ++i) {
        nodes.push_back({{"n" + std::to_string(i), caps[i], 1000.0, 0.0}, 0.0, pending[i]});
    }
    return nodes;
}

QTask task_of_width(int w) { return {"t", 0.0, w, 10, 10, 1024}; }

cloudenv::Transition dummy(double r) {
    return {Eigen::VectorXd::Constant(2, r), 0, r, Eigen::VectorXd::Zero(2), false};
}

} // namespace

TEST_CASE("greedy examples") {
    CHECK(greedy_select(task_of_width(40), make_nodes({156, 133, 127}, {3, 0, 2})) == 1);
    CHECK(greedy_select(task_of_width(140), make_nodes({156, 133, 127, 127, 27}, {9, 0, 0, 0, 0})) == 0);
    CHECK(greedy_select(task_of_width(2), make_nodes({10, 10}, {0, 0})) == 0);
    // No node is wide enough: largest node.
    CHECK(greedy_select(task_of_width(500), make_nodes({27, 156, 133}, {0, 5, 0})) == 1);
    CHECK_THROWS_AS((void)greedy_select(task_of_width(1), std::vector<QNode>{}), InvalidArgument);
}

TEST_CASE("greedy matches an exhaustive ranking oracle") {
    const int caps[] = {10, 20, 30};
    int checked = 0;
    for (int n = 1; n <= 3; ++n) {
        const int cap_combos = static_cast<int>(std::pow(3, n));
        const int queue_combos = static_cast<int>(std::pow(3, n));
        for (int cc = 0; cc < cap_combos; ++cc) {
            for (int qc = 0; qc < queue_combos; ++qc) {
                std::vector<int> cv;
                std::vector<int> qv;
                for (int i = 0, c = cc, q = qc; i < n; ++i, c /= 3, q /= 3) {
                    cv.push_back(caps[c % 3]);
                    qv.push_back(q % 3);
                }
                for (int width : {5, 15, 25, 35}) {
                    // Rank every node by (infeasible, pending, index); if all are
                    // infeasible rank by (-capacity, index) instead.
                    std::vector<std::tuple<int, int, int>> keys;
                    const bool any = std::any_of(cv.begin(), cv.end(), [&](int c) { return c >= width; });
                    for (int i = 0; i < n; ++i) {
                        keys.emplace_back(any ? (cv[static_cast<std::size_t>(i)] < width) : -cv[static_cast<std::size_t>(i)],
                                          any ? qv[static_cast<std::size_t>(i)] : 0, i);
                    }
                    const int expected = std::get<2>(*std::min_element(keys.begin(), keys.end()));
                    CHECK(greedy_select(task_of_width(width), make_nodes(cv, qv)) == expected);
                    ++checked;
                }
            }
        }
    }
    CHECK(checked == 4 * (9 + 81 + 729));
}

TEST_CASE("replay buffer ring and sampling") {
    ReplayBuffer buf(5);
    for (int i = 0; i < 8; ++i) {
        buf.push(dummy(i));
    }
    CHECK(buf.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(buf.at(i).r == static_cast<double>(i + 3));
    }
    Rng rng(1);
    const auto s = buf.sample(5, rng);
    std::set<double> seen;
    for (const auto &t : s) {
        seen.insert(t.r);
    }
    CHECK(seen.size() == 5);
    CHECK_THROWS_AS((void)buf.sample(6, rng), InvalidArgument);
    CHECK_THROWS_AS(ReplayBuffer(0), InvalidArgument);

    // Uniformity: each of 10 items is drawn with probability 3/10 per call.
    ReplayBuffer big(10);
    for (int i = 0; i < 10; ++i) {
        big.push(dummy(i));
    }
    std::vector<int> counts(10, 0);
    const int trials = 20000;
    for (int k = 0; k < trials; ++k) {
        for (const auto &t : big.sample(3, rng)) {
            counts[static_cast<std::size_t>(t.r)]++;
        }
    }
    const double expected = trials * 0.3;
    const double sigma = std::sqrt(trials * 0.3 * 0.7);
    for (int c : counts) {
        CHECK(std::abs(c - expected) < 5 * sigma);
    }
}

TEST_CASE("epsilon schedule") {
    const EpsilonSchedule eps;
    CHECK(eps.value(0) == 1.0);
    CHECK(eps.value(100) == doctest::Approx(0.3660).epsilon(1e-4));
    CHECK(eps.value(100000) == 0.01);
    double prev = 2.0;
    for (int k = 0; k < 2000; ++k) {
        const double e = eps.value(k);
        CHECK(e <= prev);
        CHECK(e >= 0.01);
        CHECK(e <= 1.0);
        prev = e;
    }
}

TEST_CASE("mlp shape, parameter count, zero model") {
    const MlpArchitecture arch;
    CHECK(arch.parameter_count() == 9221);
    CHECK(arch.parameter_count() == 64 * 8 + 64 + 2 * (64 * 64 + 64) + 64 * 5 + 5);
    const auto zero = MlpModel::zeros(arch);
    const auto pi = pqc::softmax(zero.outputs(Eigen::VectorXd::Constant(8, 0.3)));
    CHECK((pi.array() - 0.2).abs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS((void)zero.outputs(Eigen::VectorXd::Zero(7)), InvalidArgument);

    // PQC / MLP parameter economy.
    CHECK(pqc::PqcArchitecture{}.parameter_count() < 300);
    CHECK(arch.parameter_count() > 30 * pqc::PqcArchitecture{}.parameter_count());
}

TEST_CASE("mlp backprop matches finite differences") {
    Rng rng(2);
    const MlpArchitecture arch{{4, 7, 6, 3}};
    for (int t = 0; t < 5; ++t) {
        auto model = MlpModel::initialize(arch, rng);
        for (auto &v : model.theta) {
            v += uniform(rng, -0.2, 0.2); // non-zero biases
        }
        Eigen::VectorXd s(4);
        Eigen::VectorXd up(3);
        for (auto &v : s) {
            v = uniform(rng, -1, 1);
        }
        for (auto &v : up) {
            v = uniform(rng, -1, 1);
        }
        const auto g = model.vjp(s, up).g;
        const auto fd = autograd::finite_diff_grad(
            [&](const Eigen::VectorXd &theta) {
                MlpModel m = model;
                m.theta = theta;
                return up.dot(m.outputs(s));
            },
            model.theta, 1e-6);
        const double rel = (g - fd).cwiseAbs().maxCoeff() / std::max(fd.cwiseAbs().maxCoeff(), 1e-8);
        CHECK(rel < 1e-5);
    }
}

TEST_CASE("mlp glorot init and checkpoint round trip") {
    Rng rng(3);
    const MlpArchitecture arch;
    const auto m = MlpModel::initialize(arch, rng);
    const double limit0 = std::sqrt(6.0 / (8 + 64));
    CHECK(m.weight(0).cwiseAbs().maxCoeff() <= limit0);
    CHECK(m.bias(0).isZero());
    CHECK(m.weight(3).rows() == 5);
    CHECK(m.weight(3).cols() == 64);

    std::stringstream ss;
    write_mlp_checkpoint(ss, {"dqn-mlp", m});
    const auto back = read_mlp_checkpoint(ss);
    CHECK(back.algorithm == "dqn-mlp");
    CHECK(back.model.arch == arch);
    CHECK(back.model.theta == m.theta);
}

TEST_CASE("argmax and categorical sampling") {
    Eigen::VectorXd v(4);
    v << 0.1, 0.7, 0.7, -1.0;
    CHECK(argmax(v) == 1);
    Eigen::VectorXd p(3);
    p << 0.2, 0.0, 0.8;
    Rng rng(4);
    int hits0 = 0;
    for (int i = 0; i < 10000; ++i) {
        const int a = sample_categorical(p, rng);
        CHECK(a != 1);
        hits0 += a == 0;
    }
    CHECK(std::abs(hits0 - 2000) < 5 * std::sqrt(10000 * 0.16));
}

namespace {

cloudenv::CloudEnv small_env() {
    cloudenv::EnvConfig cfg;
    cfg.arrival_interval = 5.0;
    return cloudenv::CloudEnv(cfg, workload::generate_workload(100, 1));
}

} // namespace

TEST_CASE("training loops: zero episodes, log length, determinism") {
    auto env = small_env();
    Rng rng(5);
    const pqc::PqcArchitecture arch{8, 1, 5};
    autograd::PqcModel model{arch, pqc::ParameterSet::initialize(arch, rng), pqc::Head::Policy, {}};
    const auto original = model.params;
    TrainConfig cfg;
    cfg.episodes = 0;
    CHECK(train_reinforce(env, model, cfg).empty());
    CHECK(model.params == original);

    cfg.episodes = 3;
    cfg.seed = 11;
    auto m1 = model;
    auto m2 = model;
    const auto l1 = train_reinforce(env, m1, cfg);
    const auto l2 = train_reinforce(env, m2, cfg);
    CHECK(l1.size() == 3);
    CHECK(m1.params == m2.params);
    CHECK_FALSE(m1.params == original);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(l1[i].total_return == l2[i].total_return);
        CHECK(l1[i].episode == static_cast<int>(i));
    }

    auto q1 = MlpModel::initialize(MlpArchitecture{}, rng);
    auto q2 = q1;
    cfg.episodes = 6;
    const auto d1 = train_dqn(env, q1, cfg);
    const auto d2 = train_dqn(env, q2, cfg);
    CHECK(d1.size() == 6);
    CHECK(q1.theta == q2.theta);
    CHECK(d1[0].epsilon == 1.0);
    CHECK(d1[5].epsilon == doctest::Approx(std::pow(0.99, 5)));
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(d1[i].total_return == d2[i].total_return);
    }

    cfg.gamma = 0.0;
    CHECK_THROWS_AS((void)train_reinforce(env, m1, cfg), InvalidArgument);
}

TEST_CASE("paired evaluation") {
    auto env = small_env();
    const auto g1 = evaluate(env, greedy_policy(), 5, 77);
    const auto g2 = evaluate(env, greedy_policy(), 5, 77);
    CHECK(g1.mean_return() == g2.mean_return());
    CHECK(g1.mean_wait() == g2.mean_wait());

    Rng rng(6);
    const auto mlp = MlpModel::initialize(MlpArchitecture{}, rng);
    const auto other = evaluate(env, argmax_policy(mlp), 5, 77);
    REQUIRE(other.trace.size() == g1.trace.size());
    for (std::size_t i = 0; i < g1.trace.size(); ++i) {
        CHECK(other.trace[i].task_id == g1.trace[i].task_id);
    }
    CHECK_THROWS_AS((void)evaluate(env, greedy_policy(), 0, 1), InvalidArgument);
}
