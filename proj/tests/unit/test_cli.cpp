#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcloud/cli/commands.hpp"
#include "qcloud/cli/config.hpp"
#include "qcloud/cli/curves.hpp"
#include "qcloud/core/error.hpp"

using namespace qcloud;
using namespace qcloud::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("qcloud_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(std::vector<std::string> args, std::string *out_text = nullptr, std::string *err_text = nullptr) {
    args.insert(args.begin(), "qcloud");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text != nullptr) {
        *out_text = out.str();
    }
    if (err_text != nullptr) {
        *err_text = err.str();
    }
    return rc;
}

} // namespace

TEST_CASE("moving average") {
    const auto ma = moving_average({1, 2, 3, 4, 5}, 2);
    const std::vector<double> expected{1, 1.5, 2.5, 3.5, 4.5};
    CHECK(ma == expected);
    CHECK(moving_average({4, 8}, 10) == std::vector<double>{4, 6});
    CHECK(moving_average({}, 3).empty());
    CHECK(moving_average({7, 9}, 1) == std::vector<double>{7, 9});
    CHECK_THROWS_AS((void)moving_average({1}, 0), InvalidArgument);

    std::stringstream ss;
    write_curve(ss, {1, 2, 3}, 2);
    CHECK(ss.str() == "episode,value,moving_average\n0,1,1\n1,2,1.5\n2,3,2.5\n");
    const auto c = read_curve(ss);
    CHECK(c.values == std::vector<double>{1, 2, 3});
    CHECK(c.smoothed == std::vector<double>{1, 1.5, 2.5});
    std::stringstream bad("episode,value\n");
    CHECK_THROWS_AS((void)read_curve(bad), ParseError);

    const auto svg = curve_svg({1, 3, 2}, 2, "t");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("config parsing, defaults and errors") {
    const ExperimentConfig d;
    CHECK(d.episodes == 1500);
    CHECK(d.pqc_layers == 5);
    CHECK(d.pqc_lr.phi == 0.03);
    CHECK(d.pqc_lr.lambda == 0.05);
    CHECK(d.pqc_lr.w == 0.03);
    CHECK(d.epsilon.decay == 0.99);
    CHECK(d.update_every == 10);
    CHECK(d.target_sync_every == 30);
    d.validate();

    const auto c = parse_config(R"({"algorithm": "dqn-mlp", "episodes": 7, "pqc": {"layers": 2},
                                    "env": {"arrival_interval": 3.5, "nodes": ["ibm_torino", "ibm_kolkata"]},
                                    "noise": {"depolarizing": 0.2}})");
    CHECK(c.algorithm == "dqn-mlp");
    CHECK(c.episodes == 7);
    CHECK(c.pqc_layers == 2);
    CHECK(c.noise.depolarizing == 0.2);
    CHECK(c.noise.amplitude_damping == 0.01);
    const auto env = make_env_config(c);
    REQUIRE(env.nodes.size() == 2);
    CHECK(env.nodes[0].id == "ibm_torino");
    CHECK(env.arrival_interval == 3.5);

    // Round trip through the serialised form.
    const auto back = parse_config(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));

    CHECK_THROWS_AS((void)parse_config("{"), ConfigError);
    CHECK_THROWS_AS((void)parse_config(R"({"episodes": "many"})"), ConfigError);
    CHECK_THROWS_AS((void)parse_config(R"({"epsiodes": 3})"), ConfigError);
    CHECK_THROWS_AS((void)parse_config(R"({"pqc": {"layer": 3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"algorithm": "sarsa"})").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gamma": 0})").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"env": {"tasks_per_episode": 0}})").validate(), ConfigError);
    CHECK_THROWS_AS((void)make_env_config(parse_config(R"({"env": {"nodes": ["ibm_nowhere"]}})")), ConfigError);

    const auto noisy = noisy_defaults();
    CHECK(noisy.episodes == 150);
    CHECK(noisy.pqc_layers == 1);
    CHECK(noisy.density);
    CHECK(make_env_config(noisy).nodes.size() == 2);
}

TEST_CASE("shipped configs parse") {
    const fs::path root = fs::path(QCLOUD_FIXTURES).parent_path().parent_path();
    const auto cfg = load_config(root / "configs" / "default.json");
    cfg.validate();
    CHECK(cfg.episodes == 1500);
    const auto nodes = cloudenv::load_node_table(root / "configs" / "nodes.json");
    CHECK(nodes == cloudenv::default_node_table());
}

TEST_CASE("output directory resolution") {
    ExperimentConfig c;
    c.output_dir = "explicit";
    CHECK(resolve_output_dir(c) == fs::path("explicit"));
    c.output_dir.clear();
    setenv("QCLOUD_OUTPUT_DIR", "from_env", 1);
    CHECK(resolve_output_dir(c) == fs::path("from_env"));
    unsetenv("QCLOUD_OUTPUT_DIR");
    CHECK(resolve_output_dir(c) == fs::path("qcloud_out"));
}

TEST_CASE("train, eval and inspect through the command line") {
    const auto dir = scratch("train");
    const auto d = dir.string();
    REQUIRE(run({"train", "-a", "reinforce-pqc", "-e", "3", "--layers", "1", "-o", d, "--svg"}) == 0);
    REQUIRE(run({"train", "-a", "dqn-mlp", "-e", "2", "-o", d}) == 0);
    CHECK(fs::exists(dir / "reinforce-pqc.ckpt"));
    CHECK(fs::exists(dir / "reinforce-pqc_curve.svg"));
    const auto rewards = slurp(dir / "reinforce-pqc_rewards.csv");
    CHECK(rewards.rfind("episode,return,wait,epsilon\n0,", 0) == 0);
    CHECK(std::count(rewards.begin(), rewards.end(), '\n') == 4);

    std::string out;
    REQUIRE(run({"eval", "-o", d, "-e", "3", "--checkpoint", (dir / "reinforce-pqc.ckpt").string(), "--checkpoint",
                 (dir / "dqn-mlp.ckpt").string()},
                &out) == 0);
    const auto summary = slurp(dir / "eval_summary.csv");
    CHECK(summary.rfind("agent,algorithm,mean_return,mean_wait\ngreedy,greedy,", 0) == 0);
    CHECK(summary.find("\nreinforce-pqc,reinforce-pqc,") != std::string::npos);
    CHECK(summary.find("\ndqn-mlp,dqn-mlp,") != std::string::npos);
    CHECK(out.find("mean_return") != std::string::npos);
    CHECK(fs::exists(dir / "eval_dqn-mlp_trace.csv"));
    CHECK(slurp(dir / "eval_greedy_return_curve.csv").rfind("episode,value,moving_average\n", 0) == 0);

    REQUIRE(run({"inspect-checkpoint", (dir / "reinforce-pqc.ckpt").string()}, &out) == 0);
    CHECK(out.find("parameters 61") != std::string::npos);

    // A checkpoint trained for five nodes cannot drive a two-node cloud.
    std::string err;
    {
        std::ofstream(dir / "two.json") << R"({"env": {"nodes": ["ibm_torino", "ibm_marrakesh"]}})";
    }
    CHECK(run({"eval", "-o", d, "-e", "1", "--checkpoint", (dir / "dqn-mlp.ckpt").string(), "-c",
               (dir / "two.json").string()},
              nullptr, &err) == 1);
    CHECK(err.find("does not match") != std::string::npos);
}

TEST_CASE("noisy verb") {
    const auto dir = scratch("noisy");
    REQUIRE(run({"noisy", "-e", "2", "-o", dir.string()}) == 0);
    std::string out;
    REQUIRE(run({"inspect-checkpoint", (dir / "noisy-reinforce-pqc.ckpt").string()}, &out) == 0);
    CHECK(out.find("n_qubits   5") != std::string::npos);
    CHECK(out.find("n_layers   1") != std::string::npos);
    CHECK(run({"noisy", "-a", "dqn-mlp", "-e", "2", "-o", dir.string()}) == 1);
}

TEST_CASE("workload verbs and exit codes") {
    std::string out;
    std::string err;
    REQUIRE(run({"gen-workload", "-n", "4", "--seed", "3"}, &out) == 0);
    CHECK(out.rfind("id,n_qubits,layers,gate_count,shots\ntask-00000,", 0) == 0);

    const fs::path fixtures(QCLOUD_FIXTURES);
    REQUIRE(run({"parse-qasm", (fixtures / "qasm" / "valid" / "ghz3.qasm").string()}, &out) == 0);
    CHECK(out.find("n_qubits 3, depth 3, gate_count 3") != std::string::npos);
    REQUIRE(run({"parse-qasm", (fixtures / "qasm" / "valid").string()}, &out) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 26);
    CHECK(run({"parse-qasm", (fixtures / "qasm" / "invalid").string()}, &out, &err) == 1);
    CHECK(err.find("bad_gate.qasm") != std::string::npos);
    CHECK(run({"parse-qasm", "--permissive", (fixtures / "qasm" / "invalid").string()}, &out, &err) == 0);

    CHECK(run({}, &out, &err) == 1);
    CHECK(run({"train", "--frobnicate"}, &out, &err) == 1);
    CHECK(run({"train", "-a", "sarsa"}, &out, &err) == 1);
    CHECK(run({"--help"}, &out, &err) == 0);
}

TEST_CASE("identical commands give byte-identical CSV files") {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    for (const auto &dir : {a, b}) {
        REQUIRE(run({"train", "-a", "dqn-pqc", "-e", "3", "--layers", "1", "--seed", "9", "-o", dir.string()}) == 0);
        REQUIRE(run({"eval", "-e", "3", "-o", dir.string(), "--checkpoint", (dir / "dqn-pqc.ckpt").string()}) == 0);
    }
    int compared = 0;
    for (const auto &entry : fs::directory_iterator(a)) {
        if (entry.path().extension() == ".csv") {
            CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
            ++compared;
        }
    }
    CHECK(compared >= 8);
}
