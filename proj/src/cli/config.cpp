#include "qcloud/cli/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcloud/core/error.hpp"

namespace qcloud::cli {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

/// Copies obj[key] into `out` when present, reporting type errors by key.
template <typename T> void read(const json &obj, const char *section, const char *key, T &out) {
    if (!obj.contains(key)) {
        return;
    }
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError(std::string("config: ") + section + key + " has the wrong type");
    }
}

const json &section(const json &doc, const char *name) {
    static const json empty = json::object();
    if (!doc.contains(name)) {
        return empty;
    }
    if (!doc.at(name).is_object()) {
        throw ConfigError(std::string("config: ") + name + " must be an object");
    }
    return doc.at(name);
}

void check_known(const json &obj, const char *where, std::initializer_list<const char *> keys) {
    for (const auto &[k, v] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char *x) { return k == x; })) {
            throw ConfigError(std::string("config: unknown key '") + where + k + "'");
        }
    }
}

} // namespace

bool is_algorithm(std::string_view name) {
    return std::any_of(std::begin(kAlgorithms), std::end(kAlgorithms),
                       [&](const char *a) { return name == a; });
}

void ExperimentConfig::validate() const {
    const auto fail = [](const std::string &m) { throw ConfigError("config: " + m); };
    if (!is_algorithm(algorithm)) {
        fail("algorithm '" + algorithm + "' is not one of greedy, reinforce-pqc, dqn-pqc, reinforce-mlp, dqn-mlp");
    }
    if (episodes < 1) {
        fail("episodes must be >= 1");
    }
    if (eval_episodes < 1) {
        fail("eval.episodes must be >= 1");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        fail("gamma must be in (0, 1]");
    }
    if (pqc_layers < 1) {
        fail("pqc.layers must be >= 1");
    }
    if (!(pqc_lr.phi > 0 && pqc_lr.lambda > 0 && pqc_lr.w > 0 && classical_lr > 0)) {
        fail("learning rates must be positive");
    }
    for (int h : mlp_hidden) {
        if (h < 1) {
            fail("mlp.hidden widths must be >= 1");
        }
    }
    if (batch_size < 1 || buffer_capacity < batch_size || update_every < 1 || target_sync_every < 1) {
        fail("dqn: need 1 <= batch_size <= buffer_capacity and positive update periods");
    }
    if (td_loss != "mse" && td_loss != "huber") {
        fail("dqn.loss must be 'mse' or 'huber'");
    }
    try {
        epsilon.validate();
        distribution.validate();
        make_env_config(*this).validate();
    } catch (const InvalidArgument &e) {
        fail(e.what());
    }
    if (workload_tasks < 1) {
        fail("workload.n_tasks must be >= 1");
    }
    if (!(noise.amplitude_damping >= 0 && noise.amplitude_damping <= 1 && noise.depolarizing >= 0 &&
          noise.depolarizing <= 1)) {
        fail("noise strengths must be in [0, 1]");
    }
    for (const auto &a : agents) {
        if (!a.algorithm.empty() && !is_algorithm(a.algorithm)) {
            fail("agent '" + a.name + "': unknown algorithm '" + a.algorithm + "'");
        }
        if (a.algorithm != "greedy" && a.checkpoint.empty()) {
            fail("agent '" + a.name + "' needs a checkpoint");
        }
    }
}

ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    check_known(doc, "", {"algorithm", "episodes", "seed", "gamma", "output_dir", "svg", "pqc", "mlp", "dqn",
                          "env", "workload", "noise", "eval"});
    ExperimentConfig c = std::move(base);
    read(doc, "", "algorithm", c.algorithm);
    read(doc, "", "episodes", c.episodes);
    read(doc, "", "seed", c.seed);
    read(doc, "", "gamma", c.gamma);
    read(doc, "", "output_dir", c.output_dir);
    read(doc, "", "svg", c.svg);

    const json &pqc = section(doc, "pqc");
    check_known(pqc, "pqc.", {"layers", "lr_phi", "lr_lambda", "lr_w"});
    read(pqc, "pqc.", "layers", c.pqc_layers);
    read(pqc, "pqc.", "lr_phi", c.pqc_lr.phi);
    read(pqc, "pqc.", "lr_lambda", c.pqc_lr.lambda);
    read(pqc, "pqc.", "lr_w", c.pqc_lr.w);

    const json &mlp = section(doc, "mlp");
    check_known(mlp, "mlp.", {"lr", "hidden"});
    read(mlp, "mlp.", "lr", c.classical_lr);
    read(mlp, "mlp.", "hidden", c.mlp_hidden);

    const json &dqn = section(doc, "dqn");
    check_known(dqn, "dqn.", {"batch_size", "buffer_capacity", "update_every", "target_sync_every",
                              "epsilon_start", "epsilon_min", "epsilon_decay", "loss", "huber_delta"});
    read(dqn, "dqn.", "batch_size", c.batch_size);
    read(dqn, "dqn.", "buffer_capacity", c.buffer_capacity);
    read(dqn, "dqn.", "update_every", c.update_every);
    read(dqn, "dqn.", "target_sync_every", c.target_sync_every);
    read(dqn, "dqn.", "epsilon_start", c.epsilon.start);
    read(dqn, "dqn.", "epsilon_min", c.epsilon.min);
    read(dqn, "dqn.", "epsilon_decay", c.epsilon.decay);
    read(dqn, "dqn.", "loss", c.td_loss);
    read(dqn, "dqn.", "huber_delta", c.huber_delta);

    const json &env = section(doc, "env");
    check_known(env, "env.", {"node_table", "nodes", "tasks_per_episode", "arrival_interval", "pending_cap",
                              "qubit_cap", "layer_cap"});
    read(env, "env.", "node_table", c.node_table);
    read(env, "env.", "nodes", c.node_ids);
    read(env, "env.", "tasks_per_episode", c.tasks_per_episode);
    read(env, "env.", "arrival_interval", c.arrival_interval);
    read(env, "env.", "pending_cap", c.pending_cap);
    read(env, "env.", "qubit_cap", c.qubit_cap);
    read(env, "env.", "layer_cap", c.layer_cap);

    const json &wl = section(doc, "workload");
    check_known(wl, "workload.", {"manifest", "n_tasks", "seed", "min_qubits", "max_qubits", "min_layers",
                                  "max_layers", "mean_layers", "shots"});
    read(wl, "workload.", "manifest", c.manifest);
    read(wl, "workload.", "n_tasks", c.workload_tasks);
    read(wl, "workload.", "seed", c.workload_seed);
    read(wl, "workload.", "min_qubits", c.distribution.min_qubits);
    read(wl, "workload.", "max_qubits", c.distribution.max_qubits);
    read(wl, "workload.", "min_layers", c.distribution.min_layers);
    read(wl, "workload.", "max_layers", c.distribution.max_layers);
    read(wl, "workload.", "mean_layers", c.distribution.target_mean_layers);
    read(wl, "workload.", "shots", c.distribution.shots);

    const json &noise = section(doc, "noise");
    check_known(noise, "noise.", {"density", "amplitude_damping", "depolarizing"});
    read(noise, "noise.", "density", c.density);
    read(noise, "noise.", "amplitude_damping", c.noise.amplitude_damping);
    read(noise, "noise.", "depolarizing", c.noise.depolarizing);

    const json &ev = section(doc, "eval");
    check_known(ev, "eval.", {"episodes", "seed", "agents"});
    read(ev, "eval.", "episodes", c.eval_episodes);
    read(ev, "eval.", "seed", c.eval_seed);
    if (ev.contains("agents")) {
        if (!ev.at("agents").is_array()) {
            throw ConfigError("config: eval.agents must be an array");
        }
        for (const auto &a : ev.at("agents")) {
            AgentSpec spec;
            read(a, "eval.agents.", "algorithm", spec.algorithm);
            spec.name = spec.algorithm;
            read(a, "eval.agents.", "name", spec.name);
            read(a, "eval.agents.", "checkpoint", spec.checkpoint);
            c.agents.push_back(std::move(spec));
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

ExperimentConfig noisy_defaults() {
    ExperimentConfig c;
    c.episodes = 150;
    c.pqc_layers = 1;
    c.density = true;
    const auto nodes = cloudenv::default_node_table();
    c.node_ids = {nodes[0].id, nodes[1].id};
    return c;
}

std::string config_to_json(const ExperimentConfig &c) {
    ordered doc;
    doc["algorithm"] = c.algorithm;
    doc["episodes"] = c.episodes;
    doc["seed"] = c.seed;
    doc["gamma"] = c.gamma;
    doc["output_dir"] = c.output_dir;
    doc["svg"] = c.svg;
    doc["pqc"] = {{"layers", c.pqc_layers}, {"lr_phi", c.pqc_lr.phi}, {"lr_lambda", c.pqc_lr.lambda},
                  {"lr_w", c.pqc_lr.w}};
    doc["mlp"] = {{"lr", c.classical_lr}, {"hidden", c.mlp_hidden}};
    doc["dqn"] = {{"batch_size", c.batch_size},
                  {"buffer_capacity", c.buffer_capacity},
                  {"update_every", c.update_every},
                  {"target_sync_every", c.target_sync_every},
                  {"epsilon_start", c.epsilon.start},
                  {"epsilon_min", c.epsilon.min},
                  {"epsilon_decay", c.epsilon.decay},
                  {"loss", c.td_loss},
                  {"huber_delta", c.huber_delta}};
    doc["env"] = {{"node_table", c.node_table},
                  {"nodes", c.node_ids},
                  {"tasks_per_episode", c.tasks_per_episode},
                  {"arrival_interval", c.arrival_interval},
                  {"pending_cap", c.pending_cap},
                  {"qubit_cap", c.qubit_cap},
                  {"layer_cap", c.layer_cap}};
    doc["workload"] = {{"manifest", c.manifest},
                       {"n_tasks", c.workload_tasks},
                       {"seed", c.workload_seed},
                       {"min_qubits", c.distribution.min_qubits},
                       {"max_qubits", c.distribution.max_qubits},
                       {"min_layers", c.distribution.min_layers},
                       {"max_layers", c.distribution.max_layers},
                       {"mean_layers", c.distribution.target_mean_layers},
                       {"shots", c.distribution.shots}};
    doc["noise"] = {{"density", c.density},
                    {"amplitude_damping", c.noise.amplitude_damping},
                    {"depolarizing", c.noise.depolarizing}};
    ordered agents = ordered::array();
    for (const auto &a : c.agents) {
        agents.push_back({{"name", a.name}, {"algorithm", a.algorithm}, {"checkpoint", a.checkpoint}});
    }
    doc["eval"] = {{"episodes", c.eval_episodes}, {"seed", c.eval_seed}, {"agents", agents}};
    return doc.dump(2) + "\n";
}

std::filesystem::path resolve_output_dir(const ExperimentConfig &cfg) {
    if (!cfg.output_dir.empty()) {
        return cfg.output_dir;
    }
    if (const char *env = std::getenv("QCLOUD_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "qcloud_out";
}

cloudenv::EnvConfig make_env_config(const ExperimentConfig &cfg) {
    cloudenv::EnvConfig env;
    if (!cfg.node_table.empty()) {
        env.nodes = cloudenv::load_node_table(cfg.node_table);
    }
    if (!cfg.node_ids.empty()) {
        std::vector<cloudenv::NodeSpec> picked;
        for (const auto &id : cfg.node_ids) {
            const auto it = std::find_if(env.nodes.begin(), env.nodes.end(),
                                         [&](const cloudenv::NodeSpec &n) { return n.id == id; });
            if (it == env.nodes.end()) {
                throw ConfigError("config: env.nodes names unknown node '" + id + "'");
            }
            picked.push_back(*it);
        }
        env.nodes = std::move(picked);
    }
    env.tasks_per_episode = cfg.tasks_per_episode;
    env.arrival_interval = cfg.arrival_interval;
    env.pending_cap = cfg.pending_cap;
    env.qubit_cap = cfg.qubit_cap;
    env.layer_cap = cfg.layer_cap;
    return env;
}

workload::TaskManifest make_workload(const ExperimentConfig &cfg) {
    if (!cfg.manifest.empty()) {
        return workload::load_manifest(cfg.manifest);
    }
    return workload::generate_workload(cfg.workload_tasks, cfg.workload_seed, cfg.distribution);
}

agents::TrainConfig make_train_config(const ExperimentConfig &cfg) {
    agents::TrainConfig t;
    t.episodes = cfg.episodes;
    t.gamma = cfg.gamma;
    t.seed = cfg.seed;
    t.lr.pqc = cfg.pqc_lr;
    t.lr.classical = cfg.classical_lr;
    t.batch_size = cfg.batch_size;
    t.buffer_capacity = cfg.buffer_capacity;
    t.update_every = cfg.update_every;
    t.target_sync_every = cfg.target_sync_every;
    t.epsilon = cfg.epsilon;
    t.loss = cfg.td_loss == "huber" ? autograd::TdLoss::Huber : autograd::TdLoss::Mse;
    t.huber_delta = cfg.huber_delta;
    return t;
}

} // namespace qcloud::cli
