#include "qcloud/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcloud/agents/evaluate.hpp"
#include "qcloud/agents/mlp.hpp"
#include "qcloud/cli/curves.hpp"
#include "qcloud/core/error.hpp"
#include "qcloud/core/flat_text.hpp"
#include "qcloud/pqc/checkpoint.hpp"
#include "qcloud/workload/ingest.hpp"
#include "qcloud/workload/manifest.hpp"
#include "qcloud/workload/qasm.hpp"

namespace qcloud::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path &path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error("cannot write " + path.string());
    }
    return os;
}

void write_text(const fs::path &path, const std::string &text) {
    auto os = open_out(path);
    os << text;
}

std::vector<double> returns_of(const std::vector<agents::EpisodeLog> &log) {
    std::vector<double> v;
    v.reserve(log.size());
    for (const auto &e : log) {
        v.push_back(e.total_return);
    }
    return v;
}

void write_reward_log(const fs::path &path, const std::vector<agents::EpisodeLog> &log) {
    auto os = open_out(path);
    os << "episode,return,wait,epsilon\n";
    for (const auto &e : log) {
        os << e.episode << ',' << format_double(e.total_return) << ',' << format_double(e.total_wait) << ','
           << format_double(e.epsilon) << '\n';
    }
}

std::vector<agents::EpisodeLog> run_greedy(cloudenv::CloudEnv &env, const agents::TrainConfig &t) {
    std::vector<agents::EpisodeLog> log;
    for (int k = 0; k < t.episodes; ++k) {
        env.reset(agents::episode_seed(t.seed, k), k);
        while (!env.done()) {
            (void)env.step(agents::greedy_select(env));
        }
        const auto m = cloudenv::cumulative_metrics(env.trace());
        log.push_back({k, m.total_return, m.total_wait, 0.0});
    }
    return log;
}

std::string first_line(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open checkpoint " + path.string());
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            return line;
        }
    }
    return {};
}

struct LoadedAgent {
    std::string algorithm;
    agents::PolicyFn policy;
};

LoadedAgent load_agent(const AgentSpec &spec, const cloudenv::CloudEnv &env, const ExperimentConfig &cfg) {
    if (spec.algorithm == "greedy") {
        return {"greedy", agents::greedy_policy()};
    }
    const std::string head = first_line(spec.checkpoint);
    const auto mismatch = [&](const std::string &what) {
        return ConfigError("checkpoint " + spec.checkpoint + ": " + what + " does not match the environment (" +
                           std::to_string(env.observation_size()) + " inputs, " + std::to_string(env.n_actions()) +
                           " actions)");
    };
    if (head == "format qcloud-pqc-v1") {
        auto ck = pqc::load_checkpoint(spec.checkpoint);
        if (!spec.algorithm.empty() && spec.algorithm != ck.algorithm) {
            throw ConfigError("checkpoint " + spec.checkpoint + " holds " + ck.algorithm + ", not " + spec.algorithm);
        }
        if (ck.arch.n_qubits != env.observation_size() || ck.arch.n_actions != env.n_actions()) {
            throw mismatch("PQC architecture");
        }
        const auto mode = is_dqn(ck.algorithm) ? pqc::Head::QValue : pqc::Head::Policy;
        autograd::PqcModel model{ck.arch, std::move(ck.params), mode, {cfg.density, cfg.noise}};
        return {ck.algorithm, agents::argmax_policy(std::move(model))};
    }
    if (head == "format qcloud-mlp-v1") {
        auto ck = agents::load_mlp_checkpoint(spec.checkpoint);
        if (!spec.algorithm.empty() && spec.algorithm != ck.algorithm) {
            throw ConfigError("checkpoint " + spec.checkpoint + " holds " + ck.algorithm + ", not " + spec.algorithm);
        }
        const auto &w = ck.model.arch.widths;
        if (w.front() != env.observation_size() || w.back() != env.n_actions()) {
            throw mismatch("MLP shape");
        }
        return {ck.algorithm, agents::argmax_policy(std::move(ck.model))};
    }
    throw ConfigError("checkpoint " + spec.checkpoint + ": unrecognised format");
}

} // namespace

TrainOutputs cmd_train(const ExperimentConfig &cfg, std::ostream &log) {
    cfg.validate();
    const auto env_cfg = make_env_config(cfg);
    cloudenv::CloudEnv env(env_cfg, make_workload(cfg));
    const auto t = make_train_config(cfg);
    const fs::path dir = resolve_output_dir(cfg);
    fs::create_directories(dir);
    const std::string prefix = (cfg.density ? "noisy-" : "") + cfg.algorithm;

    const int every = std::max(1, cfg.episodes / 10);
    const agents::EpisodeCallback progress = [&](const agents::EpisodeLog &e) {
        if ((e.episode + 1) % every == 0 || e.episode + 1 == cfg.episodes) {
            log << prefix << ": episode " << e.episode + 1 << "/" << cfg.episodes << " return "
                << format_double(e.total_return) << "\n";
        }
    };

    TrainOutputs out;
    Rng init_rng(cfg.seed);
    if (cfg.algorithm == "greedy") {
        out.log = run_greedy(env, t);
    } else if (is_pqc(cfg.algorithm)) {
        const pqc::PqcArchitecture arch{env.observation_size(), cfg.pqc_layers, env.n_actions()};
        autograd::PqcModel model{arch, pqc::ParameterSet::initialize(arch, init_rng),
                                 is_dqn(cfg.algorithm) ? pqc::Head::QValue : pqc::Head::Policy,
                                 {cfg.density, cfg.noise}};
        out.log = is_dqn(cfg.algorithm) ? agents::train_dqn(env, model, t, progress)
                                        : agents::train_reinforce(env, model, t, progress);
        out.checkpoint = dir / (prefix + ".ckpt");
        pqc::save_checkpoint(out.checkpoint, {cfg.algorithm, model.arch, model.params});
    } else {
        if (cfg.density) {
            throw ConfigError("config: noise applies to PQC agents only");
        }
        std::vector<int> widths{env.observation_size()};
        widths.insert(widths.end(), cfg.mlp_hidden.begin(), cfg.mlp_hidden.end());
        widths.push_back(env.n_actions());
        auto model = agents::MlpModel::initialize(agents::MlpArchitecture{widths}, init_rng);
        out.log = is_dqn(cfg.algorithm) ? agents::train_dqn(env, model, t, progress)
                                        : agents::train_reinforce(env, model, t, progress);
        out.checkpoint = dir / (prefix + ".ckpt");
        agents::save_mlp_checkpoint(out.checkpoint, {cfg.algorithm, model});
    }

    out.rewards = dir / (prefix + "_rewards.csv");
    write_reward_log(out.rewards, out.log);
    out.curve = dir / (prefix + "_curve.csv");
    const auto returns = returns_of(out.log);
    {
        auto os = open_out(out.curve);
        write_curve(os, returns, kTrainCurveWindow);
    }
    if (cfg.svg) {
        write_text(dir / (prefix + "_curve.svg"), curve_svg(returns, kTrainCurveWindow, prefix + " training return"));
    }
    write_text(dir / (prefix + "_config.json"), config_to_json(cfg));
    log << prefix << ": wrote " << out.rewards.string() << "\n";
    return out;
}

void write_summary_table(std::ostream &os, const std::vector<AgentSummary> &rows) {
    std::size_t name_w = 5;
    std::size_t algo_w = 9;
    for (const auto &r : rows) {
        name_w = std::max(name_w, r.name.size());
        algo_w = std::max(algo_w, r.algorithm.size());
    }
    os << std::left << std::setw(static_cast<int>(name_w)) << "agent" << "  " << std::setw(static_cast<int>(algo_w))
       << "algorithm" << "  " << std::right << std::setw(14) << "mean_return" << "  " << std::setw(14) << "mean_wait"
       << "\n";
    for (const auto &r : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%14.4f  %14.4f", r.mean_return, r.mean_wait);
        os << std::left << std::setw(static_cast<int>(name_w)) << r.name << "  "
           << std::setw(static_cast<int>(algo_w)) << r.algorithm << "  " << buf << "\n";
    }
}

std::vector<AgentSummary> cmd_eval(const ExperimentConfig &cfg, std::ostream &log) {
    cfg.validate();
    cloudenv::CloudEnv env(make_env_config(cfg), make_workload(cfg));
    const fs::path dir = resolve_output_dir(cfg);
    fs::create_directories(dir);

    std::vector<AgentSpec> specs{{"greedy", "greedy", ""}};
    for (const auto &a : cfg.agents) {
        if (a.algorithm != "greedy") {
            specs.push_back(a);
        }
    }
    std::vector<AgentSummary> rows;
    for (auto spec : specs) {
        const auto agent = load_agent(spec, env, cfg);
        if (spec.name.empty()) {
            spec.name = agent.algorithm;
        }
        for (const auto &r : rows) {
            if (r.name == spec.name) {
                throw ConfigError("duplicate agent name '" + spec.name + "'");
            }
        }
        const auto res = agents::evaluate(env, agent.policy, cfg.eval_episodes, cfg.eval_seed);
        rows.push_back({spec.name, agent.algorithm, res.mean_return(), res.mean_wait()});

        std::vector<double> returns;
        std::vector<double> waits;
        {
            auto os = open_out(dir / ("eval_" + spec.name + "_episodes.csv"));
            os << "episode,return,wait\n";
            for (std::size_t k = 0; k < res.episodes.size(); ++k) {
                returns.push_back(res.episodes[k].total_return);
                waits.push_back(res.episodes[k].total_wait);
                os << k << ',' << format_double(returns.back()) << ',' << format_double(waits.back()) << '\n';
            }
        }
        {
            auto os = open_out(dir / ("eval_" + spec.name + "_return_curve.csv"));
            write_curve(os, returns, kEvalCurveWindow);
        }
        {
            auto os = open_out(dir / ("eval_" + spec.name + "_wait_curve.csv"));
            write_curve(os, waits, kEvalCurveWindow);
        }
        {
            auto os = open_out(dir / ("eval_" + spec.name + "_trace.csv"));
            cloudenv::write_trace_header(os);
            cloudenv::write_trace_rows(os, res.trace);
        }
        if (cfg.svg) {
            write_text(dir / ("eval_" + spec.name + "_return_curve.svg"),
                       curve_svg(returns, kEvalCurveWindow, spec.name + " evaluation return"));
        }
    }
    {
        auto os = open_out(dir / "eval_summary.csv");
        os << "agent,algorithm,mean_return,mean_wait\n";
        for (const auto &r : rows) {
            os << r.name << ',' << r.algorithm << ',' << format_double(r.mean_return) << ','
               << format_double(r.mean_wait) << '\n';
        }
    }
    std::ostringstream table;
    write_summary_table(table, rows);
    write_text(dir / "eval_summary.txt", table.str());
    log << table.str();
    return rows;
}

namespace {

/// Flags shared by train, noisy and eval. Only flags the user actually
/// passed override the config.
struct CommonFlags {
    std::string config;
    std::string algorithm;
    int episodes = 0;
    std::uint64_t seed = 0;
    int layers = 0;
    std::string output_dir;
    std::string manifest;
    std::string node_table;
    double arrival_interval = 0.0;
    double amplitude_damping = 0.0;
    double depolarizing = 0.0;
    bool svg = false;
    int eval_episodes = 0;
    std::uint64_t eval_seed = 0;
    std::vector<std::string> checkpoints;

    CLI::Option *o_algorithm = nullptr, *o_episodes = nullptr, *o_seed = nullptr, *o_layers = nullptr,
                *o_output = nullptr, *o_manifest = nullptr, *o_nodes = nullptr, *o_interval = nullptr,
                *o_gamma_ad = nullptr, *o_dep = nullptr, *o_svg = nullptr, *o_eval_eps = nullptr,
                *o_eval_seed = nullptr;

    void add_to(CLI::App *app, bool training, bool evaluation) {
        app->add_option("-c,--config", config, "JSON config file")->check(CLI::ExistingFile);
        o_seed = app->add_option("--seed", seed, "training seed");
        o_layers = app->add_option("--layers", layers, "PQC layer count")->check(CLI::PositiveNumber);
        o_output = app->add_option("-o,--output-dir", output_dir, "output directory");
        o_manifest = app->add_option("--manifest", manifest, "task manifest CSV")->check(CLI::ExistingFile);
        o_nodes = app->add_option("--node-table", node_table, "node table JSON")->check(CLI::ExistingFile);
        o_interval = app->add_option("--arrival-interval", arrival_interval, "seconds between task arrivals");
        o_gamma_ad = app->add_option("--amplitude-damping", amplitude_damping, "amplitude damping strength");
        o_dep = app->add_option("--depolarizing", depolarizing, "depolarizing strength");
        o_svg = app->add_flag("--svg", svg, "also write SVG curves");
        if (training) {
            o_algorithm = app->add_option("-a,--algorithm", algorithm, "greedy|reinforce-pqc|dqn-pqc|reinforce-mlp|dqn-mlp");
            o_episodes = app->add_option("-e,--episodes", episodes, "training episodes")->check(CLI::PositiveNumber);
        }
        if (evaluation) {
            o_eval_eps = app->add_option("-e,--episodes", eval_episodes, "evaluation episodes")
                             ->check(CLI::PositiveNumber);
            o_eval_seed = app->add_option("--eval-seed", eval_seed, "evaluation seed");
            app->add_option("--checkpoint", checkpoints, "agent checkpoint (repeatable)")->check(CLI::ExistingFile);
        }
    }

    [[nodiscard]] ExperimentConfig resolve(ExperimentConfig base) const {
        ExperimentConfig c = config.empty() ? std::move(base) : load_config(config, std::move(base));
        const auto given = [](const CLI::Option *o) { return o != nullptr && o->count() > 0; };
        if (given(o_algorithm)) c.algorithm = algorithm;
        if (given(o_episodes)) c.episodes = episodes;
        if (given(o_seed)) c.seed = seed;
        if (given(o_layers)) c.pqc_layers = layers;
        if (given(o_output)) c.output_dir = output_dir;
        if (given(o_manifest)) c.manifest = manifest;
        if (given(o_nodes)) c.node_table = node_table;
        if (given(o_interval)) c.arrival_interval = arrival_interval;
        if (given(o_gamma_ad)) c.noise.amplitude_damping = amplitude_damping;
        if (given(o_dep)) c.noise.depolarizing = depolarizing;
        if (given(o_svg)) c.svg = svg;
        if (given(o_eval_eps)) c.eval_episodes = eval_episodes;
        if (given(o_eval_seed)) c.eval_seed = eval_seed;
        for (const auto &path : checkpoints) {
            c.agents.push_back({"", "", path});
        }
        return c;
    }
};

void print_qasm(std::ostream &out, const std::string &name, const workload::QasmCircuitSummary &s) {
    out << name << ": n_qubits " << s.n_qubits << ", depth " << s.depth << ", gate_count " << s.gate_count << "\n";
}

void inspect(std::ostream &out, const fs::path &path) {
    const std::string head = first_line(path);
    if (head == "format qcloud-pqc-v1") {
        const auto ck = pqc::load_checkpoint(path);
        out << "format     qcloud-pqc-v1\nalgorithm  " << ck.algorithm << "\nn_qubits   " << ck.arch.n_qubits
            << "\nn_layers   " << ck.arch.n_layers << "\nn_actions  " << ck.arch.n_actions << "\nparameters "
            << ck.arch.parameter_count() << " (phi " << ck.params.phi.size() << ", lambda " << ck.params.lambda.size()
            << ", w " << ck.params.w.size() << ")\n";
        out << "w         ";
        for (double v : ck.params.w) {
            out << ' ' << format_double(v);
        }
        out << "\n";
    } else if (head == "format qcloud-mlp-v1") {
        const auto ck = agents::load_mlp_checkpoint(path);
        out << "format     qcloud-mlp-v1\nalgorithm  " << ck.algorithm << "\nwidths    ";
        for (int w : ck.model.arch.widths) {
            out << ' ' << w;
        }
        out << "\nparameters " << ck.model.arch.parameter_count() << "\n";
    } else {
        throw ConfigError("checkpoint " + path.string() + ": unrecognised format");
    }
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum cloud scheduling with quantum reinforcement learning agents", "qcloud"};
    app.require_subcommand(1);

    CommonFlags train_flags;
    auto *train = app.add_subcommand("train", "train one agent and write checkpoint, reward log and curve");
    train_flags.add_to(train, true, false);

    CommonFlags noisy_flags;
    auto *noisy = app.add_subcommand("noisy", "train a PQC agent with density-matrix noise on a two-node cloud");
    noisy_flags.add_to(noisy, true, false);

    CommonFlags eval_flags;
    auto *eval = app.add_subcommand("eval", "paired evaluation of greedy and trained agents");
    eval_flags.add_to(eval, false, true);

    int gen_n = 1000;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto *gen = app.add_subcommand("gen-workload", "generate a synthetic task manifest");
    gen->add_option("-n,--tasks", gen_n, "number of tasks")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--out", gen_out, "manifest path (stdout if omitted)");

    std::vector<std::string> qasm_inputs;
    std::string qasm_out;
    bool permissive = false;
    auto *parse = app.add_subcommand("parse-qasm", "summarise OpenQASM 2 files or a directory of them");
    parse->add_option("inputs", qasm_inputs, "files or one directory")->required()->check(CLI::ExistingPath);
    parse->add_option("-o,--out", qasm_out, "write a task manifest for a directory input");
    parse->add_flag("--permissive", permissive, "skip unparsable files instead of failing");

    std::string ckpt_path;
    auto *insp = app.add_subcommand("inspect-checkpoint", "print a checkpoint's architecture and sizes");
    insp->add_option("checkpoint", ckpt_path, "checkpoint file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) {
            (void)cmd_train(train_flags.resolve({}), out);
        } else if (noisy->parsed()) {
            auto cfg = noisy_flags.resolve(noisy_defaults());
            cfg.density = true;
            if (!is_pqc(cfg.algorithm)) {
                throw ConfigError("noisy: algorithm must be reinforce-pqc or dqn-pqc");
            }
            (void)cmd_train(cfg, out);
        } else if (eval->parsed()) {
            (void)cmd_eval(eval_flags.resolve({}), out);
        } else if (gen->parsed()) {
            const auto manifest = workload::generate_workload(gen_n, gen_seed);
            if (gen_out.empty()) {
                workload::write_manifest(out, manifest);
            } else {
                workload::save_manifest(gen_out, manifest);
            }
        } else if (parse->parsed()) {
            if (qasm_inputs.size() == 1 && fs::is_directory(qasm_inputs[0])) {
                workload::IngestResult res;
                try {
                    res = workload::ingest_directory(qasm_inputs[0], permissive);
                } catch (const Error &e) {
                    err << "error: " << e.what() << "\n";
                    return 1;
                }
                for (const auto &w : res.warnings) {
                    err << "warning: " << w << "\n";
                }
                for (const auto &e : res.errors) {
                    err << "skipped: " << e << "\n";
                }
                if (qasm_out.empty()) {
                    workload::write_manifest(out, res.manifest);
                } else {
                    workload::save_manifest(qasm_out, res.manifest);
                }
            } else {
                for (const auto &path : qasm_inputs) {
                    std::ifstream in(path);
                    std::stringstream ss;
                    ss << in.rdbuf();
                    const auto s = workload::parse_qasm_subset(ss.str());
                    for (const auto &w : s.warnings) {
                        err << path << ": warning: " << w << "\n";
                    }
                    print_qasm(out, path, s);
                }
            }
        } else if (insp->parsed()) {
            inspect(out, ckpt_path);
        }
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace qcloud::cli
