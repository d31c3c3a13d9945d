#include "qcloud/cloudenv/node_table.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcloud/core/error.hpp"

namespace qcloud::cloudenv {

void NodeSpec::validate() const {
    if (id.empty()) {
        throw InvalidArgument("node id must not be empty");
    }
    if (n_qubits <= 0) {
        throw InvalidArgument("node " + id + ": n_qubits must be > 0");
    }
    if (!(clops > 0.0) || !std::isfinite(clops)) {
        throw InvalidArgument("node " + id + ": clops must be > 0");
    }
    if (!(eplg >= 0.0)) {
        throw InvalidArgument("node " + id + ": eplg must be >= 0");
    }
}

std::vector<NodeSpec> default_node_table() {
    return {
        {"ibm_marrakesh", 156, 180000.0, 3.71e-3},
        {"ibm_torino", 133, 200000.0, 8.95e-3},
        {"ibm_quebec", 127, 32000.0, 1.67e-2},
        {"ibm_brisbane", 127, 170000.0, 1.82e-2},
        {"ibm_kolkata", 27, 66000.0, 1.5e-2},
    };
}

std::vector<NodeSpec> parse_node_table(std::string_view json_text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("node table: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
        throw ConfigError("node table: expected an object with a 'nodes' array");
    }
    std::vector<NodeSpec> nodes;
    std::size_t i = 0;
    for (const auto &n : doc["nodes"]) {
        try {
            NodeSpec spec{n.at("id").get<std::string>(), n.at("n_qubits").get<int>(),
                          n.at("clops").get<double>(), n.value("eplg", 0.0)};
            spec.validate();
            nodes.push_back(std::move(spec));
        } catch (const json::exception &e) {
            throw ConfigError("node table: entry " + std::to_string(i) + ": " + e.what());
        } catch (const InvalidArgument &e) {
            throw ConfigError("node table: entry " + std::to_string(i) + ": " + e.what());
        }
        ++i;
    }
    if (nodes.empty()) {
        throw ConfigError("node table: no nodes");
    }
    return nodes;
}

std::vector<NodeSpec> load_node_table(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open node table " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_node_table(ss.str());
}

std::string node_table_json(const std::vector<NodeSpec> &nodes) {
    nlohmann::ordered_json doc;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto &n : nodes) {
        doc["nodes"].push_back({{"id", n.id}, {"n_qubits", n.n_qubits}, {"clops", n.clops}, {"eplg", n.eplg}});
    }
    return doc.dump(2) + "\n";
}

} // namespace qcloud::cloudenv
