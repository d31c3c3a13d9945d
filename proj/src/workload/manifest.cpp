#include "qcloud/workload/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "qcloud/core/error.hpp"

namespace qcloud::workload {

namespace {

int parse_int(std::string_view field, const char *column, int line) {
    int value = 0;
    const auto *end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(std::string("bad ") + column + " '" + std::string(field) + "'", line);
    }
    return value;
}

std::vector<std::string_view> split(std::string_view row) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = row.find(',', start);
        out.push_back(row.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

} // namespace

void TaskRecord::validate() const {
    if (id.empty() || id.find_first_of(",\n\r") != std::string::npos) {
        throw InvalidArgument("task id '" + id + "' is empty or contains a comma/newline");
    }
    if (n_qubits < 1 || layers < 1 || shots < 1) {
        throw InvalidArgument("task " + id + ": n_qubits, layers and shots must be >= 1");
    }
    if (gate_count < layers) {
        throw InvalidArgument("task " + id + ": gate_count below layers");
    }
}

void TaskManifest::validate() const {
    for (const auto &r : records) {
        r.validate();
    }
}

int TaskManifest::max_layers() const {
    int m = 0;
    for (const auto &r : records) {
        m = std::max(m, r.layers);
    }
    return m;
}

int TaskManifest::max_qubits() const {
    int m = 0;
    for (const auto &r : records) {
        m = std::max(m, r.n_qubits);
    }
    return m;
}

void write_manifest(std::ostream &out, const TaskManifest &manifest) {
    manifest.validate();
    out << kManifestHeader << '\n';
    for (const auto &r : manifest.records) {
        out << r.id << ',' << r.n_qubits << ',' << r.layers << ',' << r.gate_count << ','
            << r.shots << '\n';
    }
}

TaskManifest read_manifest(std::istream &in) {
    std::string row;
    int line = 1;
    if (!std::getline(in, row) || row != kManifestHeader) {
        throw ParseError(std::string("manifest header must be '") + kManifestHeader + "'", line);
    }
    TaskManifest manifest;
    while (std::getline(in, row)) {
        ++line;
        if (row.empty()) {
            continue;
        }
        const auto fields = split(row);
        if (fields.size() != 5) {
            throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), line);
        }
        TaskRecord r;
        r.id = std::string(fields[0]);
        r.n_qubits = parse_int(fields[1], "n_qubits", line);
        r.layers = parse_int(fields[2], "layers", line);
        r.gate_count = parse_int(fields[3], "gate_count", line);
        r.shots = parse_int(fields[4], "shots", line);
        try {
            r.validate();
        } catch (const InvalidArgument &e) {
            throw ParseError(e.what(), line);
        }
        manifest.records.push_back(std::move(r));
    }
    return manifest;
}

void save_manifest(const std::filesystem::path &path, const TaskManifest &manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write manifest " + path.string());
    }
    write_manifest(out, manifest);
}

TaskManifest load_manifest(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open manifest " + path.string());
    }
    try {
        return read_manifest(in);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

} // namespace qcloud::workload
