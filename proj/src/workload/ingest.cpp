#include "qcloud/workload/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qcloud/core/error.hpp"
#include "qcloud/workload/qasm.hpp"

namespace qcloud::workload {

IngestResult ingest_directory(const std::filesystem::path &dir, bool permissive, int shots) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw Error("ingest: not a directory: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".qasm") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path &a, const fs::path &b) { return a.filename() < b.filename(); });

    IngestResult result;
    for (const auto &file : files) {
        const std::string name = file.filename().string();
        std::ifstream in(file, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            const auto summary = parse_qasm_subset(buf.str());
            for (const auto &w : summary.warnings) {
                result.warnings.push_back(name + ": " + w);
            }
            TaskRecord rec{file.stem().string(), summary.n_qubits, summary.depth, summary.gate_count,
                           shots};
            rec.validate();
            result.manifest.records.push_back(std::move(rec));
        } catch (const Error &e) {
            result.errors.push_back(name + ": " + e.what());
        }
    }
    if (!permissive && !result.errors.empty()) {
        std::string msg = "ingest failed for " + std::to_string(result.errors.size()) + " file(s)";
        for (const auto &e : result.errors) {
            msg += "\n  " + e;
        }
        throw Error(msg);
    }
    return result;
}

} // namespace qcloud::workload
