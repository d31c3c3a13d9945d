#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qcloud/workload/manifest.hpp"

namespace qcloud::workload {

struct IngestResult {
    TaskManifest manifest;
    std::vector<std::string> errors;   ///< "<file>: <message>", permissive mode only
    std::vector<std::string> warnings; ///< "<file>: <message>"
};

/// Parses every *.qasm file in `dir` (sorted by filename) into one manifest
/// row with id = file stem and shots = `shots`. Without `permissive`, any
/// failing file aborts the whole ingest with an Error naming every bad file.
[[nodiscard]] IngestResult ingest_directory(const std::filesystem::path &dir, bool permissive = false,
                                            int shots = 1024);

} // namespace qcloud::workload
