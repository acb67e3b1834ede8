#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adrcwave/closed_loop.hpp"

namespace adrcwave {

/// Machine-readable summary of a run: decay fits, tail report and Lyapunov checks.
std::string summary_json(const RunRecord& rec, const ScenarioConfig& cfg);

/// Writes config.ini, trajectory.csv, diagnostics.csv and summary.json into
/// `dir`, each through a temporary file and an atomic rename.
void write_bundle(const RunRecord& rec, const ScenarioConfig& cfg, const std::filesystem::path& dir);

/// Writes `content` to `path` through a temporary sibling and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool partial = false;
    std::size_t rows = 0;

    bool pass() const;
    std::string text() const;
};

/// Re-checks a stored bundle: schema, definition consistency, bitwise
/// reproducibility from the echoed config, Lyapunov inequalities and the
/// F^ - F tail report. Missing or corrupt files raise Error(Io).
VerifyReport verify_bundle(const std::filesystem::path& dir);

}  // namespace adrcwave
