// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "command.hpp"

namespace dlcp::cli {

inline constexpr const char* kManifestSchema = "dlcp-manifest/1";
inline constexpr const char* kManifestName = "manifest.json";

struct ManifestInfo {
    std::string command;
    std::vector<std::string> args;  ///< canonical options, without --out and --threads
    std::filesystem::path cwd;
    double wall_seconds = 0.0;
    std::string started_utc;
};

/// Canonical argument list of a parsed subcommand: every option given on the
/// command line as --name=value, values of list options joined by commas.
std::vector<std::string> canonical_args(const CLI::App& sub);

void write_manifest(const RunContext& ctx, const ManifestInfo& info);

struct LoadedManifest {
    std::string command;
    std::vector<std::string> args;
    std::filesystem::path cwd;
};
LoadedManifest read_manifest(const std::filesystem::path& path);

}  // namespace dlcp::cli
