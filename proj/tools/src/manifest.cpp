// SPDX-License-Identifier: Apache-2.0
#include "manifest.hpp"

#include "dlcp/binary_io.hpp"

namespace dlcp::cli {

using json = nlohmann::json;

std::vector<std::string> canonical_args(const CLI::App& sub) {
    std::vector<std::string> out;
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->count() == 0 || opt->get_lnames().empty()) continue;
        const std::string name = opt->get_lnames().front();
        if (name == "help" || name == "out" || name == "threads") continue;
        if (opt->get_type_size() == 0) {
            out.push_back("--" + name);
            continue;
        }
        std::string v;
        for (const auto& r : opt->results()) v += (v.empty() ? "" : ",") + r;
        out.push_back("--" + name + "=" + v);
    }
    return out;
}

namespace {

std::string compiler() {
#if defined(__clang__)
    return "clang " __clang_version__;
#elif defined(__GNUC__)
    return "gcc " __VERSION__;
#else
    return "unknown";
#endif
}

std::string quote(const std::string& s) {
    if (s.find_first_of(" \t'\"$\\") == std::string::npos) return s;
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

}  // namespace

void write_manifest(const RunContext& ctx, const ManifestInfo& info) {
    json outputs = json::array();
    for (const auto& name : ctx.outputs) {
        std::error_code ec;
        const auto size = std::filesystem::file_size(ctx.out / name, ec);
        outputs.push_back({{"file", name}, {"bytes", ec ? 0 : size}});
    }
    std::string argv = "dlcp " + info.command;
    for (const auto& a : info.args) argv += " " + quote(a);
    const auto manifest_path = std::filesystem::absolute(ctx.out / kManifestName);
    json j = {
        {"schema", kManifestSchema},
        {"command", info.command},
        {"args", info.args},
        {"cwd", info.cwd.string()},
        {"config", ctx.config},
        {"seeds", ctx.seeds},
        {"threads", ctx.threads},
        {"inputs", ctx.inputs},
        {"output_dir", std::filesystem::absolute(ctx.out).string()},
        {"outputs", outputs},
        {"csv_schemas", ctx.csv_schemas},
        {"versions",
         {{"dlcp", DLCP_VERSION}, {"cli11", CLI11_VERSION}, {"nlohmann_json", "3.11.3"}, {"compiler", compiler()}}},
        {"timings", {{"started_utc", info.started_utc}, {"wall_seconds", info.wall_seconds}}},
        {"command_line", argv + " --out " + quote(ctx.out.string()) + " --threads " + std::to_string(ctx.threads)},
        {"rerun", "dlcp rerun " + quote(manifest_path.string()) + " --out <dir>"},
    };
    write_text_file(ctx.out / kManifestName, j.dump(2) + "\n");
}

LoadedManifest read_manifest(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw IoError("cannot parse manifest " + path.string() + ": " + e.what());
    }
    try {
        if (j.at("schema").get<std::string>() != kManifestSchema)
            fail_validation("unsupported manifest schema in " + path.string());
        LoadedManifest m;
        m.command = j.at("command").get<std::string>();
        m.args = j.at("args").get<std::vector<std::string>>();
        m.cwd = j.at("cwd").get<std::string>();
        return m;
    } catch (const json::exception& e) {
        throw ValidationError("malformed manifest " + path.string() + ": " + e.what());
    }
}

}  // namespace dlcp::cli
