// SPDX-License-Identifier: Apache-2.0
// dlcp: data generation, training, decomposition and benchmarking.
//
// Exit codes: 0 ok, 2 invalid input, 3 numerical failure, 4 I/O error.

#include <chrono>
#include <ctime>
#include <iostream>

#include "command.hpp"
#include "dlcp/parallel.hpp"
#include "manifest.hpp"

namespace dlcp::cli {

void add_common_options(Command& cmd, bool out_required, const std::string& out_aliases) {
    auto* o = cmd.app->add_option("--out" + out_aliases, *cmd.out, "Output directory");
    if (out_required) o->required();
    *cmd.threads = default_threads();
    cmd.app->add_option("--threads", *cmd.threads, "Worker threads (default: $DLCP_THREADS or 1)")
        ->check(CLI::PositiveNumber);
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

namespace {

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int run(std::vector<std::string> args);

int rerun(const std::string& manifest, const std::string& out) {
    const LoadedManifest m = read_manifest(manifest);
    const auto target = std::filesystem::absolute(out);
    std::vector<std::string> args{m.command};
    args.insert(args.end(), m.args.begin(), m.args.end());
    args.push_back("--out=" + target.string());
    args.push_back("--threads=1");
    std::error_code ec;
    std::filesystem::current_path(m.cwd, ec);
    if (ec) throw IoError("cannot enter recorded working directory " + m.cwd.string() + ": " + ec.message());
    return run(std::move(args));
}

int run(std::vector<std::string> args) {
    CLI::App app{"dlcp: learned initialization for CP-ALS tensor decomposition", "dlcp"};
    app.set_version_flag("--version", DLCP_VERSION);
    app.require_subcommand(1);

    std::vector<Command> cmds;
    for (auto* reg : {register_generate, register_train, register_solve, register_inspect})
        for (auto& c : reg(app)) cmds.push_back(std::move(c));

    std::string manifest, rerun_out;
    CLI::App* re = app.add_subcommand("rerun", "Re-run a command from its manifest with --threads 1");
    re->add_option("manifest", manifest, "Path to manifest.json")->required();
    re->add_option("--out", rerun_out, "Output directory for the re-run")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (re->parsed()) return rerun(manifest, rerun_out);

    for (auto& c : cmds) {
        if (!c.app->parsed()) continue;
        RunContext ctx;
        ctx.out = *c.out;
        ctx.threads = *c.threads;
        ManifestInfo info;
        info.command = c.app->get_name();
        info.args = canonical_args(*c.app);
        info.cwd = std::filesystem::current_path();
        info.started_utc = utc_now();
        const auto t0 = std::chrono::steady_clock::now();
        c.run(ctx);
        info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!ctx.out.empty()) write_manifest(ctx, info);
        return 0;
    }
    return 2;
}

}  // namespace
}  // namespace dlcp::cli

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return dlcp::cli::run(std::move(args));
    } catch (const dlcp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dlcp::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const dlcp::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
