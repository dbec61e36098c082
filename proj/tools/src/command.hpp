// SPDX-License-Identifier: Apache-2.0
// Shared plumbing for dlcp subcommands.
#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlcp/error.hpp"

namespace dlcp::cli {

/// What a subcommand reports back for its manifest.
struct RunContext {
    std::filesystem::path out;  ///< empty when the command writes no directory
    std::size_t threads = 1;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json seeds = nlohmann::json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;  ///< file names inside `out`
    nlohmann::json csv_schemas = nlohmann::json::object();
};

using Runner = std::function<void(RunContext&)>;

struct Command {
    CLI::App* app = nullptr;
    Runner run;
    bool writes_output = true;
    std::shared_ptr<std::string> out = std::make_shared<std::string>();
    std::shared_ptr<std::size_t> threads = std::make_shared<std::size_t>(1);
};

/// Adds --out (plus aliases) and --threads.
void add_common_options(Command& cmd, bool out_required, const std::string& out_aliases = "");

std::vector<Command> register_generate(CLI::App& app);
std::vector<Command> register_train(CLI::App& app);
std::vector<Command> register_solve(CLI::App& app);
std::vector<Command> register_inspect(CLI::App& app);

/// Shortest decimal form that round-trips.
inline std::string num(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

/// CSV file with a fixed header, registered in the run context.
class CsvWriter {
public:
    CsvWriter(RunContext& ctx, const std::string& name, const std::vector<std::string>& header)
        : os_(ctx.out / name, std::ios::binary) {
        if (!os_) throw IoError("cannot open " + (ctx.out / name).string() + " for writing");
        std::string h;
        for (const auto& c : header) h += (h.empty() ? "" : ",") + c;
        os_ << h << "\n";
        ctx.outputs.push_back(name);
        ctx.csv_schemas[name] = h;
    }
    void row(const std::vector<std::string>& cells) {
        std::string r;
        for (std::size_t k = 0; k < cells.size(); ++k) r += (k ? "," : "") + cells[k];
        os_ << r << "\n";
    }
    ~CsvWriter() = default;
    void close() {
        os_.close();
        if (!os_) throw IoError("write failed");
    }

private:
    std::ofstream os_;
};

/// Creates the output directory.
void ensure_dir(const std::filesystem::path& dir);

}  // namespace dlcp::cli
