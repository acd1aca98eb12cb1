#pragma once

// Batch front end: JSON run configurations, command dispatch and report files.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdisk/io.hpp"

namespace hdisk::cli {

inline constexpr int schema_version = 1;

enum class Exit : int { ok = 0, validation = 2, numeric = 3 };

const std::vector<std::string>& command_names();

struct RunOptions {
    std::optional<std::uint64_t> seed;  // replaces the config's seed
    std::optional<int> threads;
};

// Validates cfg for the command, writes effective_config.json, result.json and the command's CSV
// tables into out_dir, and returns the exit status. Diagnostics go to err.
Exit run_command(const std::string& command, const io::json& cfg, const std::filesystem::path& out_dir,
                 const RunOptions& opt, std::ostream& err);

// Reads the config file (an empty path means an empty config) and runs the command.
Exit run_command_file(const std::string& command, const std::filesystem::path& config,
                      const std::filesystem::path& out_dir, const RunOptions& opt, std::ostream& err);

// Markdown description of every CSV and JSON artifact and of the config blocks.
std::string data_formats_markdown();

}  // namespace hdisk::cli
