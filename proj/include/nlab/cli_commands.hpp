#pragma once

// Command implementations behind the nlab CLI: config parsing, the five
// subcommands, and the run manifest (config + version + output digests)
// emitted for every run.

#include <string>

namespace nlab::cli {

inline constexpr const char* NLAB_VERSION = "0.1.0";

// exit codes shared by all commands
inline constexpr int EXIT_OK = 0;
inline constexpr int EXIT_CONFIG = 2;        // bad config / unreadable input
inline constexpr int EXIT_NONCONVERGED = 3;  // quadrature or solver did not converge
inline constexpr int EXIT_THRESHOLD = 4;     // a configured threshold was violated

int run_construct(const std::string& config_json, const std::string& out_dir);
int run_check(const std::string& config_json, const std::string& out_dir);
int run_peaks(const std::string& config_json, const std::string& out_dir);
int run_witness(const std::string& config_json, const std::string& out_dir);
int run_figure(const std::string& config_json, const std::string& out_dir);

// dispatch by subcommand name; reads the config file, creates out_dir
int run_command(const std::string& name, const std::string& config_path,
                const std::string& out_dir);

} // namespace nlab::cli
