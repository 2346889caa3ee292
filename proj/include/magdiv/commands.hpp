#pragma once

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace magdiv::cli {

inline constexpr const char *kReportFormat = "magdiv-report v1";
inline constexpr const char *kToolVersion = "magdiv 0.1.0";

enum class InputKind { Tree, Matrix };
InputKind parse_kind(const std::string &text);

// One JSON document per command run; no timestamps, so identical inputs give
// identical bytes.
struct RunReport {
  std::string command;
  std::string input_digest;  // SHA-256 of the input file, hex
  nlohmann::json results;

  nlohmann::json to_json() const;
  std::string dump() const;
};

struct CommandOutput {
  RunReport report;
  std::optional<std::string> csv;  // tabular sidecar for profile/converge
};

struct InputOptions {
  InputKind kind = InputKind::Tree;
  bool check_triangle = true;
};

std::string sha256_hex(const std::string &bytes);
std::string read_file(const std::string &path);
// Writes via a temporary file and rename, so a failed write leaves nothing behind.
void write_file_atomic(const std::string &path, const std::string &contents);

CommandOutput cmd_magnitude(const std::string &tree_file);
CommandOutput cmd_diversity(const std::string &input, const InputOptions &opts, double scale = 1.0);
CommandOutput cmd_oracle(const std::string &input, const InputOptions &opts);
CommandOutput cmd_profile(const std::string &input, const InputOptions &opts, double tmin,
                          double tmax, std::size_t steps, bool log_spacing);
CommandOutput cmd_converge(const std::string &tree_file, const std::vector<std::size_t> &k_list);
CommandOutput cmd_gen(std::size_t n, const std::string &length_law, std::uint64_t seed,
                      const std::string &out);
// Measure file: JSON object {label: mass}; masses are normalized to total 1.
CommandOutput cmd_check(const std::string &input, const InputOptions &opts,
                        const std::string &measure_file);

std::vector<std::size_t> parse_k_list(const std::string &text);

nlohmann::json error_json(const std::string &command, const std::string &kind,
                          const std::string &message);

}  // namespace magdiv::cli
