#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace screenopt::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct CommonOptions {
  std::filesystem::path instance;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> config;
  std::vector<std::string> argv;  // recorded in the manifest
};

struct SolveOptions {
  std::optional<std::size_t> menu_size;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> max_iters;
  std::optional<std::filesystem::path> warm_start;
};

int cmd_validate(const CommonOptions& common, std::optional<std::size_t> samples);
int cmd_solve(const CommonOptions& common, const SolveOptions& options);
int cmd_oracle(const CommonOptions& common, std::optional<std::size_t> max_menu_size);
int cmd_check(const CommonOptions& common, const std::filesystem::path& menu_path);

}  // namespace screenopt::cli
