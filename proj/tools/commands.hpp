#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace aiofl::cli {

struct SimulateOptions {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = "runs/latest";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> tf;
  bool plots = true;
};

struct TuneOptions {
  std::filesystem::path space;
  std::filesystem::path out = "runs/tune";
  std::optional<std::size_t> budget;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

struct AnalyzeOptions {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> config;
};

int simulate_command(const SimulateOptions& opts);
int tune_command(const TuneOptions& opts);
int presets_command(const std::optional<std::string>& show);
int analyze_command(const AnalyzeOptions& opts);

}  // namespace aiofl::cli
