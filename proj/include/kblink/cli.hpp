#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

namespace kblink::cli {

enum class OutputFormat { kTable, kRecords };

struct BuildIndexOptions {
  std::filesystem::path kb;
  std::filesystem::path lists;
  std::filesystem::path out;
  std::optional<std::filesystem::path> config;  // only `normalizer` is used
};

struct LinkOptions {
  std::filesystem::path index;
  std::filesystem::path corpus;
  std::filesystem::path out;
  std::optional<std::filesystem::path> config;
  std::optional<double> lambda;
  std::optional<double> nil_threshold;
  int jobs = 0;  // 0: available parallelism
};

struct EvaluateOptions {
  std::filesystem::path gold;
  std::filesystem::path predictions;
  std::optional<std::filesystem::path> out;  // stdout when empty
  OutputFormat format = OutputFormat::kTable;
};

struct StatsOptions {
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> index;
  std::optional<std::filesystem::path> kb;
  std::optional<std::filesystem::path> lists;
  std::optional<std::filesystem::path> out;
  OutputFormat format = OutputFormat::kTable;
  bool per_category = false;
};

// Each command returns a process exit code: 0 on success, 1 after writing
// an error diagnostic to `err`. Data goes to files or `out` only.
int cmd_build_index(const BuildIndexOptions& opts, std::ostream& err);
int cmd_link(const LinkOptions& opts, std::ostream& err);
int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace kblink::cli
