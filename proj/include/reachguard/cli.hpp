#pragma once

// Command-line front end. Each command returns its process exit status:
//   0  clean
//   1  bad invocation, unreadable config or missing artifacts
//   2  (run) some verdict was uncertain or a local-unsafe flag was raised
//   3  (audit) the soundness audit found violations

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace reachguard::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUncertain = 2;
inline constexpr int kExitViolation = 3;

struct RunArgs {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  bool store_reach = false;
  std::size_t truth_stride = 10;
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cmd_audit(const std::filesystem::path& config, std::optional<std::uint64_t> seed,
              const std::optional<std::filesystem::path>& out_dir, std::ostream& out,
              std::ostream& err);
int cmd_report(const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);
int cmd_dump_reach(const std::filesystem::path& out_dir, std::uint32_t agent,
                   std::optional<double> from, std::optional<double> to, std::ostream& out,
                   std::ostream& err);
int cmd_capacity(const std::filesystem::path& profile, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to one subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reachguard::cli
