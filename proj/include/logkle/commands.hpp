#pragma once

#include "logkle/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace logkle {

/// A file written by a command, with its CRC-32 for the run manifest.
struct Artifact
{
  std::string file; // relative to the output directory
  std::uint32_t crc32 = 0;
  std::size_t bytes = 0;
};

struct CommandResult
{
  int exit_code = 0;
  std::vector<Artifact> artifacts;
  std::string summary;
};

/// "%.9g".
std::string csv_number(double v);

CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_pdf(const RunConfig& cfg);
CommandResult cmd_moments(const RunConfig& cfg);
CommandResult cmd_errors(const RunConfig& cfg);
/// Exit code 1 when any bin or moment z-score exceeds 5.
CommandResult cmd_mc_check(const RunConfig& cfg);

/// Runs a subcommand by name and writes run_manifest.json next to its outputs.
CommandResult run_command(const std::string& command, const RunConfig& cfg);

} // namespace logkle
