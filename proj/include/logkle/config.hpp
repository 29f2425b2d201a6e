#pragma once

#include "logkle/density.hpp"
#include "logkle/mc_oracle.hpp"
#include "logkle/stats.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace logkle {

struct ProcessSpec
{
  std::string kind = "wiener"; // wiener | brownian_bridge | exponential
  double T = 1.0;              // wiener only
  double c = 1.0;              // exponential only
  double a = 0.5;              // exponential only
  std::string xi = "gaussian"; // gaussian | uniform
};

struct InitialSpec
{
  std::string kind = "beta"; // beta | exponential
  double alpha = 7.0;
  double beta = 10.0;
  double rate = 1.0;
  double lower = 0.1;
  double upper = 0.9;
};

struct PGridSpec
{
  double lower = 0.005;
  double upper = 0.995;
  std::size_t points = 201;
};

struct McSpec
{
  double t = 0.0;
  int N = 2;
  std::optional<int> sampler_N;
  std::uint64_t seed = 42;
  std::size_t samples = 1'000'000;
  int bins = 100;
};

/// Fully resolved run configuration. JSON keys mirror the field names.
struct RunConfig
{
  std::string name = "custom";
  ProcessSpec process;
  InitialSpec initial;
  std::vector<int> N{ 1, 2, 3 };
  std::vector<int> quad_orders; // empty -> per-N defaults
  int panel_order = 10;
  std::string path = "auto"; // auto | tensor | collapsed
  PGridSpec p_grid;
  std::vector<double> pdf_times;   // time rows of pdf_N*.csv
  std::vector<double> error_times; // time rows of errors.csv
  std::size_t time_points = kDefaultTimePoints;
  std::size_t moment_grid_points = 2001;
  std::size_t error_grid_points = 2001;
  McSpec mc;
  std::string out = "out";
  int threads = 0; // 0 -> OpenMP default

  void validate() const;
  KleProcess make_process() const;
  InitialLaw make_initial() const;
  Problem problem(int n) const;
  std::optional<DensityPath> density_path() const;
  UniformGrid moment_grid() const;
  UniformGrid error_grid() const;
  McConfig mc_config() const;

  nlohmann::json to_json() const;
  /// Overlays the keys present in `j` onto `base`. Unknown keys are errors.
  static RunConfig from_json(const nlohmann::json& j, RunConfig base);
};

RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Reads a config file. A run manifest is accepted too (its "config" member
/// is used). A "preset" key selects the base the file overlays.
RunConfig load_config(const std::string& path);

} // namespace logkle
