#include "logkle/commands.hpp"
#include "logkle/errors.hpp"
#include "logkle/quadrature.hpp"

#include <boost/crc.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace logkle {

namespace fs = std::filesystem;

namespace {

constexpr double kMcFailZ = 5.0;

Artifact write_artifact(const RunConfig& cfg, const std::string& file, const std::string& content)
{
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  const fs::path path = dir / file;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << content;
  os.close();
  if (!os)
    throw std::runtime_error("write failed for '" + path.string() + "'");
  boost::crc_32_type crc;
  crc.process_bytes(content.data(), content.size());
  return { file, crc.checksum(), content.size() };
}

std::string hex32(std::uint32_t v)
{
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

// total variance of the process over its domain (trace of the covariance)
double total_variance(const KleProcess& proc)
{
  const auto& d = proc.domain();
  switch (proc.kind()) {
    case ProcessKind::Wiener:
      return 0.5 * d.T * d.T;
    case ProcessKind::BrownianBridge:
      return 1.0 / 6.0;
    case ProcessKind::ExponentialCov:
      return d.T - d.t0;
  }
  return 1.0;
}

std::string parity_name(Parity p)
{
  switch (p) {
    case Parity::Odd:
      return "odd";
    case Parity::Even:
      return "even";
    case Parity::None:
      break;
  }
  return "";
}

std::vector<double> p_nodes(const RunConfig& cfg)
{
  return linspace(cfg.p_grid.lower, cfg.p_grid.upper, cfg.p_grid.points);
}

std::vector<double> pdf_times(const RunConfig& cfg, const KleProcess& proc)
{
  if (!cfg.pdf_times.empty())
    return cfg.pdf_times;
  return linspace(proc.domain().t0, proc.domain().T, 11);
}

std::string grid_csv(const DensityGrid& g, const char* column)
{
  std::ostringstream os;
  os << "t,p," << column << '\n';
  for (std::size_t it = 0; it < g.t.size(); ++it)
    for (std::size_t ip = 0; ip < g.p.size(); ++ip)
      os << csv_number(g.t[it]) << ',' << csv_number(g.p[ip]) << ',' << csv_number(g.at(it, ip)) << '\n';
  return os.str();
}

DensityPath route_for(const RunConfig& cfg, const Problem& problem)
{
  return cfg.density_path().value_or(default_path(problem));
}

} // namespace

std::string csv_number(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

CommandResult cmd_spectrum(const RunConfig& cfg)
{
  const KleProcess proc = cfg.make_process();
  const int modes = cfg.N.back();
  const double total = total_variance(proc);
  std::ostringstream os;
  os << "index,parity,eigenvalue,frequency,cumulative_variance_fraction\n";
  double cumulative = 0.0;
  for (int j = 1; j <= modes; ++j) {
    const EigenPair e = proc.eigenpair(j);
    cumulative += e.value;
    os << j << ',' << parity_name(e.parity) << ',' << csv_number(e.value) << ','
       << csv_number(e.frequency) << ',' << csv_number(cumulative / total) << '\n';
  }
  CommandResult r;
  r.artifacts.push_back(write_artifact(cfg, "spectrum.csv", os.str()));
  r.summary = std::to_string(modes) + " eigenpairs of " + proc.name();
  return r;
}

CommandResult cmd_pdf(const RunConfig& cfg)
{
  CommandResult r;
  const auto p = p_nodes(cfg);
  const Problem base = cfg.problem(cfg.N.front());
  const auto t = pdf_times(cfg, base.process);
  for (int n : cfg.N) {
    const Problem problem = cfg.problem(n);
    const DensityGrid g = density_grid(problem, p, t, route_for(cfg, problem));
    r.artifacts.push_back(write_artifact(cfg, "pdf_N" + std::to_string(n) + ".csv", grid_csv(g, "f1n")));
  }
  if (base.process.kind() == ProcessKind::Wiener) {
    const DensityGrid g = density_grid(base, p, t, DensityPath::Exact);
    r.artifacts.push_back(write_artifact(cfg, "pdf_exact.csv", grid_csv(g, "f1")));
  }
  r.summary = std::to_string(cfg.N.size()) + " density grids of " + std::to_string(t.size()) +
              " x " + std::to_string(p.size()) + " points";
  return r;
}

CommandResult cmd_moments(const RunConfig& cfg)
{
  const Problem base = cfg.problem(cfg.N.front());
  const auto& d = base.process.domain();
  const auto times = linspace(d.t0, d.T, cfg.time_points);
  const UniformGrid grid = cfg.moment_grid();
  const bool exact = base.process.kind() == ProcessKind::Wiener;
  std::vector<Moments> ref;
  if (exact)
    ref = moment_curve(base, times, DensityPath::Exact, grid);

  std::ostringstream os;
  os << "t,N,mean,variance";
  if (exact)
    os << ",exact_mean,exact_variance";
  os << '\n';
  for (int n : cfg.N) {
    const Problem problem = cfg.problem(n);
    const auto curve = moment_curve(problem, times, route_for(cfg, problem), grid);
    for (std::size_t i = 0; i < times.size(); ++i) {
      os << csv_number(times[i]) << ',' << n << ',' << csv_number(curve[i].mean) << ','
         << csv_number(curve[i].variance);
      if (exact)
        os << ',' << csv_number(ref[i].mean) << ',' << csv_number(ref[i].variance);
      os << '\n';
    }
  }
  CommandResult r;
  r.artifacts.push_back(write_artifact(cfg, "moments.csv", os.str()));
  r.summary = "moment curves on " + std::to_string(times.size()) + " time points";
  return r;
}

CommandResult cmd_errors(const RunConfig& cfg)
{
  const Problem base = cfg.problem(cfg.N.front());
  const bool exact = base.process.kind() == ProcessKind::Wiener;
  const auto& d = base.process.domain();
  const auto times = linspace(d.t0, d.T, cfg.time_points);
  const double dt = times[1] - times[0];
  const UniformGrid egrid = cfg.error_grid();
  const UniformGrid mgrid = cfg.moment_grid();

  // consecutive errors need N-1 as well
  std::vector<int> orders = cfg.N;
  if (!exact)
    for (int n : cfg.N)
      if (n >= 2 && std::find(orders.begin(), orders.end(), n - 1) == orders.end())
        orders.push_back(n - 1);
  std::sort(orders.begin(), orders.end());
  std::map<int, Problem> problems;
  for (int n : orders)
    problems.emplace(n, cfg.problem(n));

  std::ostringstream os;
  os << "kind,t";
  for (int n : cfg.N)
    os << ",N" << n;
  os << '\n';

  const ErrorKind pdf_kind = exact ? ErrorKind::PdfVsExact : ErrorKind::PdfConsecutive;
  for (double t : cfg.error_times) {
    os << to_string(pdf_kind) << ',' << csv_number(t);
    for (int n : cfg.N) {
      os << ',';
      const Problem& pr = problems.at(n);
      const TimeSlice a(pr, t, route_for(cfg, pr));
      if (exact) {
        const TimeSlice b(pr, t, DensityPath::Exact);
        os << csv_number(l1_distance(b, a, egrid));
      } else if (n >= 2) {
        const Problem& prev = problems.at(n - 1);
        const TimeSlice b(prev, t, route_for(cfg, prev));
        os << csv_number(l1_distance(a, b, egrid));
      }
    }
    os << '\n';
  }

  std::map<int, std::vector<Moments>> curves;
  for (int n : orders) {
    const Problem& pr = problems.at(n);
    curves.emplace(n, moment_curve(pr, times, route_for(cfg, pr), mgrid));
  }
  std::vector<Moments> ref;
  if (exact)
    ref = moment_curve(base, times, DensityPath::Exact, mgrid);
  for (MomentKind kind : { MomentKind::Mean, MomentKind::Variance }) {
    const ErrorKind ek = kind == MomentKind::Mean
                           ? (exact ? ErrorKind::MeanVsExact : ErrorKind::MeanConsecutive)
                           : (exact ? ErrorKind::VarianceVsExact : ErrorKind::VarianceConsecutive);
    os << to_string(ek) << ",all";
    for (int n : cfg.N) {
      os << ',';
      if (exact)
        os << csv_number(moment_curve_distance(ref, curves.at(n), kind, dt));
      else if (n >= 2)
        os << csv_number(moment_curve_distance(curves.at(n), curves.at(n - 1), kind, dt));
    }
    os << '\n';
  }

  CommandResult r;
  r.artifacts.push_back(write_artifact(cfg, "errors.csv", os.str()));
  r.summary = std::string(exact ? "errors against the exact density" : "consecutive-truncation errors");
  return r;
}

CommandResult cmd_mc_check(const RunConfig& cfg)
{
  const Problem problem = cfg.problem(cfg.mc.N);
  std::optional<Problem> sampler;
  if (cfg.mc.sampler_N)
    sampler.emplace(cfg.problem(*cfg.mc.sampler_N));
  const McReport rep = mc_density_check(problem, cfg.mc.t, cfg.mc_config(), cfg.density_path(),
                                        sampler ? &*sampler : nullptr);
  const bool pass = rep.max_abs_z <= kMcFailZ && std::abs(rep.mean_z) <= kMcFailZ &&
                    std::abs(rep.variance_z) <= kMcFailZ;
  std::string text = rep.to_text();
  text += std::string("  verdict        ") + (pass ? "PASS" : "FAIL") + '\n';
  CommandResult r;
  r.artifacts.push_back(write_artifact(cfg, "mc_report.txt", text));
  r.artifacts.push_back(write_artifact(cfg, "mc_histogram.csv", rep.to_csv()));
  r.exit_code = pass ? 0 : 1;
  r.summary = text;
  return r;
}

CommandResult run_command(const std::string& command, const RunConfig& cfg)
{
  cfg.validate();
  CommandResult r;
  if (command == "spectrum")
    r = cmd_spectrum(cfg);
  else if (command == "pdf")
    r = cmd_pdf(cfg);
  else if (command == "moments")
    r = cmd_moments(cfg);
  else if (command == "errors")
    r = cmd_errors(cfg);
  else if (command == "mc-check")
    r = cmd_mc_check(cfg);
  else
    throw ConfigError("unknown command '" + command + "'");

  nlohmann::json m;
  m["command"] = command;
  m["config"] = cfg.to_json();
  m["artifacts"] = nlohmann::json::array();
  for (const auto& a : r.artifacts)
    m["artifacts"].push_back({ { "file", a.file }, { "crc32", hex32(a.crc32) }, { "bytes", a.bytes } });
  m["exit_code"] = r.exit_code;
  write_artifact(cfg, "run_manifest.json", m.dump(2) + "\n");
  return r;
}

} // namespace logkle
