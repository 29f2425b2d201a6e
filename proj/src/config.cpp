#include "logkle/config.hpp"
#include "logkle/errors.hpp"
#include "logkle/quadrature.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace logkle {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
  if (!j.is_object())
    throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

template<class T>
void read(const json& j, const char* key, T& out, const std::string& where)
{
  if (!j.contains(key))
    return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

XiLaw parse_xi(const std::string& s)
{
  if (s == "gaussian")
    return XiLaw::StandardGaussian;
  if (s == "uniform")
    return XiLaw::UniformSym;
  throw ConfigError("process.xi: expected 'gaussian' or 'uniform', got '" + s + "'");
}

} // namespace

void RunConfig::validate() const
{
  if (process.kind != "wiener" && process.kind != "brownian_bridge" && process.kind != "exponential")
    throw ConfigError("process.kind: expected wiener, brownian_bridge or exponential");
  parse_xi(process.xi);
  if (initial.kind != "beta" && initial.kind != "exponential")
    throw ConfigError("initial.kind: expected beta or exponential");
  if (N.empty())
    throw ConfigError("N: at least one truncation order is required");
  for (int n : N)
    if (n < 1)
      throw ConfigError("N: truncation orders must be >= 1");
  if (!std::is_sorted(N.begin(), N.end()) || std::adjacent_find(N.begin(), N.end()) != N.end())
    throw ConfigError("N: list must be strictly increasing");
  for (int q : quad_orders)
    if (q < 1 || q > kMaxRuleOrder)
      throw ConfigError("quad_orders: each order must be in [1, 128]");
  if (path != "auto" && path != "tensor" && path != "collapsed")
    throw ConfigError("path: expected auto, tensor or collapsed");
  if (path == "collapsed" && process.xi != "gaussian")
    throw ConfigError("path: collapsed requires gaussian xi");
  if (!(p_grid.lower > 0.0 && p_grid.lower < p_grid.upper && p_grid.upper < 1.0) || p_grid.points < 1)
    throw ConfigError("p_grid: need 0 < lower < upper < 1 and points >= 1");
  if (time_points < 3 || time_points % 2 == 0)
    throw ConfigError("time_points: must be odd and >= 3");
  if (moment_grid_points < 3 || moment_grid_points % 2 == 0)
    throw ConfigError("moment_grid_points: must be odd and >= 3");
  if (error_grid_points < 3 || error_grid_points % 2 == 0)
    throw ConfigError("error_grid_points: must be odd and >= 3");
  if (threads < 0)
    throw ConfigError("threads: must be >= 0");
  if (out.empty())
    throw ConfigError("out: directory must not be empty");

  // construct the laws: parameter errors surface here, before any compute
  KleProcess proc = make_process();
  make_initial();
  for (double t : pdf_times)
    if (!proc.domain().contains(t))
      throw ConfigError("pdf_times: time outside the process domain");
  for (double t : error_times)
    if (!proc.domain().contains(t))
      throw ConfigError("error_times: time outside the process domain");
  if (!proc.domain().contains(mc.t))
    throw ConfigError("mc.t: time outside the process domain");
  if (mc.N < 1 || (mc.sampler_N && *mc.sampler_N < 1))
    throw ConfigError("mc: N must be >= 1");
  try {
    mc_config().validate();
    problem(N.back()).validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

KleProcess RunConfig::make_process() const
{
  const XiLaw xi = parse_xi(process.xi);
  try {
    if (process.kind == "wiener")
      return KleProcess::wiener(process.T, xi);
    if (process.kind == "brownian_bridge")
      return KleProcess::brownian_bridge(xi);
    if (process.kind == "exponential")
      return KleProcess::exponential(process.c, process.a, xi);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("process: ") + e.what());
  }
  throw ConfigError("process.kind: unknown '" + process.kind + "'");
}

InitialLaw RunConfig::make_initial() const
{
  try {
    if (initial.kind == "beta")
      return InitialLaw::truncated_beta(initial.alpha, initial.beta, initial.lower, initial.upper);
    if (initial.kind == "exponential")
      return InitialLaw::truncated_exponential(initial.rate, initial.lower, initial.upper);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("initial: ") + e.what());
  }
  throw ConfigError("initial.kind: unknown '" + initial.kind + "'");
}

Problem RunConfig::problem(int n) const
{
  Problem p{ make_process(), make_initial(), n, {}, panel_order };
  if (quad_orders.size() == 1)
    p.quad_orders = quad_orders;
  else if (!quad_orders.empty()) {
    p.quad_orders = quad_orders;
    p.quad_orders.resize(static_cast<std::size_t>(n), quad_orders.back());
  }
  return p;
}

std::optional<DensityPath> RunConfig::density_path() const
{
  if (path == "tensor")
    return DensityPath::Tensor;
  if (path == "collapsed")
    return DensityPath::Collapsed;
  return std::nullopt;
}

UniformGrid RunConfig::moment_grid() const
{
  UniformGrid g = default_moment_grid();
  g.points = moment_grid_points;
  return g;
}

UniformGrid RunConfig::error_grid() const
{
  UniformGrid g = default_error_grid();
  g.points = error_grid_points;
  return g;
}

McConfig RunConfig::mc_config() const
{
  return { mc.seed, mc.samples, mc.bins };
}

json RunConfig::to_json() const
{
  json j;
  j["name"] = name;
  j["process"] = { { "kind", process.kind }, { "T", process.T }, { "c", process.c },
                   { "a", process.a }, { "xi", process.xi } };
  j["initial"] = { { "kind", initial.kind }, { "alpha", initial.alpha }, { "beta", initial.beta },
                   { "rate", initial.rate }, { "lower", initial.lower }, { "upper", initial.upper } };
  j["N"] = N;
  j["quad_orders"] = quad_orders;
  j["panel_order"] = panel_order;
  j["path"] = path;
  j["p_grid"] = { { "lower", p_grid.lower }, { "upper", p_grid.upper }, { "points", p_grid.points } };
  j["pdf_times"] = pdf_times;
  j["error_times"] = error_times;
  j["time_points"] = time_points;
  j["moment_grid_points"] = moment_grid_points;
  j["error_grid_points"] = error_grid_points;
  json m = { { "t", mc.t }, { "N", mc.N }, { "seed", mc.seed },
             { "samples", mc.samples }, { "bins", mc.bins } };
  m["sampler_N"] = mc.sampler_N ? json(*mc.sampler_N) : json(nullptr);
  j["mc"] = m;
  j["out"] = out;
  j["threads"] = threads;
  return j;
}

RunConfig RunConfig::from_json(const json& j, RunConfig base)
{
  reject_unknown(j,
                 { "preset", "name", "process", "initial", "N", "quad_orders", "panel_order", "path",
                   "p_grid", "pdf_times", "error_times", "time_points", "moment_grid_points",
                   "error_grid_points", "mc", "out", "threads" },
                 "config");
  RunConfig c = std::move(base);
  read(j, "name", c.name, "config");
  if (j.contains("process")) {
    const json& p = j.at("process");
    reject_unknown(p, { "kind", "T", "c", "a", "xi" }, "process");
    read(p, "kind", c.process.kind, "process");
    read(p, "T", c.process.T, "process");
    read(p, "c", c.process.c, "process");
    read(p, "a", c.process.a, "process");
    read(p, "xi", c.process.xi, "process");
  }
  if (j.contains("initial")) {
    const json& p = j.at("initial");
    reject_unknown(p, { "kind", "alpha", "beta", "rate", "lower", "upper" }, "initial");
    read(p, "kind", c.initial.kind, "initial");
    read(p, "alpha", c.initial.alpha, "initial");
    read(p, "beta", c.initial.beta, "initial");
    read(p, "rate", c.initial.rate, "initial");
    read(p, "lower", c.initial.lower, "initial");
    read(p, "upper", c.initial.upper, "initial");
  }
  read(j, "N", c.N, "config");
  read(j, "quad_orders", c.quad_orders, "config");
  read(j, "panel_order", c.panel_order, "config");
  read(j, "path", c.path, "config");
  if (j.contains("p_grid")) {
    const json& p = j.at("p_grid");
    reject_unknown(p, { "lower", "upper", "points" }, "p_grid");
    read(p, "lower", c.p_grid.lower, "p_grid");
    read(p, "upper", c.p_grid.upper, "p_grid");
    read(p, "points", c.p_grid.points, "p_grid");
  }
  read(j, "pdf_times", c.pdf_times, "config");
  read(j, "error_times", c.error_times, "config");
  read(j, "time_points", c.time_points, "config");
  read(j, "moment_grid_points", c.moment_grid_points, "config");
  read(j, "error_grid_points", c.error_grid_points, "config");
  if (j.contains("mc")) {
    const json& p = j.at("mc");
    reject_unknown(p, { "t", "N", "sampler_N", "seed", "samples", "bins" }, "mc");
    read(p, "t", c.mc.t, "mc");
    read(p, "N", c.mc.N, "mc");
    if (p.contains("sampler_N")) {
      if (p.at("sampler_N").is_null())
        c.mc.sampler_N.reset();
      else {
        int s = 0;
        read(p, "sampler_N", s, "mc");
        c.mc.sampler_N = s;
      }
    }
    read(p, "seed", c.mc.seed, "mc");
    read(p, "samples", c.mc.samples, "mc");
    read(p, "bins", c.mc.bins, "mc");
  }
  read(j, "out", c.out, "config");
  read(j, "threads", c.threads, "config");
  return c;
}

RunConfig preset(const std::string& name)
{
  RunConfig c;
  c.name = name;
  if (name == "example1") {
    c.process = { "wiener", 1.5, 1.0, 0.5, "gaussian" };
    c.initial = { "beta", 7.0, 10.0, 1.0, 0.1, 0.9 };
    c.N = { 1, 2, 3, 4 };
    c.pdf_times = { 0.0, 0.5, 0.75, 1.0, 1.5 };
    c.error_times = { 0.5, 0.75, 1.0, 1.5 };
    c.mc.t = 0.75;
    c.mc.N = 2;
    return c;
  }
  if (name == "example2") {
    // Exp(10) read as scale 10, i.e. rate 0.1
    c.process = { "brownian_bridge", 1.0, 1.0, 0.5, "gaussian" };
    c.initial = { "exponential", 7.0, 10.0, 0.1, 0.1, 0.9 };
    c.N = { 1, 2, 3, 4 };
    c.pdf_times = { 0.0, 0.25, 0.4, 0.5, 0.75, 1.0 };
    c.error_times = { 0.25, 0.4, 0.5 };
    c.mc.t = 0.4;
    c.mc.N = 2;
    return c;
  }
  if (name == "example3") {
    // correlation length is not given in the source setup; c = 1
    c.process = { "exponential", 1.0, 1.0, 0.5, "uniform" };
    c.initial = { "beta", 7.0, 10.0, 1.0, 0.1, 0.9 };
    c.N = { 1, 2, 3 };
    c.pdf_times = { -0.5, -0.25, 0.0, 0.25, 0.5 };
    c.error_times = { -0.25, 0.0, 0.25 };
    c.mc.t = 0.0;
    c.mc.N = 3;
    return c;
  }
  throw ConfigError("unknown preset '" + name + "' (expected example1, example2 or example3)");
}

std::vector<std::string> preset_names()
{
  return { "example1", "example2", "example3" };
}

RunConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("artifacts"))
    j = j.at("config");
  RunConfig base;
  if (j.is_object() && j.contains("preset")) {
    std::string name;
    read(j, "preset", name, "config");
    base = preset(name);
  }
  return RunConfig::from_json(j, base);
}

} // namespace logkle
