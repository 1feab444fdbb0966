#include "doubtfire/cli/config_file.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "doubtfire/errors.hpp"

namespace doubtfire::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::uint64_t parse_unsigned(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty() || t[0] == '-' || t[0] == '+') throw ConfigError("expected a non-negative integer, got '" + text + "'");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (errno != 0 || end != t.c_str() + t.size()) throw ConfigError("expected a non-negative integer, got '" + text + "'");
  return v;
}

std::uint32_t parse_u32(const std::string& text) {
  const auto v = parse_unsigned(text);
  if (v > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("value out of range: " + text);
  return static_cast<std::uint32_t>(v);
}

int parse_int(const std::string& text) {
  const auto v = parse_unsigned(text);
  if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) throw ConfigError("value out of range: " + text);
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("expected a boolean, got '" + text + "'");
}

EvaluationMode parse_mode(const std::string& text) {
  const std::string t = trim(text);
  if (t == "rigorous") return EvaluationMode::Rigorous;
  if (t == "lazy") return EvaluationMode::Lazy;
  throw ConfigError("unknown evaluation mode '" + text + "' (rigorous, lazy)");
}

FaultPlan::Mode parse_fault_mode(const std::string& text) {
  const std::string t = trim(text);
  if (t == "none") return FaultPlan::Mode::None;
  if (t == "random_once") return FaultPlan::Mode::RandomOnce;
  if (t == "scripted") return FaultPlan::Mode::Scripted;
  throw ConfigError("unknown fault mode '" + text + "' (none, random_once, scripted)");
}

const char* fault_mode_name(FaultPlan::Mode mode) {
  switch (mode) {
    case FaultPlan::Mode::None: return "none";
    case FaultPlan::Mode::RandomOnce: return "random_once";
    case FaultPlan::Mode::Scripted: return "scripted";
  }
  return "?";
}

// team:step:cell:unknown:node:e, events separated by ';'
std::vector<FaultEvent> parse_events(const std::string& text) {
  std::vector<FaultEvent> events;
  for (const auto& item : split(text, ';')) {
    const auto f = split(item, ':');
    if (f.size() != 6) throw ConfigError("fault event '" + item + "' needs team:step:cell:unknown:node:e");
    FaultEvent ev;
    if (f[0] == "A") {
      ev.team = TeamId::A;
    } else if (f[0] == "B") {
      ev.team = TeamId::B;
    } else if (f[0] != "*") {
      throw ConfigError("fault event team must be A, B or *, got '" + f[0] + "'");
    }
    ev.step = parse_u32(f[1]);
    ev.cell = parse_u32(f[2]);
    ev.unknown = parse_int(f[3]);
    ev.node = parse_unsigned(f[4]);
    ev.error = parse_real(f[5]);
    events.push_back(ev);
  }
  return events;
}

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string real_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += real(values[i]);
  }
  return out;
}

}  // namespace

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t == "nan" || t == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  if (t.empty()) throw ConfigError("expected a number, got an empty value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (errno == ERANGE || end != t.c_str() + t.size() || std::isnan(v) || std::isinf(v)) {
    throw ConfigError("expected a number, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_real(item));
  if (out.empty()) throw ConfigError("expected a comma separated list of numbers");
  return out;
}

CriterionProfile parse_profile(const std::string& name) {
  const std::string n = trim(name);
  if (n == "pa_nan") return {n, CriterionSet::pa_nan(), EvaluationMode::Rigorous};
  if (n == "dt") return {n, CriterionSet::dt_only(), EvaluationMode::Rigorous};
  if (n == "der") return {n, CriterionSet::der_only(), EvaluationMode::Rigorous};
  if (n == "all-rigorous") return {n, CriterionSet::all(), EvaluationMode::Rigorous};
  if (n == "all-lazy") return {n, CriterionSet::all(), EvaluationMode::Lazy};
  throw ConfigError("unknown criterion profile '" + name + "' (pa_nan, dt, der, all-rigorous, all-lazy)");
}

Config default_config() {
  Config c;
  for (const char* name : {"pa_nan", "dt", "der", "all-rigorous", "all-lazy"}) {
    c.campaign.profiles.push_back(parse_profile(name));
  }
  return c;
}

void apply_setting(Config& config, const std::string& section, const std::string& key, const std::string& raw) {
  auto& s = config.sim;
  auto& cp = config.campaign;
  const std::string value = trim(raw);
  const std::string where = section + "." + key;
  try {
    if (section == "grid") {
      if (key == "cells") return void(s.grid.cells_per_dim = parse_int(value));
      if (key == "dim") return void(s.grid.dim = parse_int(value));
    } else if (section == "solver") {
      if (key == "order") return void(s.solver.order = parse_int(value));
      if (key == "cfl") return void(s.solver.cfl = parse_real(value));
      if (key == "gamma") return void(s.solver.gamma = parse_real(value));
      if (key == "scheme") return void(s.solver.scheme = parse_time_scheme(value));
      if (key == "initial") return void(s.initial = parse_initial_condition(value));
    } else if (section == "tolerances") {
      if (key == "tol_y") return void(s.tol.tol_y = parse_real(value));
      if (key == "tol_dt") return void(s.tol.tol_dt = parse_real(value));
      if (key == "tol_der") return void(s.tol.tol_der = parse_real(value));
      if (key == "mode") return void(s.tol.mode = parse_mode(value));
      if (key == "criteria") return void(s.criteria = parse_criterion_set(value));
      if (key == "denom_floor") return void(s.denom_floor = parse_real(value));
      if (key == "der_all_unknowns") return void(s.der_all_unknowns = parse_bool(value));
    } else if (section == "channel") {
      if (key == "latency") return void(s.channel.latency = parse_real(value));
      if (key == "jitter") return void(s.channel.jitter = parse_real(value));
      if (key == "jitter_seed") return void(s.channel.jitter_seed = parse_unsigned(value));
    } else if (section == "faults") {
      if (key == "mode") return void(s.faults.mode = parse_fault_mode(value));
      if (key == "error") return void(s.faults.error = parse_real(value));
      if (key == "density_only") return void(s.faults.density_only = parse_bool(value));
      if (key == "events") return void(s.faults.scripted = parse_events(value));
    } else if (section == "cost") {
      if (key == "task") return void(s.cost.task = parse_real(value));
      if (key == "criteria_cheap") return void(s.cost.criteria_cheap = parse_real(value));
      if (key == "criteria_der") return void(s.cost.criteria_der = parse_real(value));
      if (key == "check") return void(s.cost.check = parse_real(value));
      if (key == "adopt") return void(s.cost.adopt = parse_real(value));
    } else if (section == "run") {
      if (key == "steps") return void(s.steps = parse_u32(value));
      if (key == "seed") return void(s.seed = parse_unsigned(value));
      if (key == "sharing") return void(s.sharing = parse_bool(value));
      if (key == "trace") return void(s.trace = parse_bool(value));
      if (key == "starvation_bound") return void(s.starvation_bound = parse_unsigned(value));
    } else if (section == "campaign") {
      if (key == "runs_per_point") return void(cp.runs_per_point = parse_u32(value));
      if (key == "errors") return void(cp.errors = parse_real_list(value));
      if (key == "tol_dt_grid") return void(cp.tol_dt_grid = parse_real_list(value));
      if (key == "tol_der_grid") return void(cp.tol_der_grid = parse_real_list(value));
      if (key == "profiles") {
        cp.profiles.clear();
        for (const auto& name : split(value, ',')) cp.profiles.push_back(parse_profile(name));
        if (cp.profiles.empty()) throw ConfigError("campaign.profiles is empty");
        return;
      }
    } else {
      throw ConfigError("unknown config section [" + section + "]");
    }
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError("unknown config key " + where);
}

void apply_override(Config& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override must look like section.key=value, got '" + assignment + "'");
  }
  apply_setting(config, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
                assignment.substr(eq + 1));
}

Config parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  Config config = default_config();
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) throw ConfigError("config: key '" + section + "' outside of a section");
    for (const auto& [key, node] : entries) apply_setting(config, section, key, node.data());
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string canonical_form(const Config& config) {
  const auto& s = config.sim;
  const auto& cp = config.campaign;
  std::ostringstream o;
  o << "grid.cells = " << s.grid.cells_per_dim << '\n'
    << "grid.dim = " << s.grid.dim << '\n'
    << "solver.order = " << s.solver.order << '\n'
    << "solver.cfl = " << real(s.solver.cfl) << '\n'
    << "solver.gamma = " << real(s.solver.gamma) << '\n'
    << "solver.scheme = " << to_string(s.solver.scheme) << '\n'
    << "solver.initial = " << to_string(s.initial) << '\n'
    << "tolerances.tol_y = " << real(s.tol.tol_y) << '\n'
    << "tolerances.tol_dt = " << real(s.tol.tol_dt) << '\n'
    << "tolerances.tol_der = " << real(s.tol.tol_der) << '\n'
    << "tolerances.mode = " << to_string(s.tol.mode) << '\n'
    << "tolerances.criteria = " << to_string(s.criteria) << '\n'
    << "tolerances.denom_floor = " << real(s.denom_floor) << '\n'
    << "tolerances.der_all_unknowns = " << (s.der_all_unknowns ? "true" : "false") << '\n'
    << "channel.latency = " << real(s.channel.latency) << '\n'
    << "channel.jitter = " << real(s.channel.jitter) << '\n'
    << "channel.jitter_seed = " << s.channel.jitter_seed << '\n'
    << "faults.mode = " << fault_mode_name(s.faults.mode) << '\n'
    << "faults.error = " << real(s.faults.error) << '\n'
    << "faults.density_only = " << (s.faults.density_only ? "true" : "false") << '\n'
    << "faults.events = ";
  for (std::size_t i = 0; i < s.faults.scripted.size(); ++i) {
    const auto& ev = s.faults.scripted[i];
    if (i) o << "; ";
    o << (ev.team ? team_letter(*ev.team) : '*') << ':' << ev.step << ':' << ev.cell << ':' << ev.unknown << ':'
      << ev.node << ':' << real(ev.error);
  }
  o << '\n'
    << "cost.task = " << real(s.cost.task) << '\n'
    << "cost.criteria_cheap = " << real(s.cost.criteria_cheap) << '\n'
    << "cost.criteria_der = " << real(s.cost.criteria_der) << '\n'
    << "cost.check = " << real(s.cost.check) << '\n'
    << "cost.adopt = " << real(s.cost.adopt) << '\n'
    << "run.steps = " << s.steps << '\n'
    << "run.seed = " << s.seed << '\n'
    << "run.sharing = " << (s.sharing ? "true" : "false") << '\n'
    << "run.trace = " << (s.trace ? "true" : "false") << '\n'
    << "run.starvation_bound = " << s.starvation_bound << '\n'
    << "campaign.runs_per_point = " << cp.runs_per_point << '\n'
    << "campaign.errors = " << real_list(cp.errors) << '\n'
    << "campaign.profiles = ";
  for (std::size_t i = 0; i < cp.profiles.size(); ++i) o << (i ? "," : "") << cp.profiles[i].name;
  o << '\n'
    << "campaign.tol_dt_grid = " << real_list(cp.tol_dt_grid) << '\n'
    << "campaign.tol_der_grid = " << real_list(cp.tol_der_grid) << '\n';
  return o.str();
}

std::string config_digest(const Config& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_form(config)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace doubtfire::cli
