#include "xyq/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "xyq/errors.hpp"

namespace xyq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw config_error("malformed number for '" + key + "': " + text);
  }
  if (pos != text.size())
    throw config_error("malformed number for '" + key + "': " + text);
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(text, &pos);
  } catch (const std::exception&) {
    throw config_error("malformed integer for '" + key + "': " + text);
  }
  if (pos != text.size())
    throw config_error("malformed integer for '" + key + "': " + text);
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw config_error("malformed boolean for '" + key + "': " + text);
}

}  // namespace

std::string to_string(Subcommand cmd) {
  switch (cmd) {
    case Subcommand::field_sweep: return "field-sweep";
    case Subcommand::tau_sweep: return "tau-sweep";
    case Subcommand::scaling: return "scaling";
    case Subcommand::validate: return "validate";
    case Subcommand::static_ref: return "static";
  }
  return "?";
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& p : split(text, ','))
    if (!p.empty()) out.push_back(parse_double("list", p));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& p : split(text, ','))
    if (!p.empty()) out.push_back(parse_int("list", p));
  return out;
}

std::vector<MeasureId> parse_measure_list(const std::string& text) {
  std::vector<MeasureId> out;
  for (const std::string& p : split(text, ','))
    if (!p.empty()) out.push_back(parse_measure(p));
  if (out.empty()) throw config_error("empty measure list");
  return out;
}

HGridSpec parse_h_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw config_error("h-grid must be min:max:count, got " + text);
  HGridSpec g;
  g.lo = parse_double("h-grid", parts[0]);
  g.hi = parse_double("h-grid", parts[1]);
  g.count = parse_int("h-grid", parts[2]);
  return g;
}

ChainSpec RunConfig::chain() const {
  return ChainSpec{n_sites, gamma, h_initial, h_final};
}

RampProtocol RunConfig::protocol(double tau, double xi) const {
  return RampProtocol{tau, xi, h_initial, h_final};
}

IntegratorConfig RunConfig::integrator() const {
  IntegratorConfig cfg;
  cfg.rel_tol = rel_tol;
  cfg.abs_tol = abs_tol;
  return cfg;
}

void RunConfig::validate() const {
  chain().validate();
  integrator().validate();
  if (out_dir.empty() && cmd != Subcommand::validate)
    throw config_error("missing output path (--out)");
  for (double tau : tau_list)
    if (!(tau > 0.0)) throw config_error("tau values must be positive");
  for (double xi : xi_list)
    if (xi < 0.0) throw config_error("xi values must be nonnegative");
  for (int r : r_list)
    if (r != 1 && r != 2) throw config_error("separations must be 1 or 2");
  if (h_grid.count < 1) throw config_error("h-grid count must be >= 1");
  if (h_grid.count > 1 && !(h_grid.hi > h_grid.lo))
    throw config_error("h-grid requires max > min");
  if (n_oracle < 4 || n_oracle % 2 != 0 || n_oracle > 12)
    throw config_error("N-oracle must be even, in [4, 12]");
  if (trajectories < 0) throw config_error("trajectories must be nonnegative");
  if (fit_window_lo < 0 || fit_window_hi < 0 ||
      (fit_window_hi > 0 && fit_window_hi <= fit_window_lo))
    throw config_error("fit window must satisfy 0 <= lo < hi");
}

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "N") cfg.n_sites = parse_int(key, value);
  else if (key == "gamma") cfg.gamma = parse_double(key, value);
  else if (key == "h-i") cfg.h_initial = parse_double(key, value);
  else if (key == "h-f") cfg.h_final = parse_double(key, value);
  else if (key == "tau") cfg.tau_list = parse_double_list(value);
  else if (key == "xi") cfg.xi_list = parse_double_list(value);
  else if (key == "r") cfg.r_list = parse_int_list(value);
  else if (key == "measures") cfg.measures = parse_measure_list(value);
  else if (key == "h-grid") cfg.h_grid = parse_h_grid(value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "rel-tol") cfg.rel_tol = parse_double(key, value);
  else if (key == "abs-tol") cfg.abs_tol = parse_double(key, value);
  else if (key == "N-oracle") cfg.n_oracle = parse_int(key, value);
  else if (key == "trajectories") cfg.trajectories = parse_int(key, value);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "dt-noise") cfg.dt_noise = parse_double(key, value);
  else if (key == "dt-prop") cfg.dt_prop = parse_double(key, value);
  else if (key == "fit-window") {
    const auto parts = split(value, ':');
    if (parts.size() != 2) throw config_error("fit-window must be lo:hi");
    cfg.fit_window_lo = parse_double(key, parts[0]);
    cfg.fit_window_hi = parse_double(key, parts[1]);
  } else if (key == "synthetic") cfg.synthetic = parse_bool(key, value);
  else throw config_error("unknown configuration key '" + key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_key_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::string resolved_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "subcommand = " << to_string(cfg.cmd) << "\n";
  os << "N = " << cfg.n_sites << "\n";
  os << "gamma = " << cfg.gamma << "\n";
  os << "h-i = " << cfg.h_initial << "\n";
  os << "h-f = " << cfg.h_final << "\n";
  auto list = [&os](const char* key, const auto& values) {
    os << key << " =";
    for (const auto& v : values) os << " " << v;
    os << "\n";
  };
  list("tau", cfg.tau_list);
  list("xi", cfg.xi_list);
  list("r", cfg.r_list);
  os << "measures =";
  for (MeasureId m : cfg.measures) os << " " << to_string(m);
  os << "\n";
  os << "h-grid = " << cfg.h_grid.lo << ":" << cfg.h_grid.hi << ":" << cfg.h_grid.count
     << "\n";
  os << "rel-tol = " << cfg.rel_tol << "\n";
  os << "abs-tol = " << cfg.abs_tol << "\n";
  os << "N-oracle = " << cfg.n_oracle << "\n";
  os << "trajectories = " << cfg.trajectories << "\n";
  os << "seed = " << cfg.seed << "\n";
  if (cfg.dt_noise > 0) os << "dt-noise = " << cfg.dt_noise << "\n";
  if (cfg.dt_prop > 0) os << "dt-prop = " << cfg.dt_prop << "\n";
  if (cfg.fit_window_hi > 0)
    os << "fit-window = " << cfg.fit_window_lo << ":" << cfg.fit_window_hi << "\n";
  if (cfg.synthetic) os << "synthetic = true\n";
  return os.str();
}

}  // namespace xyq
