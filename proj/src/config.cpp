#include "snngbp/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace snngbp {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' has a non-numeric value '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double parsed = parse_double(key, value);
  const int as_int = static_cast<int>(parsed);
  if (static_cast<double>(as_int) != parsed) {
    throw ConfigError("config key '" + key + "' must be an integer, got '" + value + "'");
  }
  return as_int;
}

}  // namespace

CliConfig CliConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  CliConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + " is not key=value: " + line);
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void CliConfig::set(const std::string& key, const std::string& value) {
  if (key == "theta_mV") theta_mV = parse_double(key, value);
  else if (key == "v_rest_mV") v_rest_mV = parse_double(key, value);
  else if (key == "r_m") r_m = parse_double(key, value);
  else if (key == "a_plus") a_plus = parse_double(key, value);
  else if (key == "a_minus_mag") a_minus_mag = parse_double(key, value);
  else if (key == "theta_low_mV") theta_low_mV = parse_double(key, value);
  else if (key == "theta_high_mV") theta_high_mV = parse_double(key, value);
  else if (key == "r_max_hz") r_max_hz = parse_double(key, value);
  else if (key == "t_s_s") t_s_s = parse_double(key, value);
  else if (key == "w_max") w_max = parse_double(key, value);
  else if (key == "w_min") w_min = parse_double(key, value);
  else if (key == "tau_plus_ms") tau_plus_ms = parse_double(key, value);
  else if (key == "tau_minus_ms") tau_minus_ms = parse_double(key, value);
  else if (key == "tau_m_ms") tau_m_ms = parse_double(key, value);
  else if (key == "dt_ms") dt_ms = parse_double(key, value);
  else if (key == "n_neurons") n_neurons = parse_int(key, value);
  else if (key == "m_kernel") m_kernel = parse_int(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

void CliConfig::validate() const {
  require_valid(lif());
  require_valid(stdp());
  require_valid(encoder());
  require_valid(addition_node());
  if (!(dt_ms > 0.0)) throw ConfigError("dt_ms must be > 0");
}

std::string CliConfig::canonical_text() const {
  char buf[1024];
  std::snprintf(buf, sizeof(buf),
                "a_minus_mag=%.17g a_plus=%.17g dt_ms=%.17g m_kernel=%d n_neurons=%d "
                "r_m=%.17g r_max_hz=%.17g t_s_s=%.17g tau_m_ms=%.17g tau_minus_ms=%.17g "
                "tau_plus_ms=%.17g theta_high_mV=%.17g theta_low_mV=%.17g theta_mV=%.17g "
                "v_rest_mV=%.17g w_max=%.17g w_min=%.17g",
                a_minus_mag, a_plus, dt_ms, m_kernel, n_neurons, r_m, r_max_hz, t_s_s,
                tau_m_ms, tau_minus_ms, tau_plus_ms, theta_high_mV, theta_low_mV, theta_mV,
                v_rest_mV, w_max, w_min);
  return buf;
}

std::uint64_t CliConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : canonical_text()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

LifParams CliConfig::lif() const {
  LifParams p;
  p.tau_m_s = tau_m_ms / 1000.0;
  p.v_rest_mV = v_rest_mV;
  p.r_m = r_m;
  p.threshold_mV = theta_mV;
  return p;
}

StdpParams CliConfig::stdp() const {
  StdpParams p;
  p.a_plus = a_plus;
  p.a_minus_mag = a_minus_mag;
  p.tau_plus_s = tau_plus_ms / 1000.0;
  p.tau_minus_s = tau_minus_ms / 1000.0;
  p.w_min = w_min;
  p.w_max = w_max;
  return p;
}

EncoderConfig CliConfig::encoder(SpikeScheme scheme, std::uint64_t seed) const {
  EncoderConfig cfg;
  cfg.n_neurons = n_neurons;
  cfg.r_max_hz = r_max_hz;
  cfg.window_s = t_s_s;
  cfg.scheme = scheme;
  cfg.seed = seed;
  return cfg;
}

EqualityNodeSetup CliConfig::equality_setup() const {
  EqualityNodeSetup setup;
  setup.lif = lif();
  setup.encoder = encoder();
  setup.dt_s = dt_s();
  return setup;
}

AdditionNodeSnn CliConfig::addition_node() const {
  AdditionNodeSnn node;
  node.n_neurons = n_neurons;
  node.m_kernel = m_kernel;
  node.theta_low_mV = theta_low_mV;
  node.theta_high_mV = theta_high_mV;
  node.lif = lif();
  node.encoder = encoder();
  node.dt_s = dt_s();
  return node;
}

}  // namespace snngbp
