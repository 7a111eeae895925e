// Flat key=value configuration mirroring the simulation parameter table,
// shared by the CLI subcommands. File values are overridden by CLI flags.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "snngbp/lif.hpp"
#include "snngbp/nodes.hpp"
#include "snngbp/plasticity.hpp"

namespace snngbp {

struct CliConfig {
  double theta_mV = -50.0;
  double v_rest_mV = -80.0;
  double r_m = 1.0;
  double a_plus = 0.25;
  double a_minus_mag = 0.125;
  double theta_low_mV = -50.0;
  double theta_high_mV = -30.0;
  double r_max_hz = 100.0;
  double t_s_s = 1.0;
  double w_max = 1.0;
  double w_min = -1.0;
  double tau_plus_ms = 20.0;
  double tau_minus_ms = 20.0;
  double tau_m_ms = 10.0;
  double dt_ms = 1.0;
  int n_neurons = 100;
  int m_kernel = 50;

  /// Parse a key=value file ('#' comments and blank lines ignored).
  static CliConfig from_file(const std::filesystem::path& path);

  /// Set one key from its textual value; throws ConfigError on unknown keys.
  void set(const std::string& key, const std::string& value);

  /// Checks the assembled values against each module's invariants.
  void validate() const;

  /// Canonical one-line rendering (sorted keys), used for the provenance hash.
  std::string canonical_text() const;

  /// FNV-1a hash of canonical_text(), printed in CSV provenance lines.
  std::uint64_t hash() const;

  LifParams lif() const;
  StdpParams stdp() const;
  EncoderConfig encoder(SpikeScheme scheme = SpikeScheme::deterministic_periodic,
                        std::uint64_t seed = 0) const;
  EqualityNodeSetup equality_setup() const;
  AdditionNodeSnn addition_node() const;
  double dt_s() const { return dt_ms / 1000.0; }
};

}  // namespace snngbp
