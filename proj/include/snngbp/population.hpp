// Population rate coding of Gaussian messages.
//
// A message N(m, sigma^2) is carried by N neurons whose preferred locations
// s_i tile [m - 3*sigma, m + 3*sigma] evenly; neuron i fires at
// r_i = r_max * exp(-(s_i - m)^2 / (2 sigma^2)). Decoding takes the weighted
// mean and variance of the locations under the rates. The +-3*sigma support
// truncation makes the decoded variance a fixed fraction c_N of the true
// variance (truncation_bias), which callers may optionally divide out.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "snngbp/gaussian.hpp"

namespace snngbp {

/// Population rate code of one Gaussian message.
struct RateCode {
  std::vector<double> locations;  // strictly increasing, evenly spaced
  std::vector<double> rates;      // Hz, in [0, r_max]
  double r_max_hz = 100.0;
  double window_s = 1.0;          // T_s
};

/// Per-neuron ordered spike-time lists within one window of length window_s.
struct SpikeTrain {
  std::vector<std::vector<double>> spikes;
  double window_s = 1.0;
};

enum class SpikeScheme { deterministic_periodic, poisson };

struct EncoderConfig {
  int n_neurons = 100;
  double r_max_hz = 100.0;
  double window_s = 1.0;
  SpikeScheme scheme = SpikeScheme::deterministic_periodic;
  std::uint64_t seed = 0;
};

void require_valid(const EncoderConfig& cfg);

/// Encode a message into its rate code on the message's own +-3*sigma grid.
RateCode encode(const GaussianMessage& msg, const EncoderConfig& cfg);

/// Decode a rate code back to moment parameters. When correct_truncation_bias
/// is set, the variance is divided by truncation_bias(N).
GaussianMessage decode(const RateCode& code, bool correct_truncation_bias = false);

/// The decoded-variance/true-variance ratio c_N of decode(encode(.)) — a
/// function of N only. Evaluated directly from the grid definition.
double truncation_bias(int n_neurons);

/// Realize a rate code as spike trains. The deterministic scheme emits
/// round(r_i * T_s) evenly spaced spikes phase-shifted by half a period;
/// the Poisson scheme draws a seeded homogeneous process per neuron.
SpikeTrain rates_to_spikes(const RateCode& code, const EncoderConfig& cfg);

/// Empirical rates: spike count per neuron divided by the window length.
std::vector<double> spikes_to_rates(const SpikeTrain& train);

/// Rate-level inversion r_i -> r_max - r_i (the "flipped" teacher signal).
RateCode complement(const RateCode& code);

enum class ShiftMode { scale };

/// Scale every location by a, keeping rates attached to their neurons.
/// For a < 0 the grid is re-sorted ascending with rates permuted along.
RateCode shift_locations(const RateCode& code, double a, ShiftMode mode = ShiftMode::scale);

/// CSV: header "index,location,rate", one row per neuron.
void write_rate_code_csv(std::ostream& out, const RateCode& code);
RateCode read_rate_code_csv(std::istream& in, double r_max_hz, double window_s);

/// CSV: header "neuron,spike_time_s", one row per spike.
void write_spike_train_csv(std::ostream& out, const SpikeTrain& train);

}  // namespace snngbp
