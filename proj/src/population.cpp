#include "snngbp/population.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "snngbp/random.hpp"

namespace snngbp {

void require_valid(const EncoderConfig& cfg) {
  if (cfg.n_neurons < 2) throw ConfigError("encoder needs at least 2 neurons");
  if (!(cfg.r_max_hz > 0.0)) throw ConfigError("encoder r_max must be > 0");
  if (!(cfg.window_s > 0.0)) throw ConfigError("encoder window T_s must be > 0");
}

RateCode encode(const GaussianMessage& msg, const EncoderConfig& cfg) {
  require_valid(msg);
  require_valid(cfg);
  const int n = cfg.n_neurons;
  const double sigma = std::sqrt(msg.variance);
  const double spacing = 6.0 * sigma / (n - 1);
  const double half = 0.5 * (n - 1);

  RateCode code;
  code.r_max_hz = cfg.r_max_hz;
  code.window_s = cfg.window_s;
  code.locations.resize(n);
  code.rates.resize(n);
  for (int i = 0; i < n; ++i) {
    // Centered form of s_i = m - 3*sigma + i * 6*sigma/(N-1); the offsets of
    // mirrored neurons are exact negations, so the rate pattern is symmetric
    // bit for bit and the decoded mean carries no grid-placement bias.
    const double offset = (i - half) * spacing;
    code.locations[i] = msg.mean + offset;
    code.rates[i] = cfg.r_max_hz * std::exp(-offset * offset / (2.0 * msg.variance));
  }
  return code;
}

namespace {

GaussianMessage weighted_moments(const std::vector<double>& locations,
                                 const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw InvalidMessageError("cannot decode an all-zero rate code");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < locations.size(); ++i) mean += weights[i] * locations[i];
  mean /= total;
  double variance = 0.0;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    const double d = locations[i] - mean;
    variance += weights[i] * d * d;
  }
  variance /= total;
  return {mean, variance};
}

}  // namespace

GaussianMessage decode(const RateCode& code, bool correct_truncation_bias) {
  if (code.locations.size() != code.rates.size() || code.locations.size() < 2) {
    throw InvalidMessageError("rate code needs matching locations/rates, N >= 2");
  }
  GaussianMessage decoded = weighted_moments(code.locations, code.rates);
  if (correct_truncation_bias) {
    decoded.variance /= truncation_bias(static_cast<int>(code.locations.size()));
  }
  return decoded;
}

double truncation_bias(int n_neurons) {
  if (n_neurons < 2) throw ConfigError("truncation bias needs N >= 2");
  // Ratio for the unit Gaussian on the grid u_i in [-3, 3]; scale-invariant.
  double total = 0.0;
  double second = 0.0;
  const double half = 0.5 * (n_neurons - 1);
  const double spacing = 6.0 / (n_neurons - 1);
  for (int i = 0; i < n_neurons; ++i) {
    const double u = (i - half) * spacing;
    const double w = std::exp(-u * u / 2.0);
    total += w;
    second += w * u * u;
  }
  return second / total;
}

SpikeTrain rates_to_spikes(const RateCode& code, const EncoderConfig& cfg) {
  require_valid(cfg);
  SpikeTrain train;
  train.window_s = code.window_s;
  train.spikes.resize(code.rates.size());
  if (cfg.scheme == SpikeScheme::deterministic_periodic) {
    for (std::size_t i = 0; i < code.rates.size(); ++i) {
      const long count = std::lround(code.rates[i] * code.window_s);
      if (count <= 0) continue;
      auto& list = train.spikes[i];
      list.reserve(count);
      for (long k = 0; k < count; ++k) {
        list.push_back(code.window_s * (2 * k + 1) / (2.0 * count));
      }
    }
  } else {
    // One sub-stream per neuron so a neuron's train does not depend on the
    // rates of the others.
    for (std::size_t i = 0; i < code.rates.size(); ++i) {
      const double rate = code.rates[i];
      if (rate <= 0.0) continue;
      Rng rng(cfg.seed * 0x9e3779b97f4a7c15ULL + i + 1);
      double t = rng.exponential(rate);
      auto& list = train.spikes[i];
      while (t < code.window_s) {
        list.push_back(t);
        t += rng.exponential(rate);
      }
    }
  }
  return train;
}

std::vector<double> spikes_to_rates(const SpikeTrain& train) {
  std::vector<double> rates(train.spikes.size());
  for (std::size_t i = 0; i < train.spikes.size(); ++i) {
    rates[i] = static_cast<double>(train.spikes[i].size()) / train.window_s;
  }
  return rates;
}

RateCode complement(const RateCode& code) {
  RateCode flipped = code;
  for (double& r : flipped.rates) r = code.r_max_hz - r;
  return flipped;
}

RateCode shift_locations(const RateCode& code, double a, ShiftMode /*mode*/) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw SingularScaleError("shift_locations requires a finite, nonzero factor");
  }
  RateCode shifted = code;
  for (double& s : shifted.locations) s *= a;
  if (a < 0.0) {
    std::reverse(shifted.locations.begin(), shifted.locations.end());
    std::reverse(shifted.rates.begin(), shifted.rates.end());
  }
  return shifted;
}

void write_rate_code_csv(std::ostream& out, const RateCode& code) {
  out << "index,location,rate\n";
  char buf[80];
  for (std::size_t i = 0; i < code.locations.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, code.locations[i],
                  code.rates[i]);
    out << buf;
  }
}

RateCode read_rate_code_csv(std::istream& in, double r_max_hz, double window_s) {
  RateCode code;
  code.r_max_hz = r_max_hz;
  code.window_s = window_s;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line.rfind("index,location,rate", 0) != 0) {
        throw FileFormatError("rate code CSV must start with 'index,location,rate'");
      }
      saw_header = true;
      continue;
    }
    std::istringstream row(line);
    std::string field;
    double values[3];
    for (int f = 0; f < 3; ++f) {
      if (!std::getline(row, field, ',')) {
        throw FileFormatError("rate code CSV row has too few fields: " + line);
      }
      try {
        values[f] = std::stod(field);
      } catch (const std::exception&) {
        throw FileFormatError("rate code CSV has a non-numeric field: " + field);
      }
    }
    code.locations.push_back(values[1]);
    code.rates.push_back(values[2]);
  }
  if (code.locations.size() < 2) {
    throw FileFormatError("rate code CSV holds fewer than 2 neurons");
  }
  return code;
}

void write_spike_train_csv(std::ostream& out, const SpikeTrain& train) {
  out << "neuron,spike_time_s\n";
  char buf[64];
  for (std::size_t i = 0; i < train.spikes.size(); ++i) {
    for (double t : train.spikes[i]) {
      std::snprintf(buf, sizeof(buf), "%zu,%.9f\n", i, t);
      out << buf;
    }
  }
}

}  // namespace snngbp
