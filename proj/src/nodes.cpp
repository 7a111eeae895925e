#include "snngbp/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace snngbp {

namespace {

std::uint64_t mix_channel(std::uint64_t seed, std::uint64_t channel) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (channel + 1);
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

SpikeTrain realize(const RateCode& code, const EncoderConfig& enc, std::uint64_t channel) {
  EncoderConfig channel_enc = enc;
  channel_enc.seed = mix_channel(enc.seed, channel);
  return rates_to_spikes(code, channel_enc);
}

std::vector<double> centered_grid(double center, double half_width, int n_points) {
  std::vector<double> grid(n_points);
  const double half = 0.5 * (n_points - 1);
  const double spacing = 2.0 * half_width / (n_points - 1);
  for (int i = 0; i < n_points; ++i) grid[i] = center + (i - half) * spacing;
  return grid;
}

GaussianMessage decode_counts(const std::vector<double>& grid,
                              const std::vector<double>& counts) {
  RateCode code;
  code.locations = grid;
  code.rates = counts;  // decode normalizes, so counts stand in for rates
  return decode(code);
}

}  // namespace

GaussianMessage equality_apply(const EqualityNodeSnn& node, const GaussianMessage& x,
                               const GaussianMessage& y) {
  if (node.weights.n == 0) {
    throw NotTrainedError("equality node has no trained weights loaded");
  }
  if (node.weights.n != node.encoder.n_neurons) {
    throw ConfigError("weight store N=" + std::to_string(node.weights.n) +
                      " does not match encoder N=" +
                      std::to_string(node.encoder.n_neurons));
  }
  require_valid(node.lif);
  const RateCode code_x = encode(x, node.encoder);
  const RateCode code_y = encode(y, node.encoder);
  const SpikeTrain spikes_x = realize(code_x, node.encoder, 0);
  const SpikeTrain spikes_y = realize(code_y, node.encoder, 1);

  const std::size_t n = static_cast<std::size_t>(node.weights.n);
  LifNetwork net;
  net.n_inputs = 2 * n;
  net.params.assign(n, node.lif);
  const double scale_mV = node.lif.threshold_mV - node.lif.v_rest_mV;
  for (std::size_t i = 0; i < n; ++i) {
    net.synapses.push_back({i, 2 * n + i, node.weights.w_x[i] * scale_mV});
  }
  for (std::size_t i = 0; i < n; ++i) {
    net.synapses.push_back({n + i, 2 * n + i, node.weights.w_y[i] * scale_mV});
  }

  SpikeTrain external;
  external.window_s = node.encoder.window_s;
  external.spikes.reserve(2 * n);
  for (const auto& list : spikes_x.spikes) external.spikes.push_back(list);
  for (const auto& list : spikes_y.spikes) external.spikes.push_back(list);

  SimConfig sim;
  sim.dt_s = node.dt_s;
  sim.duration_s = node.encoder.window_s;
  const SimResult run = simulate(net, external, sim);

  std::vector<double> counts(n);
  for (std::size_t i = 0; i < n; ++i) {
    counts[i] = static_cast<double>(run.raster.spikes[2 * n + i].size());
  }

  std::vector<double> grid;
  if (node.output_grid_rule == EqualityOutputGrid::product) {
    const GaussianMessage combined = gaussian_product(x, y);
    grid = centered_grid(combined.mean, 3.0 * std::sqrt(combined.variance),
                         static_cast<int>(n));
  } else {
    grid.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      grid[i] = 0.5 * (code_x.locations[i] + code_y.locations[i]);
    }
  }
  GaussianMessage out = decode_counts(grid, counts);
  if (node.correct_bias) {
    // Pipeline constant of the deterministic realization: the output counts
    // follow the rounded encoder counts.
    out.variance /= count_quantization_bias(
        node.encoder.n_neurons, node.encoder.r_max_hz * node.encoder.window_s);
  }
  return out;
}

void require_valid(const AdditionNodeSnn& node) {
  if (node.n_neurons < 2) throw ConfigError("addition node needs N >= 2");
  if (node.m_kernel < 1) throw ConfigError("addition node needs M >= 1");
  if (!(node.lif.v_rest_mV < node.theta_low_mV && node.theta_low_mV < node.theta_high_mV)) {
    throw ConfigError("addition node requires V_rest < theta_low < theta_high");
  }
  if (!(node.eps_mV > 0.0)) throw ConfigError("addition node requires eps > 0");
}

KernelSpec build_kernel(const GaussianMessage& y, const AdditionNodeSnn& node) {
  require_valid(node);
  require_valid(y);
  KernelSpec spec;
  const int n = node.n_neurons;
  spec.locations.resize(n);
  spec.m_low.resize(n);
  spec.m_high.resize(n);
  const double sigma = std::sqrt(y.variance);
  const double spacing = 6.0 * sigma / (n - 1);
  const double half = 0.5 * (n - 1);
  for (int i = 0; i < n; ++i) {
    const double offset = (i - half) * spacing;
    spec.locations[i] = y.mean + offset;
    const double activation = std::exp(-offset * offset / (2.0 * y.variance));
    spec.m_low[i] = static_cast<int>(std::floor(node.m_kernel * activation));
    spec.m_high[i] = node.m_kernel - spec.m_low[i];
  }
  return spec;
}

std::vector<PatchWindow> make_patches(int n_neurons) {
  if (n_neurons < 1) throw ConfigError("make_patches needs N >= 1");
  const std::size_t n = static_cast<std::size_t>(n_neurons);
  std::vector<PatchWindow> patches(2 * n - 1);
  for (std::size_t i = 0; i < patches.size(); ++i) patches[i] = {i, n};
  return patches;
}

std::vector<double> addition_output_grid(const std::vector<double>& sx,
                                         const std::vector<double>& sy) {
  if (sx.size() != sy.size() || sx.size() < 2) {
    throw ConfigError("addition output grid needs two equal-length grids, N >= 2");
  }
  const auto [x_lo, x_hi] = std::minmax_element(sx.begin(), sx.end());
  const auto [y_lo, y_hi] = std::minmax_element(sy.begin(), sy.end());
  const double s_min = std::min(*x_lo, *y_lo);
  const double s_max = std::max(*x_hi, *y_hi);
  const std::size_t n = sx.size();
  std::vector<double> grid(2 * n - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = 2.0 * s_min +
              static_cast<double>(i) * (2.0 * s_max - 2.0 * s_min) /
                  static_cast<double>(2 * n - 2);
  }
  return grid;
}

GaussianMessage addition_apply(const AdditionNodeSnn& node, const GaussianMessage& first,
                               const GaussianMessage& second, AdditionDirection direction) {
  require_valid(node);
  require_valid(first);
  require_valid(second);
  EncoderConfig enc = node.encoder;
  enc.n_neurons = node.n_neurons;

  // forward: layer = x, kernel = y. Backward messages reuse the forward
  // machinery with the known summand's mean negated: m_y = m_z + (-m_x).
  GaussianMessage layer_msg, kernel_msg;
  switch (direction) {
    case AdditionDirection::forward:
      layer_msg = first;
      kernel_msg = second;
      break;
    case AdditionDirection::backward_y:
    case AdditionDirection::backward_x:
      layer_msg = second;  // the z-message
      kernel_msg = {-first.mean, first.variance};
      break;
    default:
      throw UsageError("unknown addition direction");
  }

  const RateCode layer_code = encode(layer_msg, enc);
  const SpikeTrain layer_spikes = realize(layer_code, enc, 0);
  const KernelSpec kernel = build_kernel(kernel_msg, node);
  const std::size_t n = static_cast<std::size_t>(node.n_neurons);
  const std::size_t padded = 3 * n - 2;

  // Kernel neurons fed by the same padded input neuron at the same threshold
  // are identical dynamical systems, so one representative per (padded
  // neuron, threshold class) is simulated and counts carry M_l/M_h
  // multiplicities in the pooling sum below.
  LifNetwork net;
  net.n_inputs = padded;
  LifParams low = node.lif;
  low.threshold_mV = node.theta_low_mV;
  LifParams high = node.lif;
  high.threshold_mV = node.theta_high_mV;
  net.params.reserve(2 * padded);
  for (std::size_t j = 0; j < padded; ++j) net.params.push_back(low);
  for (std::size_t j = 0; j < padded; ++j) net.params.push_back(high);
  const double w = node.theta_low_mV - node.lif.v_rest_mV + node.eps_mV;
  for (std::size_t j = 0; j < padded; ++j) net.synapses.push_back({j, padded + j, w});
  for (std::size_t j = 0; j < padded; ++j) {
    net.synapses.push_back({j, 2 * padded + j, w});
  }

  SpikeTrain external;
  external.window_s = enc.window_s;
  external.spikes.resize(padded);
  for (std::size_t i = 0; i < n; ++i) {
    external.spikes[n - 1 + i] = layer_spikes.spikes[i];
  }

  SimConfig sim;
  sim.dt_s = node.dt_s;
  sim.duration_s = enc.window_s;
  const SimResult run = simulate(net, external, sim);

  const std::vector<PatchWindow> patches = make_patches(node.n_neurons);
  std::vector<double> pooled(patches.size(), 0.0);
  for (std::size_t i = 0; i < patches.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t input_index = patches[i].begin + j;
      const double low_count =
          static_cast<double>(run.raster.spikes[padded + input_index].size());
      const double high_count =
          static_cast<double>(run.raster.spikes[2 * padded + input_index].size());
      pooled[i] += kernel.m_low[j] * low_count + kernel.m_high[j] * high_count;
    }
    pooled[i] /= static_cast<double>(n * static_cast<std::size_t>(node.m_kernel));
  }

  std::vector<double> grid;
  if (node.output_grid == AdditionGrid::matched) {
    const double center = layer_msg.mean + kernel_msg.mean;
    const double spread = std::sqrt((layer_msg.variance + kernel_msg.variance) / 2.0);
    // Same per-point spacing rule as the input grids, 6*sigma_q/(N-1), so the
    // grid coincides with the doubled-extrema grid when both supports match.
    grid = centered_grid(center, 6.0 * spread, static_cast<int>(2 * n - 1));
  } else {
    grid = addition_output_grid(layer_code.locations, kernel.locations);
  }
  GaussianMessage out = decode_counts(grid, pooled);
  if (node.correct_bias) {
    // The pooled pattern is the convolution of the rounded input counts with
    // the floored kernel counts; index variances add, so the deterministic
    // shrink is the mean of the two quantization constants.
    const double layer_bias =
        count_quantization_bias(node.n_neurons, enc.r_max_hz * enc.window_s);
    const double kernel_bias = kernel_quantization_bias(node.n_neurons, node.m_kernel);
    out.variance /= 0.5 * (layer_bias + kernel_bias);
  }
  return out;
}


namespace {

double quantized_pattern_variance(int n, double (*quantize)(double), double amplitude) {
  double total = 0.0, second = 0.0;
  const double half = 0.5 * (n - 1);
  const double spacing = 6.0 / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double u = (i - half) * spacing;
    const double q = quantize(amplitude * std::exp(-u * u / 2.0));
    total += q;
    second += q * u * u;
  }
  if (!(total > 0.0)) throw ConfigError("quantized pattern is all zero");
  return second / total;
}

}  // namespace

double count_quantization_bias(int n_neurons, double max_count) {
  if (n_neurons < 2 || !(max_count >= 1.0)) {
    throw ConfigError("count quantization bias needs N >= 2 and a peak count >= 1");
  }
  return quantized_pattern_variance(
      n_neurons, +[](double x) { return std::round(x); }, max_count);
}

double kernel_quantization_bias(int n_neurons, int m_kernel) {
  if (n_neurons < 2 || m_kernel < 1) {
    throw ConfigError("kernel quantization bias needs N >= 2 and M >= 1");
  }
  return quantized_pattern_variance(
      n_neurons, +[](double x) { return std::floor(x); }, static_cast<double>(m_kernel));
}

GaussianMessage scaling_apply(const GaussianMessage& msg, double a,
                              ScalingDirection direction, const EncoderConfig& encoder,
                              bool correct_bias) {
  require_valid(msg);
  if (a == 0.0 || !std::isfinite(a)) {
    throw SingularScaleError("scaling node requires a finite, nonzero factor");
  }
  const double factor = direction == ScalingDirection::forward ? a : 1.0 / a;
  const RateCode code = encode(msg, encoder);
  const RateCode shifted = shift_locations(code, factor);
  return decode(shifted, correct_bias);
}

}  // namespace snngbp
