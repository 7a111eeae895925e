#include "snngbp/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "snngbp/random.hpp"

namespace snngbp {

void require_valid(const StdpParams& p) {
  if (!(p.a_plus > 0.0) || !(p.a_minus_mag > 0.0)) {
    throw ConfigError("STDP amplitudes must be > 0");
  }
  if (!(p.tau_plus_s > 0.0) || !(p.tau_minus_s > 0.0)) {
    throw ConfigError("STDP time constants must be > 0");
  }
  if (!(p.w_min < p.w_max)) throw ConfigError("STDP requires w_min < w_max");
}

double stdp_delta(double dt_spike_s, const StdpParams& p) {
  if (dt_spike_s > 0.0) return p.a_plus * std::exp(-dt_spike_s / p.tau_plus_s);
  if (dt_spike_s < 0.0) return -p.a_minus_mag * std::exp(dt_spike_s / p.tau_minus_s);
  return 0.0;
}

std::vector<double> apply_stdp(std::vector<double> weights, const SpikeTrain& pre,
                               const SpikeTrain& post, const StdpParams& p) {
  require_valid(p);
  if (pre.spikes.size() != weights.size() || post.spikes.size() != weights.size()) {
    throw ConfigError("apply_stdp expects one pre/post train per synapse");
  }
  for (std::size_t syn = 0; syn < weights.size(); ++syn) {
    const auto& pre_times = pre.spikes[syn];
    const auto& post_times = post.spikes[syn];
    // Exponential traces make the all-pairs double sum a single merge pass.
    // Events sharing a timestamp see only strictly earlier spikes, so
    // coincident pairs (dt = 0) contribute nothing, matching stdp_delta.
    double pre_trace = 0.0, post_trace = 0.0;
    double pre_at = 0.0, post_at = 0.0;
    double dw = 0.0;
    std::size_t i = 0, j = 0;
    while (i < pre_times.size() || j < post_times.size()) {
      const double tp = i < pre_times.size() ? pre_times[i]
                                             : std::numeric_limits<double>::infinity();
      const double tq = j < post_times.size() ? post_times[j]
                                              : std::numeric_limits<double>::infinity();
      const double t = std::min(tp, tq);
      pre_trace *= std::exp(-(t - pre_at) / p.tau_plus_s);
      post_trace *= std::exp(-(t - post_at) / p.tau_minus_s);
      pre_at = post_at = t;
      std::size_t new_pre = 0, new_post = 0;
      while (i < pre_times.size() && pre_times[i] == t) {
        dw -= p.a_minus_mag * post_trace;  // this pre after every earlier post
        ++new_pre;
        ++i;
      }
      while (j < post_times.size() && post_times[j] == t) {
        dw += p.a_plus * pre_trace;  // this post after every earlier pre
        ++new_post;
        ++j;
      }
      pre_trace += static_cast<double>(new_pre);
      post_trace += static_cast<double>(new_post);
    }
    weights[syn] = std::clamp(weights[syn] + dw, p.w_min, p.w_max);
  }
  return weights;
}

void require_valid(const TrainingConfig& cfg) {
  if (cfg.n_samples < 0) throw ConfigError("training sample count must be >= 0");
  if (!(cfg.mean_min <= cfg.mean_max)) throw ConfigError("training mean range is empty");
  if (!(cfg.variance_min > 0.0) || !(cfg.variance_min <= cfg.variance_max)) {
    throw ConfigError("training variance range must be positive and non-empty");
  }
  if (!(cfg.teacher_offset_s > 0.0)) throw ConfigError("teacher offset must be > 0");
  if (cfg.n_neurons < 2) throw ConfigError("training needs at least 2 neurons");
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0x517cc1b727220a95ULL * (b + 1);
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

SpikeTrain offset_train(const SpikeTrain& train, double offset_s) {
  SpikeTrain shifted;
  shifted.window_s = train.window_s;
  shifted.spikes.resize(train.spikes.size());
  for (std::size_t i = 0; i < train.spikes.size(); ++i) {
    for (double t : train.spikes[i]) {
      const double moved = t + offset_s;
      if (moved >= 0.0 && moved < train.window_s) shifted.spikes[i].push_back(moved);
    }
  }
  return shifted;
}

}  // namespace

WeightStore train_equality(const TrainingConfig& cfg, const StdpParams& stdp,
                           const EqualityNodeSetup& setup, TrainingTrace* trace) {
  require_valid(cfg);
  require_valid(stdp);
  require_valid(setup.lif);
  EncoderConfig enc = setup.encoder;
  enc.n_neurons = cfg.n_neurons;
  require_valid(enc);

  const int n = cfg.n_neurons;
  Rng rng(cfg.seed);
  WeightStore store;
  store.n = n;
  store.w_x.resize(n);
  store.w_y.resize(n);
  for (int i = 0; i < n; ++i) store.w_x[i] = rng.uniform(0.0, setup.init_weight_frac * stdp.w_max);
  for (int i = 0; i < n; ++i) store.w_y[i] = rng.uniform(0.0, setup.init_weight_frac * stdp.w_max);

  // Layout: x inputs, y inputs, positive teacher, negative teacher, outputs.
  const std::size_t un = static_cast<std::size_t>(n);
  LifNetwork net;
  net.n_inputs = 4 * un;
  net.params.assign(un, setup.lif);
  const double scale_mV = setup.lif.threshold_mV - setup.lif.v_rest_mV;
  for (std::size_t i = 0; i < un; ++i) net.synapses.push_back({i, 4 * un + i, 0.0});
  for (std::size_t i = 0; i < un; ++i) net.synapses.push_back({un + i, 4 * un + i, 0.0});
  for (std::size_t i = 0; i < un; ++i) {
    net.synapses.push_back({2 * un + i, 4 * un + i, 2.0 * scale_mV});
  }
  for (std::size_t i = 0; i < un; ++i) {
    net.synapses.push_back({3 * un + i, 4 * un + i, 2.0 * scale_mV});
  }

  SimConfig sim;
  sim.dt_s = setup.dt_s;
  sim.duration_s = enc.window_s;

  for (int sample = 0; sample < cfg.n_samples; ++sample) {
    const GaussianMessage msg_x{rng.uniform(cfg.mean_min, cfg.mean_max),
                                rng.uniform(cfg.variance_min, cfg.variance_max)};
    const GaussianMessage msg_y{rng.uniform(cfg.mean_min, cfg.mean_max),
                                rng.uniform(cfg.variance_min, cfg.variance_max)};
    const GaussianMessage target = gaussian_product(msg_x, msg_y);

    auto spikes_for = [&](const RateCode& code, std::uint64_t channel) {
      EncoderConfig channel_enc = enc;
      channel_enc.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(sample), channel);
      return rates_to_spikes(code, channel_enc);
    };
    const RateCode target_code = encode(target, enc);
    const SpikeTrain x_spikes = spikes_for(encode(msg_x, enc), 0);
    const SpikeTrain y_spikes = spikes_for(encode(msg_y, enc), 1);
    const SpikeTrain pos_teacher =
        offset_train(spikes_for(target_code, 2), cfg.teacher_offset_s);
    const SpikeTrain neg_teacher =
        offset_train(spikes_for(complement(target_code), 3), -cfg.teacher_offset_s);

    for (int i = 0; i < n; ++i) {
      net.synapses[i].weight_mV = store.w_x[i] * scale_mV;
      net.synapses[un + i].weight_mV = store.w_y[i] * scale_mV;
    }

    SpikeTrain external;
    external.window_s = enc.window_s;
    external.spikes.reserve(4 * un);
    for (const auto& list : x_spikes.spikes) external.spikes.push_back(list);
    for (const auto& list : y_spikes.spikes) external.spikes.push_back(list);
    for (const auto& list : pos_teacher.spikes) external.spikes.push_back(list);
    for (const auto& list : neg_teacher.spikes) external.spikes.push_back(list);

    const SimResult run = simulate(net, external, sim);
    SpikeTrain out;
    out.window_s = enc.window_s;
    out.spikes.assign(run.raster.spikes.begin() + 4 * un, run.raster.spikes.end());

    const std::vector<double> new_wx = apply_stdp(store.w_x, x_spikes, out, stdp);
    const std::vector<double> new_wy = apply_stdp(store.w_y, y_spikes, out, stdp);

    if (trace != nullptr) {
      double total_change = 0.0;
      for (int i = 0; i < n; ++i) {
        total_change += std::abs(new_wx[i] - store.w_x[i]);
        total_change += std::abs(new_wy[i] - store.w_y[i]);
      }
      trace->mean_abs_dw.push_back(total_change / (2.0 * n));
      trace->w_x_history.push_back(new_wx);
      trace->w_y_history.push_back(new_wy);
    }
    store.w_x = new_wx;
    store.w_y = new_wy;
  }
  return store;
}

void save_weights(const WeightStore& store, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open weight file for writing: " + path.string());
  out << "# snngbp-weights v" << store.version << " N=" << store.n << "\n";
  char buf[96];
  for (int i = 0; i < store.n; ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", i, store.w_x[i], store.w_y[i]);
    out << buf;
  }
  if (!out) throw IoError("failed writing weight file: " + path.string());
}

WeightStore load_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weight file: " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw FileFormatError("weight file is empty");
  WeightStore store;
  int n = -1;
  if (std::sscanf(header.c_str(), "# snngbp-weights v%d N=%d", &store.version, &n) != 2 ||
      store.version != 1 || n < 2) {
    throw FileFormatError("unrecognized weight file header: " + header);
  }
  store.n = n;
  store.w_x.resize(n);
  store.w_y.resize(n);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int index = -1;
    double wx = 0.0, wy = 0.0;
    if (std::sscanf(line.c_str(), "%d,%lg,%lg", &index, &wx, &wy) != 3 || index != rows) {
      throw FileFormatError("malformed weight row: " + line);
    }
    if (rows >= n) {
      throw FileFormatError("weight file has more rows than N=" + std::to_string(n));
    }
    store.w_x[rows] = wx;
    store.w_y[rows] = wy;
    ++rows;
  }
  if (rows != n) {
    throw FileFormatError("weight file truncated: expected " + std::to_string(n) +
                          " rows, got " + std::to_string(rows));
  }
  return store;
}

}  // namespace snngbp
