// STDP weight updates and the teacher-forced training loop that fits the
// equality node's 2N plastic synapses.
//
// Training presents rate-encoded message pairs (x, y) to the input layers
// while two teacher channels force the output layer: the analytically
// computed target code, delayed by the teacher offset (potentiation), and
// its complement, advanced by the same offset (depression).
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "snngbp/lif.hpp"
#include "snngbp/population.hpp"

namespace snngbp {

struct StdpParams {
  double a_plus = 0.25;
  double a_minus_mag = 0.125;  // magnitude; the rule supplies the sign
  double tau_plus_s = 0.020;
  double tau_minus_s = 0.020;
  double w_min = -1.0;
  double w_max = 1.0;
};

void require_valid(const StdpParams& p);

/// Pairwise weight change for a spike-time difference dt = t_post - t_pre.
/// Positive dt potentiates, negative dt depresses, dt = 0 contributes 0.
double stdp_delta(double dt_spike_s, const StdpParams& p);

/// All-pairs STDP over one window: weights[i] accumulates stdp_delta over
/// every (pre, post) spike pair of synapse i, then clips to [w_min, w_max].
/// Computed with exponential traces, which is algebraically identical to the
/// explicit double sum.
std::vector<double> apply_stdp(std::vector<double> weights, const SpikeTrain& pre,
                               const SpikeTrain& post, const StdpParams& p);

struct TrainingConfig {
  int n_samples = 500;
  double mean_min = -5.0;
  double mean_max = 5.0;
  double variance_min = 0.3;
  double variance_max = 3.0;
  double teacher_offset_s = 0.001;  // delta-t of the delayed/advanced teachers
  std::uint64_t seed = 7;
  int n_neurons = 100;
};

void require_valid(const TrainingConfig& cfg);

/// Trained weights of the equality node's diagonal 2N synapses, in the unit
/// range [w_min, w_max]. Synaptic drive is weight * (threshold - V_rest) mV.
struct WeightStore {
  int version = 1;
  int n = 0;
  std::vector<double> w_x;
  std::vector<double> w_y;
};

/// Physiology shared by training and testing of the equality node.
struct EqualityNodeSetup {
  LifParams lif;
  EncoderConfig encoder;
  double dt_s = 0.001;
  double init_weight_frac = 0.25;  // init uniform in [0, frac * w_max]
};

/// Per-sample training trajectory, for convergence checks and plots.
struct TrainingTrace {
  std::vector<double> mean_abs_dw;               // mean |dw| across 2N synapses
  std::vector<std::vector<double>> w_x_history;  // one snapshot per sample
  std::vector<std::vector<double>> w_y_history;
};

/// Run the STDP training loop and return the final weights. Deterministic
/// for a fixed config (seeded draws, seeded spike realizations).
WeightStore train_equality(const TrainingConfig& cfg, const StdpParams& stdp,
                           const EqualityNodeSetup& setup, TrainingTrace* trace = nullptr);

/// Text weight file: line 1 "# snngbp-weights v1 N=<N>", then rows
/// "index,w_x,w_y". Round-trips losslessly.
void save_weights(const WeightStore& store, const std::filesystem::path& path);
WeightStore load_weights(const std::filesystem::path& path);

}  // namespace snngbp
