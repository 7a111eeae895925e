// Spike-based realizations of the three factor-node updates.
//
// equality: a trained 2N -> N diagonal LIF network; inputs are rate-encoded,
//   simulated through the stored weights, and the output spike counts are
//   decoded on a configurable grid.
// addition: a fixed convolutional network; one message drives a padded input
//   layer, the other sets the per-group thresholds of an N x M kernel whose
//   pooled activity per patch forms the 2N-1 output rates.
// scaling: a pure code transform; rates are preserved and the location
//   labels are scaled.
#pragma once

#include <cstddef>
#include <vector>

#include "snngbp/lif.hpp"
#include "snngbp/plasticity.hpp"
#include "snngbp/population.hpp"

namespace snngbp {

/// Grid on which the equality node's output spikes are decoded.
///   product:  centered/scaled by applying the equality moment rule to the
///             input grids (default; see README on node grids).
///   midpoint: positional midpoint s_z,i = (s_x,i + s_y,i) / 2.
enum class EqualityOutputGrid { product, midpoint };

struct EqualityNodeSnn {
  WeightStore weights;
  EncoderConfig encoder;
  LifParams lif;
  double dt_s = 0.001;
  EqualityOutputGrid output_grid_rule = EqualityOutputGrid::product;
  bool correct_bias = false;  // divide the decoded variance by the pipeline constant
};

/// Apply the trained equality node. Serves forward and backward messages
/// alike (the node function is symmetric under relabeling).
GaussianMessage equality_apply(const EqualityNodeSnn& node, const GaussianMessage& x,
                               const GaussianMessage& y);

/// Grid on which the addition node's pooled output is decoded.
///   matched:         center m_x + m_y, spacing 6*sqrt((v_x+v_y)/2)/(N-1);
///                    coincides with doubled_extrema when the input supports
///                    are identical (default; see README on node grids).
///   doubled_extrema: the [2*s_min, 2*s_max] grid of addition_output_grid.
enum class AdditionGrid { matched, doubled_extrema };

struct AdditionNodeSnn {
  int n_neurons = 100;       // N
  int m_kernel = 50;         // M neurons per kernel group
  double theta_low_mV = -50.0;
  double theta_high_mV = -30.0;
  double eps_mV = 1.0;       // synaptic margin above the low threshold
  LifParams lif;             // resting potential, tau_m; thresholds overridden per group
  EncoderConfig encoder;
  double dt_s = 0.001;
  AdditionGrid output_grid = AdditionGrid::matched;
  bool correct_bias = false;
};

void require_valid(const AdditionNodeSnn& node);

/// Variance ratio of the round(max_count * exp(-u^2/2)) count pattern on the
/// N-point grid against the encoded unit variance; the deterministic spike
/// realization shrinks decoded variances by exactly this factor.
double count_quantization_bias(int n_neurons, double max_count);

/// Same ratio for the kernel threshold pattern floor(M * exp(-u^2/2)).
double kernel_quantization_bias(int n_neurons, int m_kernel);

/// Threshold layout of the kernel: per group, how many of the M neurons get
/// the low (pass) threshold; the remainder get the high (suppress) one.
struct KernelSpec {
  std::vector<double> locations;  // group positions s_y,i
  std::vector<int> m_low;
  std::vector<int> m_high;
};

/// M_l = floor(M * exp(-(s_i - m_y)^2 / (2 v_y))), M_h = M - M_l per group.
KernelSpec build_kernel(const GaussianMessage& y, const AdditionNodeSnn& node);

struct PatchWindow {
  std::size_t begin = 0;   // offset into the padded input layer
  std::size_t length = 0;
};

/// The 2N-1 sliding windows of length N over the zero-padded input layer
/// (padded length 3N-2).
std::vector<PatchWindow> make_patches(int n_neurons);

/// The doubled-extrema output grid: 2N-1 locations spanning [2 s_min, 2 s_max]
/// over the global extrema of both input grids.
std::vector<double> addition_output_grid(const std::vector<double>& sx,
                                         const std::vector<double>& sy);

enum class AdditionDirection { forward, backward_y, backward_x };

/// Run the convolutional addition node. forward takes (x, y); backward_y
/// takes (x, z) and backward_x takes (y, z), negating the mean of the known
/// summand per the backward update rule.
GaussianMessage addition_apply(const AdditionNodeSnn& node, const GaussianMessage& first,
                               const GaussianMessage& second, AdditionDirection direction);

enum class ScalingDirection { forward, backward };

/// Scaling node: encode, scale the location labels by a (forward) or 1/a
/// (backward), decode. correct_bias divides the decoded variance by c_N.
GaussianMessage scaling_apply(const GaussianMessage& msg, double a,
                              ScalingDirection direction, const EncoderConfig& encoder,
                              bool correct_bias = false);

}  // namespace snngbp
