// Factor-graph assembly, message scheduling, and the two experiment drivers
// (Kalman filtering, Bayesian linear regression), runnable on either the
// analytic or the spiking backend.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "snngbp/gaussian.hpp"
#include "snngbp/nodes.hpp"

namespace snngbp {

/// Message computations shared by both execution backends.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string kind() const = 0;
  virtual GaussianMessage equality(const GaussianMessage& a, const GaussianMessage& b) = 0;
  virtual GaussianMessage addition(const GaussianMessage& first,
                                   const GaussianMessage& second,
                                   AdditionDirection direction) = 0;
  virtual GaussianMessage scaling(const GaussianMessage& msg, double a,
                                  ScalingDirection direction) = 0;
};

/// The closed-form update rules.
class AnalyticBackend final : public Backend {
 public:
  std::string kind() const override { return "analytic"; }
  GaussianMessage equality(const GaussianMessage& a, const GaussianMessage& b) override;
  GaussianMessage addition(const GaussianMessage& first, const GaussianMessage& second,
                           AdditionDirection direction) override;
  GaussianMessage scaling(const GaussianMessage& msg, double a,
                          ScalingDirection direction) override;
};

/// Encode -> LIF network -> decode per node application. Requires trained
/// equality weights at construction.
class SpikingBackend final : public Backend {
 public:
  SpikingBackend(EqualityNodeSnn equality_node, AdditionNodeSnn addition_node);

  std::string kind() const override { return "spiking"; }
  GaussianMessage equality(const GaussianMessage& a, const GaussianMessage& b) override;
  GaussianMessage addition(const GaussianMessage& first, const GaussianMessage& second,
                           AdditionDirection direction) override;
  GaussianMessage scaling(const GaussianMessage& msg, double a,
                          ScalingDirection direction) override;

 private:
  EqualityNodeSnn equality_node_;
  AdditionNodeSnn addition_node_;
};

// ---------------------------------------------------------------------------
// Forney-style factor graph with a fixed message schedule.

enum class NodeKind { gaussian_prior, data, equality, addition, scaling };

struct FgNode {
  NodeKind kind = NodeKind::gaussian_prior;
  GaussianMessage prior;      // gaussian_prior payload
  double value = 0.0;         // data payload
  double noise_variance = 0.0;  // data: variance of the absorbed likelihood
  double scale_a = 1.0;       // scaling payload
  std::vector<int> edges;     // edge ids, in port order
};

struct FgEdge {
  int tail = -1;  // emitting node of the forward direction; -1 for half-edges
  int head = -1;
  std::optional<GaussianMessage> forward;
  std::optional<GaussianMessage> backward;
};

enum class MsgDirection { forward, backward };

struct ScheduleEntry {
  int edge = -1;
  MsgDirection direction = MsgDirection::forward;
};

/// Tree-structured graph; edges are variables, nodes are factors. Ports of
/// addition nodes are (summand, summand, sum); of scaling nodes (y, z).
class FactorGraph {
 public:
  int add_node(FgNode node);
  /// Adds a directed edge tail -> head (either may be -1, a half-edge) and
  /// registers it as the next port of each endpoint.
  int connect(int tail, int head);

  /// Checks endpoint validity and acyclicity; throws GraphError.
  void validate() const;

  /// Executes the schedule through the backend, filling edge message slots.
  void run_schedule(Backend& backend);

  std::vector<FgNode> nodes;
  std::vector<FgEdge> edges;
  std::vector<ScheduleEntry> schedule;
};

// ---------------------------------------------------------------------------
// Experiment drivers.

struct KalmanStepRecord {
  int step = 0;
  double gain = 0.0;  // analytic backend only; NaN otherwise
  GaussianMessage prediction;
  GaussianMessage posterior;
};

/// Filter the observation sequence by message passing on the per-step FFG.
/// On the analytic backend this reproduces kalman_step exactly.
std::vector<KalmanStepRecord> run_kalman(const KalmanConfig& cfg,
                                         const std::vector<double>& observations,
                                         Backend& backend);

/// Observations from the generative walk y_t = m_u + y_{t-1} + eps_t with
/// eps ~ N(0, observation variance), y_0 = prior mean.
std::vector<double> generate_kalman_observations(const KalmanConfig& cfg, int steps,
                                                 std::uint64_t seed);

struct BlrDataset {
  std::vector<double> inputs;   // scalar inputs; the bias 1 is prepended internally
  std::vector<double> targets;
  std::vector<double> true_weights;  // optional, for synthetic generation
  std::uint64_t seed = 0;
};

BlrDataset make_blr_dataset(int n_points, double w0_star, double w1_star,
                            double noise_variance, double x_min, double x_max,
                            std::uint64_t seed);

struct BlrResult {
  std::vector<GaussianMessage> posterior;  // one marginal per weight
  int sweeps_run = 0;
  double last_sweep_mean_change = 0.0;  // max |delta posterior mean| of the last sweep
};

/// Online message passing over the per-point regression subgraph:
/// one pass by default; more sweeps re-run each point with its own stored
/// message removed from the belief (message-memory belief propagation).
BlrResult run_blr(const BlrDataset& data, const BlrConfig& cfg, Backend& backend,
                  int sweeps = 1);

struct CompareRow {
  std::uint64_t seed = 0;
  int step = 0;  // time step (kalman) or weight index (blr)
  double abs_mean_error = 0.0;
  double rel_var_error = 0.0;
};

struct CompareSummary {
  std::vector<CompareRow> rows;
  double max_abs_mean_error = 0.0;
  double max_rel_var_error = 0.0;
  double mean_abs_mean_error = 0.0;
  double mean_rel_var_error = 0.0;
};

/// Run an experiment on both backends for each seed and tabulate per-step
/// errors of `candidate` against `reference`.
CompareSummary compare_backends(const std::string& experiment,
                                const std::vector<std::uint64_t>& seeds,
                                Backend& reference, Backend& candidate,
                                const KalmanConfig& kalman_cfg, int kalman_steps,
                                const BlrConfig& blr_cfg, int blr_points);

/// CSV: header "seed,step,abs_mean_err,rel_var_err", one row per comparison,
/// then aggregate rows labelled "max" and "mean".
void write_compare_csv(std::ostream& out, const CompareSummary& summary);

}  // namespace snngbp
