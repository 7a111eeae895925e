#include "snngbp/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "snngbp/random.hpp"

namespace snngbp {

GaussianMessage AnalyticBackend::equality(const GaussianMessage& a,
                                          const GaussianMessage& b) {
  return gaussian_product(a, b);
}

GaussianMessage AnalyticBackend::addition(const GaussianMessage& first,
                                          const GaussianMessage& second,
                                          AdditionDirection direction) {
  if (direction == AdditionDirection::forward) return addition_forward(first, second);
  return addition_backward(first, second);
}

GaussianMessage AnalyticBackend::scaling(const GaussianMessage& msg, double a,
                                         ScalingDirection direction) {
  if (direction == ScalingDirection::forward) return scaling_forward(msg, a);
  return scaling_backward(msg, a);
}

SpikingBackend::SpikingBackend(EqualityNodeSnn equality_node, AdditionNodeSnn addition_node)
    : equality_node_(std::move(equality_node)), addition_node_(std::move(addition_node)) {
  if (equality_node_.weights.n == 0) {
    throw NotTrainedError("spiking backend requires a loaded weight store");
  }
  require_valid(addition_node_);
  // Scheduled runs chain many decodes; each node's quantization shrink is
  // divided out so the compounded variance does not bias the gains.
  equality_node_.correct_bias = true;
  addition_node_.correct_bias = true;
}

GaussianMessage SpikingBackend::equality(const GaussianMessage& a,
                                         const GaussianMessage& b) {
  return equality_apply(equality_node_, a, b);
}

GaussianMessage SpikingBackend::addition(const GaussianMessage& first,
                                         const GaussianMessage& second,
                                         AdditionDirection direction) {
  return addition_apply(addition_node_, first, second, direction);
}

GaussianMessage SpikingBackend::scaling(const GaussianMessage& msg, double a,
                                        ScalingDirection direction) {
  return scaling_apply(msg, a, direction, equality_node_.encoder, true);
}

// ---------------------------------------------------------------------------

int FactorGraph::add_node(FgNode node) {
  nodes.push_back(std::move(node));
  return static_cast<int>(nodes.size()) - 1;
}

int FactorGraph::connect(int tail, int head) {
  const int id = static_cast<int>(edges.size());
  edges.push_back({tail, head, std::nullopt, std::nullopt});
  if (tail >= 0) nodes.at(tail).edges.push_back(id);
  if (head >= 0) nodes.at(head).edges.push_back(id);
  return id;
}

void FactorGraph::validate() const {
  const int n = static_cast<int>(nodes.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const FgEdge& e : edges) {
    if (e.tail >= n || e.head >= n || (e.tail < 0 && e.head < 0)) {
      throw GraphError("edge references an invalid node id");
    }
    if (e.tail >= 0 && e.head >= 0) {
      const int a = find(e.tail), b = find(e.head);
      if (a == b) throw GraphError("factor graph contains a cycle; v1 requires a tree");
      parent[a] = b;
    }
  }
  for (int i = 0; i < n; ++i) {
    const std::size_t expected =
        nodes[i].kind == NodeKind::equality || nodes[i].kind == NodeKind::addition ? 3
        : nodes[i].kind == NodeKind::scaling                                       ? 2
                                                                                   : 1;
    if (nodes[i].edges.size() != expected) {
      throw GraphError("node has the wrong number of connected edges");
    }
  }
}

namespace {

const GaussianMessage& incoming(const FactorGraph& g, int node, int edge) {
  const FgEdge& e = g.edges.at(edge);
  const auto& slot = e.head == node ? e.forward : e.backward;
  if (!slot.has_value()) {
    throw GraphError("schedule requests a message before its inputs are available");
  }
  return *slot;
}

}  // namespace

void FactorGraph::run_schedule(Backend& backend) {
  for (const ScheduleEntry& entry : schedule) {
    FgEdge& e = edges.at(entry.edge);
    const int emitter = entry.direction == MsgDirection::forward ? e.tail : e.head;
    if (emitter < 0) throw GraphError("schedule emits from an open half-edge");
    const FgNode& node = nodes.at(emitter);
    GaussianMessage out;
    switch (node.kind) {
      case NodeKind::gaussian_prior:
        out = node.prior;
        break;
      case NodeKind::data:
        // The Dirac observation and its adjacent noise factor are absorbed
        // into one backward message N(value, noise variance).
        if (!(node.noise_variance > 0.0)) {
          throw GraphError("data node needs a positive noise variance");
        }
        out = {node.value, node.noise_variance};
        break;
      case NodeKind::equality: {
        std::vector<int> others;
        for (int eid : node.edges) {
          if (eid != entry.edge) others.push_back(eid);
        }
        out = backend.equality(incoming(*this, emitter, others.at(0)),
                               incoming(*this, emitter, others.at(1)));
        break;
      }
      case NodeKind::addition: {
        const int port = static_cast<int>(
            std::find(node.edges.begin(), node.edges.end(), entry.edge) -
            node.edges.begin());
        if (port == 2) {
          out = backend.addition(incoming(*this, emitter, node.edges[0]),
                                 incoming(*this, emitter, node.edges[1]),
                                 AdditionDirection::forward);
        } else {
          const int other_summand = port == 0 ? node.edges[1] : node.edges[0];
          out = backend.addition(incoming(*this, emitter, other_summand),
                                 incoming(*this, emitter, node.edges[2]),
                                 AdditionDirection::backward_y);
        }
        break;
      }
      case NodeKind::scaling: {
        if (entry.edge == node.edges.at(1)) {
          out = backend.scaling(incoming(*this, emitter, node.edges[0]), node.scale_a,
                                ScalingDirection::forward);
        } else {
          out = backend.scaling(incoming(*this, emitter, node.edges[1]), node.scale_a,
                                ScalingDirection::backward);
        }
        break;
      }
    }
    (entry.direction == MsgDirection::forward ? e.forward : e.backward) = out;
  }
}

// ---------------------------------------------------------------------------

namespace {

FgNode make_node(NodeKind kind) {
  FgNode node;
  node.kind = kind;
  return node;
}

FgNode make_prior_node(const GaussianMessage& prior) {
  FgNode node;
  node.kind = NodeKind::gaussian_prior;
  node.prior = prior;
  return node;
}

}  // namespace

std::vector<KalmanStepRecord> run_kalman(const KalmanConfig& cfg,
                                         const std::vector<double>& observations,
                                         Backend& backend) {
  require_valid(cfg);
  GaussianMessage belief{cfg.prior_mean, cfg.prior_variance};
  require_valid(belief);
  const bool analytic = backend.kind() == "analytic";

  std::vector<KalmanStepRecord> records;
  records.reserve(observations.size());
  for (std::size_t t = 0; t < observations.size(); ++t) {
    FactorGraph g;
    const int n_state = g.add_node(make_prior_node(belief));
    const int n_u = g.add_node(make_prior_node({cfg.input_mean, cfg.input_variance}));
    const int n_add = g.add_node(make_node(NodeKind::addition));
    const int e_prev = g.connect(n_state, n_add);
    const int e_u = g.connect(n_u, n_add);

    int e_pred = -1;
    const int n_eq = g.add_node(make_node(NodeKind::equality));
    if (cfg.process_variance > 0.0) {
      const int n_noise = g.add_node(make_prior_node({0.0, cfg.process_variance}));
      const int n_add2 = g.add_node(make_node(NodeKind::addition));
      const int e_pred0 = g.connect(n_add, n_add2);
      const int e_noise = g.connect(n_noise, n_add2);
      e_pred = g.connect(n_add2, n_eq);
      g.schedule.push_back({e_prev, MsgDirection::forward});
      g.schedule.push_back({e_u, MsgDirection::forward});
      g.schedule.push_back({e_pred0, MsgDirection::forward});
      g.schedule.push_back({e_noise, MsgDirection::forward});
      g.schedule.push_back({e_pred, MsgDirection::forward});
    } else {
      e_pred = g.connect(n_add, n_eq);
      g.schedule.push_back({e_prev, MsgDirection::forward});
      g.schedule.push_back({e_u, MsgDirection::forward});
      g.schedule.push_back({e_pred, MsgDirection::forward});
    }
    FgNode data = make_node(NodeKind::data);
    data.value = observations[t];
    data.noise_variance = cfg.observation_variance;
    const int n_data = g.add_node(data);
    const int e_obs = g.connect(n_eq, n_data);
    const int e_out = g.connect(n_eq, -1);
    g.schedule.push_back({e_obs, MsgDirection::backward});
    g.schedule.push_back({e_out, MsgDirection::forward});

    g.validate();
    g.run_schedule(backend);

    KalmanStepRecord record;
    record.step = static_cast<int>(t) + 1;
    record.prediction = *g.edges[e_pred].forward;
    record.posterior = *g.edges[e_out].forward;
    record.gain = analytic ? record.prediction.variance /
                                 (record.prediction.variance + cfg.observation_variance)
                           : std::numeric_limits<double>::quiet_NaN();
    records.push_back(record);
    belief = record.posterior;
  }
  return records;
}

std::vector<double> generate_kalman_observations(const KalmanConfig& cfg, int steps,
                                                 std::uint64_t seed) {
  require_valid(cfg);
  if (steps < 0) throw ConfigError("observation count must be >= 0");
  Rng rng(seed);
  std::vector<double> observations;
  observations.reserve(steps);
  double previous = cfg.prior_mean;
  for (int t = 0; t < steps; ++t) {
    previous = cfg.input_mean + previous +
               rng.normal(0.0, std::sqrt(cfg.observation_variance));
    observations.push_back(previous);
  }
  return observations;
}

BlrDataset make_blr_dataset(int n_points, double w0_star, double w1_star,
                            double noise_variance, double x_min, double x_max,
                            std::uint64_t seed) {
  if (n_points < 0) throw ConfigError("dataset size must be >= 0");
  if (!(noise_variance > 0.0)) throw ConfigError("dataset noise variance must be > 0");
  Rng rng(seed);
  BlrDataset data;
  data.seed = seed;
  data.true_weights = {w0_star, w1_star};
  data.inputs.reserve(n_points);
  data.targets.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double x = rng.uniform(x_min, x_max);
    data.inputs.push_back(x);
    data.targets.push_back(w0_star + w1_star * x +
                           rng.normal(0.0, std::sqrt(noise_variance)));
  }
  return data;
}

namespace {

/// Belief of one weight: its prior combined (through the backend's equality)
/// with every stored per-point message except `skip`.
GaussianMessage cavity_belief(const GaussianMessage& prior,
                              const std::vector<std::optional<GaussianMessage>>& messages,
                              int skip, Backend& backend) {
  GaussianMessage belief = prior;
  for (int j = 0; j < static_cast<int>(messages.size()); ++j) {
    if (j == skip || !messages[j].has_value()) continue;
    belief = backend.equality(belief, *messages[j]);
  }
  return belief;
}

}  // namespace

BlrResult run_blr(const BlrDataset& data, const BlrConfig& cfg, Backend& backend,
                  int sweeps) {
  require_valid(cfg);
  if (cfg.prior_mean.size() != 2) {
    throw ConfigError("run_blr models y = w0 + w1 x and needs a 2-D prior");
  }
  if (data.inputs.size() != data.targets.size()) {
    throw ConfigError("BLR dataset inputs/targets length mismatch");
  }
  if (sweeps < 1) throw ConfigError("run_blr needs at least one sweep");
  const int n = static_cast<int>(data.inputs.size());
  const GaussianMessage prior_w0{cfg.prior_mean[0], 1.0 / cfg.prior_precision[0]};
  const GaussianMessage prior_w1{cfg.prior_mean[1], 1.0 / cfg.prior_precision[1]};
  const double noise_variance = 1.0 / cfg.noise_precision;

  std::vector<std::optional<GaussianMessage>> msg_w0(n), msg_w1(n);
  BlrResult result;
  GaussianMessage post_w0 = prior_w0, post_w1 = prior_w1;

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double previous_m0 = post_w0.mean;
    const double previous_m1 = post_w1.mean;
    for (int i = 0; i < n; ++i) {
      const GaussianMessage cav_w0 = cavity_belief(prior_w0, msg_w0, i, backend);
      const GaussianMessage cav_w1 = cavity_belief(prior_w1, msg_w1, i, backend);
      const double x = data.inputs[i];

      if (x == 0.0) {
        // The slope branch drops out of the point's subgraph; the observation
        // constrains the bias directly.
        msg_w0[i] = GaussianMessage{data.targets[i], noise_variance};
        msg_w1[i] = std::nullopt;
      } else {
        FactorGraph g;
        const int n_w0 = g.add_node(make_prior_node(cav_w0));
        const int n_w1 = g.add_node(make_prior_node(cav_w1));
        FgNode scale = make_node(NodeKind::scaling);
        scale.scale_a = x;
        const int n_scale = g.add_node(scale);
        const int n_add = g.add_node(make_node(NodeKind::addition));
        FgNode obs = make_node(NodeKind::data);
        obs.value = data.targets[i];
        obs.noise_variance = noise_variance;
        const int n_obs = g.add_node(obs);

        const int e_w0 = g.connect(n_w0, n_add);
        const int e_w1 = g.connect(n_w1, n_scale);
        const int e_v = g.connect(n_scale, n_add);
        const int e_s = g.connect(n_add, n_obs);
        g.schedule = {{e_w0, MsgDirection::forward}, {e_w1, MsgDirection::forward},
                      {e_v, MsgDirection::forward},  {e_s, MsgDirection::backward},
                      {e_w0, MsgDirection::backward}, {e_v, MsgDirection::backward},
                      {e_w1, MsgDirection::backward}};
        g.validate();
        g.run_schedule(backend);
        msg_w0[i] = g.edges[e_w0].backward;
        msg_w1[i] = g.edges[e_w1].backward;
      }
      post_w0 = backend.equality(cav_w0, *msg_w0[i]);
      post_w1 = msg_w1[i].has_value() ? backend.equality(cav_w1, *msg_w1[i]) : cav_w1;
    }
    result.sweeps_run = sweep + 1;
    result.last_sweep_mean_change = std::max(std::abs(post_w0.mean - previous_m0),
                                             std::abs(post_w1.mean - previous_m1));
  }
  result.posterior = {post_w0, post_w1};
  if (n == 0) result.posterior = {prior_w0, prior_w1};
  return result;
}

CompareSummary compare_backends(const std::string& experiment,
                                const std::vector<std::uint64_t>& seeds,
                                Backend& reference, Backend& candidate,
                                const KalmanConfig& kalman_cfg, int kalman_steps,
                                const BlrConfig& blr_cfg, int blr_points) {
  if (experiment != "kalman" && experiment != "blr") {
    throw UsageError("unknown experiment '" + experiment + "' (expected kalman or blr)");
  }
  CompareSummary summary;
  auto push = [&](std::uint64_t seed, int step, const GaussianMessage& ref,
                  const GaussianMessage& cand) {
    CompareRow row;
    row.seed = seed;
    row.step = step;
    row.abs_mean_error = std::abs(cand.mean - ref.mean);
    row.rel_var_error = std::abs(cand.variance - ref.variance) / ref.variance;
    summary.rows.push_back(row);
  };

  for (std::uint64_t seed : seeds) {
    if (experiment == "kalman") {
      const auto obs = generate_kalman_observations(kalman_cfg, kalman_steps, seed);
      const auto ref = run_kalman(kalman_cfg, obs, reference);
      const auto cand = run_kalman(kalman_cfg, obs, candidate);
      for (std::size_t t = 0; t < ref.size(); ++t) {
        push(seed, static_cast<int>(t) + 1, ref[t].posterior, cand[t].posterior);
      }
    } else {
      const auto data = make_blr_dataset(blr_points, 1.0, 1.0,
                                         1.0 / blr_cfg.noise_precision, -3.0, 3.0, seed);
      const auto ref = run_blr(data, blr_cfg, reference);
      const auto cand = run_blr(data, blr_cfg, candidate);
      for (std::size_t j = 0; j < ref.posterior.size(); ++j) {
        push(seed, static_cast<int>(j), ref.posterior[j], cand.posterior[j]);
      }
    }
  }
  for (const CompareRow& row : summary.rows) {
    summary.max_abs_mean_error = std::max(summary.max_abs_mean_error, row.abs_mean_error);
    summary.max_rel_var_error = std::max(summary.max_rel_var_error, row.rel_var_error);
    summary.mean_abs_mean_error += row.abs_mean_error;
    summary.mean_rel_var_error += row.rel_var_error;
  }
  if (!summary.rows.empty()) {
    summary.mean_abs_mean_error /= static_cast<double>(summary.rows.size());
    summary.mean_rel_var_error /= static_cast<double>(summary.rows.size());
  }
  return summary;
}

void write_compare_csv(std::ostream& out, const CompareSummary& summary) {
  out << "seed,step,abs_mean_err,rel_var_err\n";
  char buf[96];
  for (const CompareRow& row : summary.rows) {
    std::snprintf(buf, sizeof(buf), "%llu,%d,%.9g,%.9g\n",
                  static_cast<unsigned long long>(row.seed), row.step,
                  row.abs_mean_error, row.rel_var_error);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "max,,%.9g,%.9g\n", summary.max_abs_mean_error,
                summary.max_rel_var_error);
  out << buf;
  std::snprintf(buf, sizeof(buf), "mean,,%.9g,%.9g\n", summary.mean_abs_mean_error,
                summary.mean_rel_var_error);
  out << buf;
}

}  // namespace snngbp
