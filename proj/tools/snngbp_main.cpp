// snngbp command-line tool: encode/decode demos, equality-node training,
// node evaluation suites, and the Kalman / linear-regression experiments.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snngbp/config.hpp"
#include "snngbp/random.hpp"
#include "snngbp/report.hpp"
#include "snngbp/runtime.hpp"

namespace fs = std::filesystem;
using namespace snngbp;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitMissingArtifact = 4;
constexpr int kExitToleranceFailure = 5;

struct ToleranceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path.string());
  return out;
}

SpikeScheme parse_scheme(const std::string& name) {
  if (name == "det" || name == "deterministic") return SpikeScheme::deterministic_periodic;
  if (name == "poisson") return SpikeScheme::poisson;
  throw UsageError("unknown spike scheme '" + name + "' (det|poisson)");
}

CliConfig load_config(const std::string& config_path,
                      const std::vector<std::string>& overrides) {
  CliConfig cfg;
  if (!config_path.empty()) cfg = CliConfig::from_file(config_path);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

WeightStore load_weight_artifact(const std::string& path, const CliConfig& cfg) {
  if (path.empty()) {
    throw NotTrainedError("this command needs trained weights (--weights <file>)");
  }
  if (!fs::exists(path)) {
    throw NotTrainedError("weight file does not exist: " + path);
  }
  WeightStore store = load_weights(path);
  if (store.n != cfg.n_neurons) {
    throw FileFormatError("weight file N=" + std::to_string(store.n) +
                          " does not match configured n_neurons=" +
                          std::to_string(cfg.n_neurons));
  }
  return store;
}

SpikingBackend make_spiking_backend(const CliConfig& cfg, const WeightStore& weights) {
  EqualityNodeSnn eq_node;
  eq_node.weights = weights;
  eq_node.encoder = cfg.encoder();
  eq_node.lif = cfg.lif();
  eq_node.dt_s = cfg.dt_s();
  return SpikingBackend(eq_node, cfg.addition_node());
}

// ---------------------------------------------------------------------------

struct EncodeArgs {
  double mean = 0.0;
  double variance = 1.0;
  std::string out = "code.csv";
  std::string spikes_out;
  std::string scheme = "det";
  std::uint64_t seed = 0;
};

int cmd_encode(const CliConfig& cfg, const EncodeArgs& args) {
  const EncoderConfig enc = cfg.encoder(parse_scheme(args.scheme), args.seed);
  const RateCode code = encode({args.mean, args.variance}, enc);
  auto out = open_output(args.out);
  out << provenance_line(cfg.hash(), args.seed) << "\n";
  write_rate_code_csv(out, code);
  if (!args.spikes_out.empty()) {
    auto spikes_out = open_output(args.spikes_out);
    spikes_out << provenance_line(cfg.hash(), args.seed) << "\n";
    write_spike_train_csv(spikes_out, rates_to_spikes(code, enc));
  }
  return 0;
}

struct DecodeArgs {
  std::string in;
  bool correct_bias = false;
};

int cmd_decode(const CliConfig& cfg, const DecodeArgs& args) {
  std::ifstream in(args.in);
  if (!in) throw IoError("cannot open rate code CSV: " + args.in);
  const RateCode code = read_rate_code_csv(in, cfg.r_max_hz, cfg.t_s_s);
  const GaussianMessage decoded = decode(code, args.correct_bias);
  std::printf("mean=%.12g variance=%.12g\n", decoded.mean, decoded.variance);
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string out;
  std::string trajectory;
  std::uint64_t seed = 7;
  int samples = 500;
  double teacher_offset_ms = 1.0;
  std::string scheme = "det";
};

int cmd_train(const CliConfig& cfg, const TrainArgs& args) {
  TrainingConfig train_cfg;
  train_cfg.n_samples = args.samples;
  train_cfg.seed = args.seed;
  train_cfg.n_neurons = cfg.n_neurons;
  train_cfg.teacher_offset_s = args.teacher_offset_ms / 1000.0;
  if (args.samples == 0) {
    std::fprintf(stderr, "warning: --samples 0; weights stay at initialization\n");
  }
  EqualityNodeSetup setup = cfg.equality_setup();
  setup.encoder.scheme = parse_scheme(args.scheme);
  setup.encoder.seed = args.seed;

  TrainingTrace trace;
  const WeightStore store = train_equality(train_cfg, cfg.stdp(), setup, &trace);
  save_weights(store, args.out);

  const std::string trajectory_path =
      args.trajectory.empty() ? args.out + ".trajectory.csv" : args.trajectory;
  auto out = open_output(trajectory_path);
  out << provenance_line(cfg.hash(), args.seed) << "\n";
  std::vector<int> picks;
  for (int k = 0; k < 5; ++k) picks.push_back(k * (cfg.n_neurons - 1) / 4);
  out << "sample,mean_abs_dw";
  for (int idx : picks) out << ",wx_" << idx;
  for (int idx : picks) out << ",wy_" << idx;
  out << "\n";
  for (std::size_t s = 0; s < trace.mean_abs_dw.size(); ++s) {
    out << s << ',' << csv_number(trace.mean_abs_dw[s]);
    for (int idx : picks) out << ',' << csv_number(trace.w_x_history[s][idx]);
    for (int idx : picks) out << ',' << csv_number(trace.w_y_history[s][idx]);
    out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalCase {
  GaussianMessage first;
  GaussianMessage second;  // unused for mul
  double scale = 1.0;      // mul only
};

struct EvalArgs {
  std::string node;
  std::string direction = "fwd";
  int random_count = 0;
  std::uint64_t seed = 1;
  std::string cases_path;
  std::string weights_path;
  std::string out = "eval.csv";
  bool check = false;
};

std::vector<EvalCase> make_eval_cases(const EvalArgs& args) {
  std::vector<EvalCase> cases;
  if (!args.cases_path.empty()) {
    std::ifstream in(args.cases_path);
    if (!in) throw IoError("cannot open cases file: " + args.cases_path);
    std::string line;
    bool header_skipped = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!header_skipped) {
        header_skipped = true;
        continue;
      }
      std::istringstream row(line);
      std::vector<double> fields;
      std::string field;
      while (std::getline(row, field, ',')) fields.push_back(std::stod(field));
      EvalCase c;
      if (args.node == "mul") {
        if (fields.size() != 3) throw FileFormatError("mul cases need m,v,a rows");
        c.first = {fields[0], fields[1]};
        c.scale = fields[2];
      } else {
        if (fields.size() != 4) throw FileFormatError("cases need m1,v1,m2,v2 rows");
        c.first = {fields[0], fields[1]};
        c.second = {fields[2], fields[3]};
      }
      cases.push_back(c);
    }
    return cases;
  }
  if (args.random_count <= 0) {
    throw UsageError("eval needs --cases <file> or --random <k>");
  }
  Rng rng(args.seed);
  for (int i = 0; i < args.random_count; ++i) {
    EvalCase c;
    c.first = {rng.uniform(-5.0, 5.0), rng.uniform(0.3, 3.0)};
    if (args.node == "mul") {
      c.scale = rng.uniform(0.5, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    } else {
      // Independent draws from [0.3, 3] keep the sigma ratio below sqrt(10),
      // within the comparable-support regime of the addition node.
      c.second = {rng.uniform(-5.0, 5.0), rng.uniform(0.3, 3.0)};
    }
    cases.push_back(c);
  }
  return cases;
}

int cmd_eval(const CliConfig& cfg, const EvalArgs& args) {
  if (args.node != "equality" && args.node != "add" && args.node != "mul") {
    throw UsageError("unknown node '" + args.node + "' (equality|add|mul)");
  }
  if (args.direction != "fwd" && args.direction != "bwd") {
    throw UsageError("unknown direction '" + args.direction + "' (fwd|bwd)");
  }
  const bool backward = args.direction == "bwd";
  const std::vector<EvalCase> cases = make_eval_cases(args);

  std::optional<EqualityNodeSnn> eq_node;
  if (args.node == "equality") {
    eq_node.emplace();
    eq_node->weights = load_weight_artifact(args.weights_path, cfg);
    eq_node->encoder = cfg.encoder();
    eq_node->lif = cfg.lif();
    eq_node->dt_s = cfg.dt_s();
  }
  const AdditionNodeSnn add_node = cfg.addition_node();
  const EncoderConfig enc = cfg.encoder();
  const double c_n = truncation_bias(cfg.n_neurons);

  auto out = open_output(args.out);
  out << provenance_line(cfg.hash(), args.seed) << "\n";
  out << "case_id,direction,m_true,v_true,m_snn,v_snn,abs_err_m,rel_err_v\n";

  double max_abs_m = 0.0, max_rel_v = 0.0;
  int passed = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const EvalCase& c = cases[i];
    GaussianMessage truth, result;
    bool case_ok = true;
    if (args.node == "equality") {
      truth = gaussian_product(c.first, c.second);
      result = equality_apply(*eq_node, c.first, c.second);
      const double tol_m = 0.1 * std::sqrt(truth.variance) + 0.05;
      case_ok = std::abs(result.mean - truth.mean) <= tol_m &&
                std::abs(result.variance - truth.variance) / truth.variance <= 0.25;
    } else if (args.node == "add") {
      truth = backward ? addition_backward(c.first, c.second)
                       : addition_forward(c.first, c.second);
      result = addition_apply(add_node, c.first, c.second,
                              backward ? AdditionDirection::backward_y
                                       : AdditionDirection::forward);
      const double tol_m =
          0.15 * (std::sqrt(c.first.variance) + std::sqrt(c.second.variance));
      case_ok = std::abs(result.mean - truth.mean) <= tol_m &&
                std::abs(result.variance - truth.variance) / truth.variance <= 0.30;
    } else {
      truth = backward ? scaling_backward(c.first, c.scale)
                       : scaling_forward(c.first, c.scale);
      result = scaling_apply(c.first, c.scale,
                             backward ? ScalingDirection::backward
                                      : ScalingDirection::forward,
                             enc);
      case_ok = std::abs(result.mean - truth.mean) <=
                    1e-9 * std::max(1.0, std::abs(truth.mean)) &&
                std::abs(result.variance / truth.variance - c_n) <= 1e-6;
    }
    const double abs_err_m = std::abs(result.mean - truth.mean);
    const double rel_err_v = std::abs(result.variance - truth.variance) / truth.variance;
    max_abs_m = std::max(max_abs_m, abs_err_m);
    max_rel_v = std::max(max_rel_v, rel_err_v);
    if (case_ok) ++passed;
    out << i << ',' << args.direction << ',' << csv_number(truth.mean) << ','
        << csv_number(truth.variance) << ',' << csv_number(result.mean) << ','
        << csv_number(result.variance) << ',' << csv_number(abs_err_m) << ','
        << csv_number(rel_err_v) << "\n";
  }

  const double pass_rate =
      cases.empty() ? 1.0 : static_cast<double>(passed) / static_cast<double>(cases.size());
  std::printf("eval %s %s: cases=%zu max|dm|=%.6g max_rel_dv=%.6g pass_rate=%.0f%%\n",
              args.node.c_str(), args.direction.c_str(), cases.size(), max_abs_m,
              max_rel_v, 100.0 * pass_rate);
  if (args.check) {
    const bool ok = args.node == "mul" ? passed == static_cast<int>(cases.size())
                                       : pass_rate >= 0.90;
    if (!ok) throw ToleranceFailure("eval tolerance check failed");
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct KalmanArgs {
  int steps = 10;
  std::uint64_t seed = 1;
  std::string backend = "analytic";
  std::string out = "kalman.csv";
  std::string plot;
  std::string weights_path;
  KalmanConfig cfg;
};

int cmd_kalman(const CliConfig& cfg, const KalmanArgs& args) {
  if (args.backend != "analytic" && args.backend != "snn" && args.backend != "both") {
    throw UsageError("unknown backend '" + args.backend + "' (analytic|snn|both)");
  }
  const bool want_analytic = args.backend != "snn";
  const bool want_snn = args.backend != "analytic";
  const std::vector<double> observations =
      generate_kalman_observations(args.cfg, args.steps, args.seed);

  std::vector<KalmanStepRecord> analytic_records, snn_records;
  if (want_analytic) {
    AnalyticBackend backend;
    analytic_records = run_kalman(args.cfg, observations, backend);
  }
  if (want_snn) {
    SpikingBackend backend =
        make_spiking_backend(cfg, load_weight_artifact(args.weights_path, cfg));
    snn_records = run_kalman(args.cfg, observations, backend);
  }

  auto out = open_output(args.out);
  out << provenance_line(cfg.hash(), args.seed) << "\n";
  out << "step,gain,m_analytic,v_analytic,m_snn,v_snn\n";
  for (int t = 0; t < args.steps; ++t) {
    out << (t + 1) << ',';
    out << (want_analytic ? csv_number(analytic_records[t].gain) : "") << ',';
    out << (want_analytic ? csv_number(analytic_records[t].posterior.mean) : "") << ',';
    out << (want_analytic ? csv_number(analytic_records[t].posterior.variance) : "") << ',';
    out << (want_snn ? csv_number(snn_records[t].posterior.mean) : "") << ',';
    out << (want_snn ? csv_number(snn_records[t].posterior.variance) : "") << "\n";
  }

  if (!args.plot.empty()) {
    std::vector<PlotSeries> series;
    std::vector<double> steps_axis;
    for (int t = 1; t <= args.steps; ++t) steps_axis.push_back(t);
    PlotSeries obs_series{"observations", steps_axis, observations, {}, "#888888", true};
    series.push_back(obs_series);
    auto to_series = [&](const std::vector<KalmanStepRecord>& records,
                         const std::string& label, const std::string& color) {
      PlotSeries s{label, steps_axis, {}, {}, color, false};
      for (const auto& r : records) {
        s.y.push_back(r.posterior.mean);
        s.band_half_width.push_back(std::sqrt(r.posterior.variance));
      }
      series.push_back(s);
    };
    if (want_analytic) to_series(analytic_records, "analytic MP", "#1f6fb2");
    if (want_snn) to_series(snn_records, "SNN MP", "#c44f2e");
    auto plot = open_output(args.plot);
    write_svg_plot(plot, "Kalman filtering posterior", "step", "position", series);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct BlrArgs {
  int n_points = 10;
  std::uint64_t seed = 5;
  std::string backend = "analytic";
  int sweeps = 1;
  std::string out = "blr.csv";
  std::string plot;
  std::string weights_path;
};

int cmd_blr(const CliConfig& cfg, const BlrArgs& args) {
  if (args.backend != "analytic" && args.backend != "snn" && args.backend != "both") {
    throw UsageError("unknown backend '" + args.backend + "' (analytic|snn|both)");
  }
  const bool want_analytic = args.backend != "snn";
  const bool want_snn = args.backend != "analytic";

  BlrConfig blr_cfg;
  blr_cfg.prior_mean = {0.0, 0.0};
  blr_cfg.prior_precision = {1.0, 3.0};
  blr_cfg.noise_precision = 2.0;  // sigma^2 = 0.5
  const BlrDataset data = make_blr_dataset(args.n_points, 1.0, 1.0, 0.5, -3.0, 3.0,
                                           args.seed);

  // Classic conjugate posterior, mean-field diagonalized for reporting.
  std::vector<std::vector<double>> design;
  for (double x : data.inputs) design.push_back({1.0, x});
  const BlrPosterior classic = blr_posterior(design, data.targets, blr_cfg);
  const std::vector<GaussianMessage> classic_marginals =
      mean_field_diag(classic.mean, classic.covariance);

  std::optional<BlrResult> analytic_result, snn_result;
  if (want_analytic) {
    AnalyticBackend backend;
    analytic_result = run_blr(data, blr_cfg, backend, args.sweeps);
  }
  if (want_snn) {
    SpikingBackend backend =
        make_spiking_backend(cfg, load_weight_artifact(args.weights_path, cfg));
    snn_result = run_blr(data, blr_cfg, backend, args.sweeps);
  }

  auto out = open_output(args.out);
  out << provenance_line(cfg.hash(), args.seed) << "\n";
  out << "weight,method,post_mean,post_var\n";
  for (int j = 0; j < 2; ++j) {
    out << 'w' << j << ",classic," << csv_number(classic_marginals[j].mean) << ','
        << csv_number(classic_marginals[j].variance) << "\n";
  }
  if (analytic_result) {
    for (int j = 0; j < 2; ++j) {
      out << 'w' << j << ",mp," << csv_number(analytic_result->posterior[j].mean) << ','
          << csv_number(analytic_result->posterior[j].variance) << "\n";
    }
  }
  if (snn_result) {
    for (int j = 0; j < 2; ++j) {
      out << 'w' << j << ",snn," << csv_number(snn_result->posterior[j].mean) << ','
          << csv_number(snn_result->posterior[j].variance) << "\n";
    }
  }

  const std::string plot_path =
      args.plot.empty() ? fs::path(args.out).replace_extension(".svg").string() : args.plot;
  std::vector<PlotSeries> series;
  PlotSeries points{"data", data.inputs, data.targets, {}, "#555555", true};
  series.push_back(points);
  const double noise_variance = 1.0 / blr_cfg.noise_precision;
  auto band_series = [&](const std::vector<GaussianMessage>& w, const std::string& label,
                         const std::string& color) {
    PlotSeries s{label, {}, {}, {}, color, false};
    for (double x = -3.0; x <= 3.0001; x += 0.25) {
      s.x.push_back(x);
      s.y.push_back(w[0].mean + w[1].mean * x);
      s.band_half_width.push_back(
          std::sqrt(w[0].variance + x * x * w[1].variance + noise_variance));
    }
    series.push_back(s);
  };
  band_series(classic_marginals, "classic BLR", "#2c8a4b");
  if (analytic_result) band_series(analytic_result->posterior, "analytic MP", "#1f6fb2");
  if (snn_result) band_series(snn_result->posterior, "SNN MP", "#c44f2e");
  auto plot = open_output(plot_path);
  write_svg_plot(plot, "Bayesian linear regression", "x", "y", series);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian belief propagation on factor graphs, analytic and spike-based"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key=value parameter file")
      ->envname("SNNGBP_CONFIG");
  app.add_option("--set", overrides, "override one config key, e.g. --set r_max_hz=200");

  EncodeArgs encode_args;
  CLI::App* encode_cmd = app.add_subcommand("encode", "rate-encode a Gaussian message");
  encode_cmd->add_option("--mean", encode_args.mean)->required();
  encode_cmd->add_option("--var", encode_args.variance)->required();
  encode_cmd->add_option("--out", encode_args.out, "rate code CSV path");
  encode_cmd->add_option("--spikes", encode_args.spikes_out, "also write a spike CSV");
  encode_cmd->add_option("--scheme", encode_args.scheme, "det|poisson");
  encode_cmd->add_option("--seed", encode_args.seed);

  DecodeArgs decode_args;
  CLI::App* decode_cmd = app.add_subcommand("decode", "decode a rate code CSV");
  decode_cmd->add_option("--in", decode_args.in)->required();
  decode_cmd->add_flag("--correct-bias", decode_args.correct_bias,
                       "divide the variance by the truncation constant c_N");

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "train the equality node with STDP");
  train_cmd->add_option("--out", train_args.out, "weight file path")->required();
  train_cmd->add_option("--trajectory", train_args.trajectory, "trajectory CSV path");
  train_cmd->add_option("--seed", train_args.seed);
  train_cmd->add_option("--samples", train_args.samples);
  train_cmd->add_option("--teacher-offset-ms", train_args.teacher_offset_ms,
                        "teacher delay/advance, independent of dt_ms");
  train_cmd->add_option("--scheme", train_args.scheme, "det|poisson");

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "compare a node against the oracle");
  eval_cmd->add_option("node", eval_args.node, "equality|add|mul")->required();
  eval_cmd->add_option("--direction", eval_args.direction, "fwd|bwd");
  eval_cmd->add_option("--random", eval_args.random_count, "generate k random cases");
  eval_cmd->add_option("--seed", eval_args.seed);
  eval_cmd->add_option("--cases", eval_args.cases_path, "case CSV path");
  eval_cmd->add_option("--weights", eval_args.weights_path, "trained weights (equality)");
  eval_cmd->add_option("--out", eval_args.out, "evaluation report CSV");
  eval_cmd->add_flag("--check", eval_args.check, "exit 5 when tolerances are exceeded");

  KalmanArgs kalman_args;
  CLI::App* kalman_cmd = app.add_subcommand("kalman", "run the tracking experiment");
  kalman_cmd->add_option("--steps", kalman_args.steps);
  kalman_cmd->add_option("--seed", kalman_args.seed);
  kalman_cmd->add_option("--backend", kalman_args.backend, "analytic|snn|both");
  kalman_cmd->add_option("--out", kalman_args.out);
  kalman_cmd->add_option("--plot", kalman_args.plot, "also write an SVG plot");
  kalman_cmd->add_option("--weights", kalman_args.weights_path);
  kalman_cmd->add_option("--prior-mean", kalman_args.cfg.prior_mean);
  kalman_cmd->add_option("--prior-var", kalman_args.cfg.prior_variance);
  kalman_cmd->add_option("--input-mean", kalman_args.cfg.input_mean);
  kalman_cmd->add_option("--input-var", kalman_args.cfg.input_variance);
  kalman_cmd->add_option("--process-var", kalman_args.cfg.process_variance);
  kalman_cmd->add_option("--obs-var", kalman_args.cfg.observation_variance);

  BlrArgs blr_args;
  CLI::App* blr_cmd = app.add_subcommand("blr", "run the linear-regression experiment");
  blr_cmd->add_option("--n-points", blr_args.n_points);
  blr_cmd->add_option("--seed", blr_args.seed);
  blr_cmd->add_option("--backend", blr_args.backend, "analytic|snn|both");
  blr_cmd->add_option("--sweeps", blr_args.sweeps);
  blr_cmd->add_option("--out", blr_args.out);
  blr_cmd->add_option("--plot", blr_args.plot);
  blr_cmd->add_option("--weights", blr_args.weights_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const CliConfig cfg = load_config(config_path, overrides);
    if (encode_cmd->parsed()) return cmd_encode(cfg, encode_args);
    if (decode_cmd->parsed()) return cmd_decode(cfg, decode_args);
    if (train_cmd->parsed()) return cmd_train(cfg, train_args);
    if (eval_cmd->parsed()) return cmd_eval(cfg, eval_args);
    if (kalman_cmd->parsed()) return cmd_kalman(cfg, kalman_args);
    if (blr_cmd->parsed()) return cmd_blr(cfg, blr_args);
    return kExitUsage;
  } catch (const ToleranceFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitToleranceFailure;
  } catch (const NotTrainedError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMissingArtifact;
  } catch (const FileFormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMissingArtifact;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
