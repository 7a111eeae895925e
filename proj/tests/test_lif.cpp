#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "snngbp/lif.hpp"

using namespace snngbp;
using doctest::Approx;

namespace {

LifParams default_params() {
  LifParams p;
  return p;
}

}  // namespace

TEST_CASE("step_neuron follows the Euler leak") {
  const NeuronStep step = step_neuron(-70.0, 0.0, default_params(), 0.001);
  CHECK(step.v_mV == Approx(-71.0));
  CHECK_FALSE(step.fired);

  const NeuronStep rest = step_neuron(-80.0, 0.0, default_params(), 0.001);
  CHECK(rest.v_mV == Approx(-80.0));
  CHECK_FALSE(rest.fired);
}

TEST_CASE("step_neuron fires and resets at threshold") {
  // A 31 mV delta-pulse drive from rest crosses theta = -50 and resets to -80.
  const LifParams p = default_params();
  const double drive = 31.0 * p.tau_m_s / 0.001;
  const NeuronStep step = step_neuron(p.v_rest_mV, drive, p, 0.001);
  CHECK(step.fired);
  CHECK(step.v_mV == Approx(-80.0));
}

TEST_CASE("membrane decays monotonically toward rest without input") {
  const LifParams p = default_params();
  double v = -55.0;
  for (int k = 0; k < 200; ++k) {
    const NeuronStep step = step_neuron(v, 0.0, p, 0.001);
    CHECK_FALSE(step.fired);
    CHECK(step.v_mV < v);
    CHECK(step.v_mV >= p.v_rest_mV);
    v = step.v_mV;
  }
  CHECK(v == Approx(p.v_rest_mV).epsilon(1e-6));
}

TEST_CASE("empty network produces an empty raster") {
  LifNetwork net;
  SpikeTrain none;
  none.window_s = 0.1;
  SimConfig cfg;
  cfg.duration_s = 0.1;
  const SimResult result = simulate(net, none, cfg);
  CHECK(result.raster.spikes.empty());
}

TEST_CASE("one supra-threshold input spike fires the neuron at the next step") {
  LifNetwork net;
  net.n_inputs = 1;
  net.params = {default_params()};
  net.synapses = {{0, 1, 31.0}};  // theta - V_rest + 1
  SpikeTrain external;
  external.window_s = 0.1;
  external.spikes = {{0.010}};
  SimConfig cfg;
  cfg.duration_s = 0.1;
  const SimResult result = simulate(net, external, cfg);
  REQUIRE(result.raster.spikes[1].size() == 1);
  CHECK(result.raster.spikes[1][0] == Approx(0.011));
}

TEST_CASE("a sub-threshold spike plus leak never fires") {
  LifNetwork net;
  net.n_inputs = 1;
  net.params = {default_params()};
  net.synapses = {{0, 1, 29.0}};  // below theta - V_rest = 30
  SpikeTrain external;
  external.window_s = 0.2;
  external.spikes = {{0.010}};
  SimConfig cfg;
  cfg.duration_s = 0.2;
  const SimResult result = simulate(net, external, cfg);
  CHECK(result.raster.spikes[1].empty());
}

TEST_CASE("pass-through neuron relays every input spike") {
  LifNetwork net;
  net.n_inputs = 1;
  net.params = {default_params()};
  net.synapses = {{0, 1, 31.0}};
  SpikeTrain external;
  external.window_s = 1.0;
  external.spikes.resize(1);
  for (int k = 0; k < 80; ++k) {
    external.spikes[0].push_back(0.002 + k * 0.012);  // ISI of 12 ms >= 2 dt
  }
  SimConfig cfg;
  cfg.duration_s = 1.0;
  const SimResult result = simulate(net, external, cfg);
  CHECK(result.raster.spikes[1].size() == external.spikes[0].size());
}

TEST_CASE("raster is bit-identical across runs") {
  LifNetwork net;
  net.n_inputs = 2;
  net.params = {default_params(), default_params()};
  net.synapses = {{0, 2, 18.0}, {1, 2, 18.0}, {0, 3, 31.0}, {2, 3, -10.0, 0.002}};
  SpikeTrain external;
  external.window_s = 0.5;
  external.spikes = {{0.01, 0.02, 0.021, 0.2}, {0.019, 0.22, 0.3}};
  SimConfig cfg;
  cfg.duration_s = 0.5;
  const SimResult a = simulate(net, external, cfg);
  const SimResult b = simulate(net, external, cfg);
  REQUIRE(a.raster.spikes.size() == b.raster.spikes.size());
  for (std::size_t i = 0; i < a.raster.spikes.size(); ++i) {
    CHECK(a.raster.spikes[i] == b.raster.spikes[i]);
  }
}

TEST_CASE("coincident sub-threshold spikes sum within a step") {
  LifNetwork net;
  net.n_inputs = 2;
  net.params = {default_params()};
  net.synapses = {{0, 2, 16.0}, {1, 2, 16.0}};
  SpikeTrain external;
  external.window_s = 0.1;
  external.spikes = {{0.010}, {0.010}};
  SimConfig cfg;
  cfg.duration_s = 0.1;
  const SimResult result = simulate(net, external, cfg);
  CHECK(result.raster.spikes[2].size() == 1);  // 32 mV joint jump crosses theta
}

TEST_CASE("synaptic delay postpones the arrival") {
  LifNetwork net;
  net.n_inputs = 1;
  net.params = {default_params()};
  net.synapses = {{0, 1, 31.0, 0.005}};
  SpikeTrain external;
  external.window_s = 0.1;
  external.spikes = {{0.010}};
  SimConfig cfg;
  cfg.duration_s = 0.1;
  const SimResult result = simulate(net, external, cfg);
  REQUIRE(result.raster.spikes[1].size() == 1);
  CHECK(result.raster.spikes[1][0] == Approx(0.016));
}

TEST_CASE("refractory period suppresses immediate re-firing") {
  LifParams p = default_params();
  p.refractory_s = 0.010;
  LifNetwork net;
  net.n_inputs = 1;
  net.params = {p};
  net.synapses = {{0, 1, 31.0}};
  SpikeTrain external;
  external.window_s = 0.1;
  external.spikes = {{0.010, 0.012, 0.014, 0.050}};
  SimConfig cfg;
  cfg.duration_s = 0.1;
  const SimResult result = simulate(net, external, cfg);
  CHECK(result.raster.spikes[1].size() == 2);
}

TEST_CASE("voltage recording samples each step") {
  LifNetwork net;
  net.n_inputs = 0;
  net.params = {default_params()};
  SpikeTrain none;
  SimConfig cfg;
  cfg.duration_s = 0.05;
  cfg.record = RecordMode::spikes_and_voltages;
  const SimResult result = simulate(net, none, cfg);
  REQUIRE(result.voltages.size() == 1);
  CHECK(result.voltages[0].v_mV.size() == 50);
}

TEST_CASE("voltage trace CSV carries one sample per step") {
  LifNetwork net;
  net.n_inputs = 0;
  net.params = {default_params()};
  SpikeTrain none;
  SimConfig cfg;
  cfg.duration_s = 0.003;
  cfg.record = RecordMode::spikes_and_voltages;
  const SimResult result = simulate(net, none, cfg);
  std::ostringstream out;
  write_voltage_csv(out, result.voltages, cfg.dt_s);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "neuron,t_s,V_mV");
  std::getline(lines, line);
  CHECK(line == "0,0.001000,-80");
  int rows = 1;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("dangling synapse ids are rejected") {
  LifNetwork net;
  net.n_inputs = 1;
  net.params = {default_params()};
  net.synapses = {{0, 5, 10.0}};
  SpikeTrain external;
  external.spikes = {{}};
  SimConfig cfg;
  cfg.duration_s = 0.1;
  CHECK_THROWS_AS(simulate(net, external, cfg), GraphError);
  net.synapses = {{7, 1, 10.0}};
  CHECK_THROWS_AS(simulate(net, external, cfg), GraphError);
  net.synapses = {{1, 0, 10.0}};  // targets a replay input
  CHECK_THROWS_AS(simulate(net, external, cfg), GraphError);
}

TEST_CASE("external trains must fit the window and be ordered") {
  LifNetwork net;
  net.n_inputs = 1;
  net.params = {default_params()};
  SpikeTrain external;
  external.spikes = {{0.2}};
  SimConfig cfg;
  cfg.duration_s = 0.1;
  CHECK_THROWS_AS(simulate(net, external, cfg), ConfigError);
  external.spikes = {{0.05, 0.04}};
  CHECK_THROWS_AS(simulate(net, external, cfg), ConfigError);
  SpikeTrain wrong_count;
  wrong_count.spikes = {};
  CHECK_THROWS_AS(simulate(net, wrong_count, cfg), GraphError);
}

TEST_CASE("invalid parameters are rejected") {
  LifParams p = default_params();
  p.tau_m_s = 0.0;
  CHECK_THROWS_AS(require_valid(p), ConfigError);
  p = default_params();
  p.threshold_mV = -90.0;
  CHECK_THROWS_AS(require_valid(p), ConfigError);
  SimConfig cfg;
  cfg.dt_s = 0.2;
  cfg.duration_s = 0.1;
  CHECK_THROWS_AS(require_valid(cfg), ConfigError);
}
