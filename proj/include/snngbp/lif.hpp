// Clock-driven leaky integrate-and-fire simulation.
//
// Neurons follow the forward-Euler update of
//   tau_m dV/dt = -(V - V_rest) + R_m I(t)
// and fire/reset on reaching threshold. Synaptic arrivals are delta pulses:
// a presynaptic spike makes the postsynaptic membrane jump by the synapse
// weight (in mV) within one step. A network's first n_inputs neurons are
// replay sources whose spikes are injected from outside; the remainder are
// simulated LIF neurons.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "snngbp/population.hpp"

namespace snngbp {

struct LifParams {
  double tau_m_s = 0.010;
  double v_rest_mV = -80.0;
  double r_m = 1.0;  // membrane resistance scale; unit by default
  double threshold_mV = -50.0;
  double refractory_s = 0.0;
};

void require_valid(const LifParams& p);

struct Synapse {
  std::size_t pre = 0;
  std::size_t post = 0;
  double weight_mV = 0.0;  // membrane jump per presynaptic spike
  double delay_s = 0.0;
};

enum class RecordMode { spikes, spikes_and_voltages };

struct SimConfig {
  double dt_s = 0.001;
  double duration_s = 1.0;
  RecordMode record = RecordMode::spikes;
};

void require_valid(const SimConfig& cfg);

/// Neurons 0..n_inputs-1 replay externally supplied spike trains; neurons
/// n_inputs.. follow params[i - n_inputs]. Synapses may run from any neuron
/// to any LIF neuron.
struct LifNetwork {
  std::size_t n_inputs = 0;
  std::vector<LifParams> params;
  std::vector<Synapse> synapses;

  std::size_t size() const { return n_inputs + params.size(); }
};

struct NeuronStep {
  double v_mV = 0.0;
  bool fired = false;
};

/// One forward-Euler membrane update; fires and resets when the updated
/// potential reaches threshold.
NeuronStep step_neuron(double v_mV, double input_drive, const LifParams& p, double dt_s);

struct VoltageTrace {
  std::size_t neuron = 0;  // index within the full network
  std::vector<double> v_mV;  // one sample per step, post-update
};

struct SimResult {
  SpikeTrain raster;  // all neurons, inputs included
  std::vector<VoltageTrace> voltages;  // populated for spikes_and_voltages
};

/// Run the network for cfg.duration_s. `external` supplies one train per
/// input neuron. Spikes arriving during step k drive the update of that
/// step; a LIF neuron crossing threshold emits its spike at the next tick.
/// Arrivals within a step are applied in ascending synapse id.
SimResult simulate(const LifNetwork& net, const SpikeTrain& external, const SimConfig& cfg);

/// CSV: header "neuron,t_s,V_mV", one row per recorded sample.
void write_voltage_csv(std::ostream& out, const std::vector<VoltageTrace>& traces,
                       double dt_s);

}  // namespace snngbp
