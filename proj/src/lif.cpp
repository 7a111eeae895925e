#include "snngbp/lif.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace snngbp {

void require_valid(const LifParams& p) {
  if (!(p.tau_m_s > 0.0)) throw ConfigError("LIF tau_m must be > 0");
  if (!(p.threshold_mV > p.v_rest_mV)) {
    throw ConfigError("LIF threshold must lie above the resting potential");
  }
  if (p.refractory_s < 0.0) throw ConfigError("LIF refractory period must be >= 0");
  if (!(p.r_m > 0.0)) throw ConfigError("LIF membrane resistance must be > 0");
}

void require_valid(const SimConfig& cfg) {
  if (!(cfg.dt_s > 0.0) || cfg.dt_s > cfg.duration_s) {
    throw ConfigError("simulation requires 0 < dt <= duration");
  }
}

NeuronStep step_neuron(double v_mV, double input_drive, const LifParams& p, double dt_s) {
  double v = v_mV + (dt_s / p.tau_m_s) * (-(v_mV - p.v_rest_mV) + p.r_m * input_drive);
  if (v >= p.threshold_mV) {
    return {p.v_rest_mV, true};
  }
  return {v, false};
}

namespace {

struct Arrival {
  std::size_t synapse_id;
  std::size_t post;
  double weight_mV;
};

std::size_t quantize_step(double t_s, double dt_s) {
  // Nudge against representation error so times sitting on a tick boundary
  // land in the step they start.
  return static_cast<std::size_t>(std::floor(t_s / dt_s + 1e-9));
}

}  // namespace

SimResult simulate(const LifNetwork& net, const SpikeTrain& external, const SimConfig& cfg) {
  require_valid(cfg);
  const std::size_t total = net.size();
  const std::size_t n_lif = net.params.size();
  for (const LifParams& p : net.params) require_valid(p);
  if (external.spikes.size() != net.n_inputs) {
    throw GraphError("expected one external train per input neuron (" +
                     std::to_string(net.n_inputs) + "), got " +
                     std::to_string(external.spikes.size()));
  }
  for (const Synapse& s : net.synapses) {
    if (s.pre >= total || s.post >= total) {
      throw GraphError("synapse references a neuron id outside the network");
    }
    if (s.post < net.n_inputs) {
      throw GraphError("synapse targets a replay input neuron");
    }
    if (s.delay_s < 0.0) throw GraphError("synapse delay must be >= 0");
  }

  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(cfg.duration_s / cfg.dt_s));

  // Outgoing synapses per presynaptic neuron, in ascending synapse id.
  std::vector<std::vector<std::size_t>> outgoing(total);
  for (std::size_t s = 0; s < net.synapses.size(); ++s) {
    outgoing[net.synapses[s].pre].push_back(s);
  }

  // Deliveries scheduled per step.
  std::vector<std::vector<Arrival>> pending(n_steps);
  auto deliver_from = [&](std::size_t neuron, std::size_t step) {
    for (std::size_t sid : outgoing[neuron]) {
      const Synapse& syn = net.synapses[sid];
      const std::size_t target_step =
          step + static_cast<std::size_t>(std::llround(syn.delay_s / cfg.dt_s));
      if (target_step < n_steps) {
        pending[target_step].push_back({sid, syn.post, syn.weight_mV});
      }
    }
  };

  SimResult result;
  result.raster.window_s = cfg.duration_s;
  result.raster.spikes.resize(total);

  // Replay inputs: record at their given times, schedule deliveries at the
  // step each spike falls into.
  for (std::size_t i = 0; i < net.n_inputs; ++i) {
    double previous = -1.0;
    for (double t : external.spikes[i]) {
      if (t < 0.0 || t >= cfg.duration_s) {
        throw ConfigError("external spike time outside the simulation window");
      }
      if (t <= previous) throw ConfigError("external spike times must strictly increase");
      previous = t;
      result.raster.spikes[i].push_back(t);
      deliver_from(i, quantize_step(t, cfg.dt_s));
    }
  }

  std::vector<double> v(n_lif);
  std::vector<std::size_t> refractory_left(n_lif, 0);
  for (std::size_t j = 0; j < n_lif; ++j) v[j] = net.params[j].v_rest_mV;

  if (cfg.record == RecordMode::spikes_and_voltages) {
    result.voltages.resize(n_lif);
    for (std::size_t j = 0; j < n_lif; ++j) {
      result.voltages[j].neuron = net.n_inputs + j;
      result.voltages[j].v_mV.reserve(n_steps);
    }
  }

  std::vector<double> drive_mV(n_lif);
  for (std::size_t k = 0; k < n_steps; ++k) {
    std::fill(drive_mV.begin(), drive_mV.end(), 0.0);
    auto& arrivals = pending[k];
    std::stable_sort(arrivals.begin(), arrivals.end(),
                     [](const Arrival& a, const Arrival& b) {
                       return a.synapse_id < b.synapse_id;
                     });
    for (const Arrival& a : arrivals) {
      drive_mV[a.post - net.n_inputs] += a.weight_mV;
    }

    const double spike_time = cfg.dt_s * static_cast<double>(k + 1);
    for (std::size_t j = 0; j < n_lif; ++j) {
      const LifParams& p = net.params[j];
      if (refractory_left[j] > 0) {
        --refractory_left[j];
        v[j] = p.v_rest_mV;
      } else {
        // A delta-pulse arrival of w mV corresponds to the drive that makes
        // the Euler step jump the membrane by exactly w.
        const double drive = drive_mV[j] * p.tau_m_s / (cfg.dt_s * p.r_m);
        const NeuronStep step = step_neuron(v[j], drive, p, cfg.dt_s);
        v[j] = step.v_mV;
        if (step.fired) {
          if (spike_time < cfg.duration_s) {
            result.raster.spikes[net.n_inputs + j].push_back(spike_time);
            deliver_from(net.n_inputs + j, k + 1);
          }
          refractory_left[j] =
              static_cast<std::size_t>(std::llround(p.refractory_s / cfg.dt_s));
        }
      }
      if (cfg.record == RecordMode::spikes_and_voltages) {
        result.voltages[j].v_mV.push_back(v[j]);
      }
    }
  }
  return result;
}

void write_voltage_csv(std::ostream& out, const std::vector<VoltageTrace>& traces,
                       double dt_s) {
  out << "neuron,t_s,V_mV\n";
  char buf[80];
  for (const VoltageTrace& trace : traces) {
    for (std::size_t k = 0; k < trace.v_mV.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.9g\n", trace.neuron,
                    dt_s * static_cast<double>(k + 1), trace.v_mV[k]);
      out << buf;
    }
  }
}

}  // namespace snngbp
