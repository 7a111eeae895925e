// Independent brute-force oracles used by the tests. These deliberately
// avoid the library's closed-form code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "snngbp/gaussian.hpp"
#include "snngbp/plasticity.hpp"

namespace snngbp::testing {

struct GridPosterior {
  std::vector<double> mean;
  std::vector<double> variance;
};

/// 2-D Bayesian linear-regression posterior by direct grid integration of
/// prior x likelihood over [lo, hi]^2.
inline GridPosterior blr_grid_oracle(const std::vector<std::vector<double>>& design,
                                     const std::vector<double>& targets,
                                     const BlrConfig& cfg, int grid_n, double lo,
                                     double hi) {
  std::vector<double> w_axis(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    w_axis[i] = lo + (hi - lo) * i / (grid_n - 1);
  }
  std::vector<std::vector<double>> log_post(grid_n, std::vector<double>(grid_n));
  double log_max = -1e300;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double w0 = w_axis[i];
      const double w1 = w_axis[j];
      double lp = -0.5 * cfg.prior_precision[0] * (w0 - cfg.prior_mean[0]) *
                      (w0 - cfg.prior_mean[0]) -
                  0.5 * cfg.prior_precision[1] * (w1 - cfg.prior_mean[1]) *
                      (w1 - cfg.prior_mean[1]);
      for (std::size_t k = 0; k < design.size(); ++k) {
        const double residual = targets[k] - w0 * design[k][0] - w1 * design[k][1];
        lp -= 0.5 * cfg.noise_precision * residual * residual;
      }
      log_post[i][j] = lp;
      log_max = std::max(log_max, lp);
    }
  }
  double total = 0.0, m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double p = std::exp(log_post[i][j] - log_max);
      total += p;
      m0 += p * w_axis[i];
      m1 += p * w_axis[j];
    }
  }
  m0 /= total;
  m1 /= total;
  double v0 = 0.0, v1 = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double p = std::exp(log_post[i][j] - log_max);
      v0 += p * (w_axis[i] - m0) * (w_axis[i] - m0);
      v1 += p * (w_axis[j] - m1) * (w_axis[j] - m1);
    }
  }
  return {{m0, m1}, {v0 / total, v1 / total}};
}

/// All-pairs STDP by the explicit double sum (quadratic, reference only).
inline double stdp_all_pairs_brute(const std::vector<double>& pre,
                                   const std::vector<double>& post,
                                   const StdpParams& p) {
  double dw = 0.0;
  for (double tq : pre) {
    for (double tp : post) {
      dw += stdp_delta(tp - tq, p);
    }
  }
  return dw;
}

}  // namespace snngbp::testing
