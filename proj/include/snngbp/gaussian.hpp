// Analytic Gaussian message arithmetic: the sum-product update rules for
// equality, addition and scaling nodes, the closed-form Kalman recursion,
// and the conjugate Bayesian linear-regression posterior. This module is
// the exact oracle the spike-based backend is validated against.
#pragma once

#include <array>
#include <vector>

#include "snngbp/errors.hpp"

namespace snngbp {

/// A 1-D Gaussian message in moment parameterization.
struct GaussianMessage {
  double mean = 0.0;
  double variance = 1.0;
};

/// Throws InvalidMessageError unless mean is finite and variance is finite and > 0.
void require_valid(const GaussianMessage& msg);

/// Product of two Gaussian messages: precisions and precision-weighted means add.
/// This is both the forward and the backward rule of the equality node.
GaussianMessage gaussian_product(const GaussianMessage& a, const GaussianMessage& b);

/// Addition node, forward: z = x + y. Means and variances add.
GaussianMessage addition_forward(const GaussianMessage& x, const GaussianMessage& y);

/// Addition node, backward message toward a summand: mean = m_z - m_x,
/// variance = v_x + v_z.
GaussianMessage addition_backward(const GaussianMessage& x, const GaussianMessage& z);

/// Scaling node z = a*y, forward: mean a*m, variance a^2*v.
GaussianMessage scaling_forward(const GaussianMessage& y, double a);

/// Scaling node, backward message toward y: mean m_z/a, variance v_z/a^2.
GaussianMessage scaling_backward(const GaussianMessage& z, double a);

/// Model parameters of the scalar random-walk tracking problem:
///   x_t = x_{t-1} + u_t + process noise,  u_t ~ N(m_u, var_u),
///   y_t = x_t + observation noise.
struct KalmanConfig {
  double prior_mean = 1.0;
  double prior_variance = 1.0;
  double input_mean = 4.0;         // m_u
  double input_variance = 0.01;    // var of the driving force u_t
  double process_variance = 0.0;   // extra state-transition noise
  double observation_variance = 2.0;
};

/// Throws ConfigError on invariant violations (variances >= 0, obs variance > 0).
void require_valid(const KalmanConfig& cfg);

struct KalmanStepResult {
  double gain = 0.0;
  GaussianMessage posterior;
  GaussianMessage prediction;
};

/// One closed-form Kalman update from the previous posterior and observation y_t.
KalmanStepResult kalman_step(const GaussianMessage& prior, const KalmanConfig& cfg, double y_t);

/// Bayesian linear regression prior/noise parameters. prior_precision holds
/// one precision per weight dimension (a diagonal prior).
struct BlrConfig {
  std::vector<double> prior_mean;
  std::vector<double> prior_precision;  // alpha_j > 0
  double noise_precision = 2.0;         // beta = 1/sigma^2 > 0
};

void require_valid(const BlrConfig& cfg);

struct BlrPosterior {
  std::vector<double> mean;
  std::vector<std::vector<double>> covariance;
};

/// Closed-form conjugate posterior S_N = (diag(alpha) + beta X^T X)^-1,
/// m_N = S_N (diag(alpha) m_w + beta X^T y). Supports M in {1, 2}.
BlrPosterior blr_posterior(const std::vector<std::vector<double>>& design,
                           const std::vector<double>& targets, const BlrConfig& cfg);

/// Mean-field diagonalization: exact means, diagonal of the covariance.
std::vector<GaussianMessage> mean_field_diag(const std::vector<double>& mean,
                                             const std::vector<std::vector<double>>& cov);

}  // namespace snngbp
