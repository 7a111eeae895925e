#include "snngbp/gaussian.hpp"

#include <cmath>
#include <string>

namespace snngbp {

void require_valid(const GaussianMessage& msg) {
  if (!std::isfinite(msg.mean) || !std::isfinite(msg.variance)) {
    throw InvalidMessageError("Gaussian message has non-finite moments (mean=" +
                              std::to_string(msg.mean) +
                              ", variance=" + std::to_string(msg.variance) + ")");
  }
  if (msg.variance <= 0.0) {
    throw InvalidMessageError("Gaussian message variance must be > 0, got " +
                              std::to_string(msg.variance));
  }
}

GaussianMessage gaussian_product(const GaussianMessage& a, const GaussianMessage& b) {
  require_valid(a);
  require_valid(b);
  const double precision = 1.0 / a.variance + 1.0 / b.variance;
  const double variance = 1.0 / precision;
  const double mean = variance * (a.mean / a.variance + b.mean / b.variance);
  return {mean, variance};
}

GaussianMessage addition_forward(const GaussianMessage& x, const GaussianMessage& y) {
  require_valid(x);
  require_valid(y);
  return {x.mean + y.mean, x.variance + y.variance};
}

GaussianMessage addition_backward(const GaussianMessage& x, const GaussianMessage& z) {
  require_valid(x);
  require_valid(z);
  return {z.mean - x.mean, x.variance + z.variance};
}

namespace {

void require_nonzero_scale(double a) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw SingularScaleError("scaling node requires a finite, nonzero factor");
  }
}

}  // namespace

GaussianMessage scaling_forward(const GaussianMessage& y, double a) {
  require_valid(y);
  require_nonzero_scale(a);
  return {a * y.mean, a * a * y.variance};
}

GaussianMessage scaling_backward(const GaussianMessage& z, double a) {
  require_valid(z);
  require_nonzero_scale(a);
  return {z.mean / a, z.variance / (a * a)};
}

void require_valid(const KalmanConfig& cfg) {
  const double values[] = {cfg.prior_mean,      cfg.prior_variance, cfg.input_mean,
                           cfg.input_variance,  cfg.process_variance,
                           cfg.observation_variance};
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("Kalman config contains a non-finite value");
  }
  if (cfg.prior_variance < 0.0 || cfg.input_variance < 0.0 || cfg.process_variance < 0.0) {
    throw ConfigError("Kalman config variances must be >= 0");
  }
  if (cfg.observation_variance <= 0.0) {
    throw ConfigError("Kalman observation variance must be > 0");
  }
}

KalmanStepResult kalman_step(const GaussianMessage& prior, const KalmanConfig& cfg,
                             double y_t) {
  require_valid(prior);
  require_valid(cfg);
  KalmanStepResult result;
  result.prediction.mean = prior.mean + cfg.input_mean;
  result.prediction.variance = prior.variance + cfg.process_variance + cfg.input_variance;
  const double predicted_var = result.prediction.variance;
  result.gain = predicted_var / (predicted_var + cfg.observation_variance);
  result.posterior.mean =
      result.prediction.mean + result.gain * (y_t - result.prediction.mean);
  result.posterior.variance = (1.0 - result.gain) * predicted_var;
  return result;
}

void require_valid(const BlrConfig& cfg) {
  if (cfg.prior_mean.size() != cfg.prior_precision.size()) {
    throw ConfigError("BLR prior mean and precision dimensions differ");
  }
  if (cfg.prior_mean.empty() || cfg.prior_mean.size() > 2) {
    throw ConfigError("BLR supports M in {1, 2} weight dimensions");
  }
  for (double alpha : cfg.prior_precision) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw ConfigError("BLR prior precisions must be > 0");
    }
  }
  if (!(cfg.noise_precision > 0.0) || !std::isfinite(cfg.noise_precision)) {
    throw ConfigError("BLR noise precision must be > 0");
  }
}

BlrPosterior blr_posterior(const std::vector<std::vector<double>>& design,
                           const std::vector<double>& targets, const BlrConfig& cfg) {
  require_valid(cfg);
  const std::size_t dim = cfg.prior_mean.size();
  if (design.size() != targets.size()) {
    throw ConfigError("BLR design rows and target count differ");
  }
  for (const auto& row : design) {
    if (row.size() != dim) throw ConfigError("BLR design row dimension mismatch");
  }

  // Normal-equation matrix A = diag(alpha) + beta X^T X and right-hand side
  // b = diag(alpha) m_w + beta X^T y.
  std::array<std::array<double, 2>, 2> a{{{0.0, 0.0}, {0.0, 0.0}}};
  std::array<double, 2> b{0.0, 0.0};
  for (std::size_t j = 0; j < dim; ++j) {
    a[j][j] = cfg.prior_precision[j];
    b[j] = cfg.prior_precision[j] * cfg.prior_mean[j];
  }
  const double beta = cfg.noise_precision;
  for (std::size_t i = 0; i < design.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      b[j] += beta * design[i][j] * targets[i];
      for (std::size_t k = 0; k < dim; ++k) {
        a[j][k] += beta * design[i][j] * design[i][k];
      }
    }
  }

  BlrPosterior post;
  post.mean.resize(dim);
  post.covariance.assign(dim, std::vector<double>(dim, 0.0));
  if (dim == 1) {
    if (a[0][0] == 0.0) throw std::runtime_error("BLR normal matrix is singular");
    post.covariance[0][0] = 1.0 / a[0][0];
    post.mean[0] = post.covariance[0][0] * b[0];
    return post;
  }
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (det == 0.0) throw std::runtime_error("BLR normal matrix is singular");
  post.covariance[0][0] = a[1][1] / det;
  post.covariance[0][1] = -a[0][1] / det;
  post.covariance[1][0] = -a[1][0] / det;
  post.covariance[1][1] = a[0][0] / det;
  for (std::size_t j = 0; j < 2; ++j) {
    post.mean[j] = post.covariance[j][0] * b[0] + post.covariance[j][1] * b[1];
  }
  return post;
}

std::vector<GaussianMessage> mean_field_diag(const std::vector<double>& mean,
                                             const std::vector<std::vector<double>>& cov) {
  if (cov.size() != mean.size()) {
    throw ConfigError("mean_field_diag: covariance and mean dimensions differ");
  }
  std::vector<GaussianMessage> marginals;
  marginals.reserve(mean.size());
  for (std::size_t j = 0; j < mean.size(); ++j) {
    if (cov[j].size() != mean.size()) {
      throw ConfigError("mean_field_diag: covariance is not square");
    }
    const GaussianMessage marginal{mean[j], cov[j][j]};
    require_valid(marginal);
    marginals.push_back(marginal);
  }
  return marginals;
}

}  // namespace snngbp
