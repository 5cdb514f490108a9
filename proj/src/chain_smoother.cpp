#include "ideaminer/chain_smoother.hpp"

#include <cmath>

#include "ideaminer/error.hpp"

namespace ideaminer::dtm {

ChainSmoother::ChainSmoother(size_t num_steps, double chain_variance, double obs_variance, double initial_variance)
    : steps_(num_steps),
      chain_variance_(chain_variance),
      obs_variance_(obs_variance),
      initial_variance_(initial_variance) {
  if (steps_ == 0) throw Error("chain needs at least one time step");
  if (!(chain_variance > 0.0) || !(obs_variance > 0.0) || !(initial_variance > 0.0)) {
    throw Error("chain, observation and initial variances must be positive");
  }
  const size_t T = steps_;

  // Forward pass (variances only).
  filtered_var_.resize(T);
  std::vector<double> predicted(T);
  for (size_t t = 0; t < T; ++t) {
    predicted[t] = t == 0 ? initial_variance_ : filtered_var_[t - 1] + chain_variance_;
    const double k = predicted[t] / (predicted[t] + obs_variance_);
    filtered_var_[t] = (1.0 - k) * predicted[t];
  }
  // Backward pass.
  smoothed_var_.assign(T, 0.0);
  smoother_gain_.assign(T > 0 ? T - 1 : 0, 0.0);
  lag_cov_.assign(T > 0 ? T - 1 : 0, 0.0);
  smoothed_var_[T - 1] = filtered_var_[T - 1];
  for (size_t t = T - 1; t-- > 0;) {
    const double j = filtered_var_[t] / predicted[t + 1];
    smoother_gain_[t] = j;
    smoothed_var_[t] = filtered_var_[t] + j * j * (smoothed_var_[t + 1] - predicted[t + 1]);
    lag_cov_[t] = j * smoothed_var_[t + 1];
  }
  // Backward factorization q(x) = q(x_{T-1}) prod_t q(x_t | x_{t+1}).
  log_det_cov_ = std::log(filtered_var_[T - 1]);
  for (size_t t = 0; t + 1 < T; ++t) {
    log_det_cov_ += std::log(filtered_var_[t] * chain_variance_ / predicted[t + 1]);
  }

  prec_diag_.assign(T, 0.0);
  prec_diag_[0] = 1.0 / initial_variance_;
  for (size_t t = 1; t < T; ++t) {
    prec_diag_[t - 1] += 1.0 / chain_variance_;
    prec_diag_[t] += 1.0 / chain_variance_;
  }
  prec_off_ = -1.0 / chain_variance_;

  // Gain matrix column by column from unit observations.
  gain_.assign(T * T, 0.0);
  std::vector<double> unit(T, 0.0), col(T);
  for (size_t s = 0; s < T; ++s) {
    unit[s] = 1.0;
    smooth(unit, col);
    for (size_t t = 0; t < T; ++t) gain_[t * T + s] = col[t];
    unit[s] = 0.0;
  }

  // -1/2 tr(Lambda Sigma) + 1/2 log det Lambda + 1/2 log det Sigma + T/2.
  double trace = 0.0;
  for (size_t t = 0; t < T; ++t) trace += prec_diag_[t] * smoothed_var_[t];
  for (size_t t = 0; t + 1 < T; ++t) trace += 2.0 * prec_off_ * lag_cov_[t];
  chain_const_ = -0.5 * trace + 0.5 * log_det_prior_precision() + 0.5 * log_det_cov_ + 0.5 * static_cast<double>(T);
}

double ChainSmoother::log_det_prior_precision() const {
  return -std::log(initial_variance_) - static_cast<double>(steps_ - 1) * std::log(chain_variance_);
}

void ChainSmoother::smooth(std::span<const double> obs, std::span<double> means) const {
  const size_t T = steps_;
  if (obs.size() != T || means.size() != T) throw Error("chain length mismatch");
  double pred_mean = 0.0;
  for (size_t t = 0; t < T; ++t) {
    const double pred_var = t == 0 ? initial_variance_ : filtered_var_[t - 1] + chain_variance_;
    if (t > 0) pred_mean = means[t - 1];
    const double k = pred_var / (pred_var + obs_variance_);
    means[t] = pred_mean + k * (obs[t] - pred_mean);
  }
  for (size_t t = T - 1; t-- > 0;) {
    // Filtered mean at t equals smoothed-prediction at t+1 in a random walk.
    means[t] = means[t] + smoother_gain_[t] * (means[t + 1] - means[t]);
  }
}

// Quadratic form m' Lambda m written as a sum of squared increments, which
// stays accurate when chain_variance is tiny and the diagonal is huge.
double ChainSmoother::chain_bound(std::span<const double> m) const {
  double quad = m[0] * m[0] / initial_variance_;
  for (size_t t = 1; t < steps_; ++t) {
    const double d = m[t] - m[t - 1];
    quad += d * d / chain_variance_;
  }
  return chain_const_ - 0.5 * quad;
}

void ChainSmoother::chain_bound_gradient(std::span<const double> m, std::span<double> grad) const {
  for (size_t t = 0; t < steps_; ++t) {
    double g = t == 0 ? m[0] / initial_variance_ : 0.0;
    if (t > 0) g += (m[t] - m[t - 1]) / chain_variance_;
    if (t + 1 < steps_) g -= (m[t + 1] - m[t]) / chain_variance_;
    grad[t] = -g;
  }
}

void ChainSmoother::observations_for_means(std::span<const double> m, std::span<double> obs) const {
  std::vector<double> lm(steps_);
  chain_bound_gradient(m, lm);  // -Lambda m
  for (size_t t = 0; t < steps_; ++t) obs[t] = m[t] - obs_variance_ * lm[t];
}

}  // namespace ideaminer::dtm
