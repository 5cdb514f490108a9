#pragma once

#include <span>
#include <vector>

namespace ideaminer::dtm {

// Forward-backward (Rauch-Tung-Striebel) smoother for the scalar chain
//   x_0 ~ N(0, initial_variance),  x_t | x_{t-1} ~ N(x_{t-1}, chain_variance)
// observed through pseudo-observations  y_t ~ N(x_t, obs_variance).
//
// Variances do not depend on the observations, so they are computed once
// and shared by every chain with the same (T, variances).
class ChainSmoother {
 public:
  ChainSmoother(size_t num_steps, double chain_variance, double obs_variance, double initial_variance);

  size_t num_steps() const { return steps_; }
  double chain_variance() const { return chain_variance_; }
  double obs_variance() const { return obs_variance_; }
  double initial_variance() const { return initial_variance_; }

  // Smoothed means given pseudo-observations; both spans have length T.
  void smooth(std::span<const double> observations, std::span<double> means) const;

  // means = gain * observations. gain()[t * T + s] = d mean_t / d obs_s.
  const std::vector<double>& gain() const { return gain_; }

  const std::vector<double>& smoothed_variance() const { return smoothed_var_; }
  // Cov(x_t, x_{t+1}) under the smoothed posterior, length T-1.
  const std::vector<double>& lag_covariance() const { return lag_cov_; }

  // log det of the smoothed joint covariance.
  double log_det_covariance() const { return log_det_cov_; }

  // Prior precision (tridiagonal) entries: diagonal length T, off-diagonal T-1.
  const std::vector<double>& prior_precision_diag() const { return prec_diag_; }
  double prior_precision_off() const { return prec_off_; }
  double log_det_prior_precision() const;

  // E_q[log p(x)] - E_q[log q(x)] for a chain with smoothed means `means`.
  double chain_bound(std::span<const double> means) const;
  // Gradient of chain_bound with respect to the means: -Lambda * means.
  void chain_bound_gradient(std::span<const double> means, std::span<double> grad) const;

  // Solves gain * observations = means, i.e. observations = (obs_var * Lambda + I) means.
  void observations_for_means(std::span<const double> means, std::span<double> observations) const;

 private:
  size_t steps_;
  double chain_variance_, obs_variance_, initial_variance_;
  std::vector<double> filtered_var_;   // P_{t|t}
  std::vector<double> smoother_gain_;  // J_t, length T-1
  std::vector<double> smoothed_var_;
  std::vector<double> lag_cov_;
  std::vector<double> gain_;
  std::vector<double> prec_diag_;
  double prec_off_ = 0.0;
  double log_det_cov_ = 0.0;
  double chain_const_ = 0.0;  // observation-independent part of chain_bound
};

}  // namespace ideaminer::dtm
