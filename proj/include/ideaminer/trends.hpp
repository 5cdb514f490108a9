#pragma once

#include <span>
#include <string>
#include <vector>

#include "ideaminer/dtm.hpp"

namespace ideaminer::trends {

using dtm::TermTrajectory;

struct CorrelationResult {
  int topic = -1;
  std::string term_a;
  std::string term_b;
  double r = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;  // two-sided, n - 2 degrees of freedom
  size_t n = 0;
};

// Product-moment correlation with its t statistic r * sqrt((n-2)/(1-r^2)).
// Requires equal lengths, n >= 3 and neither series constant.
CorrelationResult pearson_correlation(std::span<const double> x, std::span<const double> y);

bool is_constant(std::span<const double> x);

struct HorizonPoint {
  int year = 0;
  double predicted = 0.0;  // clamped to [0, 1]
  double unclamped = 0.0;  // intercept + slope * year
  bool clamped = false;
};

struct ForecastResult {
  int topic = -1;
  std::string term;
  double slope = 0.0;      // probability per year
  double intercept = 0.0;  // at calendar year 0
  double intercept_reindexed = 0.0;  // at the first observed year
  double r_squared = 0.0;
  double rse = 0.0;  // sqrt(SSE / (n - 2))
  double slope_se = 0.0;
  double slope_t = 0.0;
  double slope_p_value = 1.0;
  size_t n = 0;
  std::vector<HorizonPoint> horizon;
  bool any_clamped = false;
};

inline constexpr size_t kMinRegressionObservations = 4;
inline constexpr size_t kMinArimaObservations = 50;

// Least squares of value on calendar year, with forecasts for the next
// horizon_years years. Needs at least 4 observations.
ForecastResult ols_forecast(const TermTrajectory& trajectory, int horizon_years);

enum class Method { kRegression, kArima };

struct GateDecision {
  Method requested = Method::kRegression;
  bool permitted = false;
  std::string reason;
};

// Regression needs n >= 4. ARIMA is refused below 50 observations and, as
// it is not implemented, refused above as well.
GateDecision method_gate(size_t n, Method requested);

enum class Trend { kIncreasing, kDecreasing, kFlat };
std::string_view to_string(Trend trend);

Trend classify_trend(const ForecastResult& forecast, double alpha_level = 0.05);

// Union over all slices of the topic's top_n terms; term indices sorted by term.
std::vector<size_t> candidate_terms(const dtm::DtmModel& model, int topic, size_t top_n);

struct CorrelationMatrix {
  std::vector<CorrelationResult> pairs;  // lexicographic on (term_a, term_b)
  std::vector<std::string> skipped;      // constant-series candidates
};

// Pearson correlation of every unordered pair of candidate-term trajectories.
CorrelationMatrix correlation_matrix(const dtm::DtmModel& model, int topic, size_t top_n);

struct TermTrend {
  ForecastResult forecast;
  Trend classification = Trend::kFlat;
};

std::string trends_csv(const std::vector<TermTrend>& trends);
std::string forecasts_csv(const std::vector<TermTrend>& trends);
std::string correlations_csv(const std::vector<CorrelationResult>& pairs);

}  // namespace ideaminer::trends
