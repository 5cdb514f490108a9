#include "ideaminer/trends.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ideaminer/csv.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/io.hpp"
#include "ideaminer/stats.hpp"

namespace ideaminer::trends {
namespace {

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double centered_sum_squares(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s;
}

}  // namespace

bool is_constant(std::span<const double> x) {
  if (x.empty()) return true;
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double sd = std::sqrt(centered_sum_squares(x) / static_cast<double>(x.size()));
  return sd == 0.0 || sd <= 1e-12 * scale;
}

CorrelationResult pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error("correlation: series lengths differ (" + std::to_string(x.size()) + " vs " +
                std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) throw Error("correlation needs at least 3 observations");
  if (is_constant(x) || is_constant(y)) throw Error("zero variance: correlation undefined");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  CorrelationResult out;
  out.n = x.size();
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(out.n) - 2.0;
  const double one_minus = 1.0 - out.r * out.r;
  if (one_minus <= 0.0) {
    out.t_stat = std::copysign(std::numeric_limits<double>::infinity(), out.r);
    out.p_value = 0.0;
  } else {
    out.t_stat = out.r * std::sqrt(df / one_minus);
    out.p_value = stats::student_t_two_sided_p(out.t_stat, df);
  }
  return out;
}

ForecastResult ols_forecast(const TermTrajectory& traj, int horizon_years) {
  const size_t n = traj.values.size();
  if (traj.years.size() != n) throw Error("trajectory years and values differ in length");
  if (n < kMinRegressionObservations) {
    throw Error("regression requires >= 4 observations, got " + std::to_string(n));
  }
  if (horizon_years < 0) throw Error("forecast horizon must be non-negative");
  for (size_t i = 1; i < n; ++i) {
    if (traj.years[i] <= traj.years[i - 1]) throw Error("trajectory years must be strictly increasing");
  }
  std::vector<double> x(traj.years.begin(), traj.years.end());
  const std::vector<double>& y = traj.values;
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, sst = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    sst += (y[i] - my) * (y[i] - my);
  }
  ForecastResult f;
  f.topic = traj.topic;
  f.term = traj.term;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.intercept_reindexed = f.intercept + f.slope * x.front();
  double sse = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    sse += e * e;
  }
  f.r_squared = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 1.0;
  const double df = static_cast<double>(n) - 2.0;
  f.rse = std::sqrt(sse / df);
  f.slope_se = f.rse / std::sqrt(sxx);
  if (f.slope_se > 0.0) {
    f.slope_t = f.slope / f.slope_se;
    f.slope_p_value = stats::student_t_two_sided_p(f.slope_t, df);
  } else if (f.slope != 0.0) {
    f.slope_t = std::copysign(std::numeric_limits<double>::infinity(), f.slope);
    f.slope_p_value = 0.0;
  } else {
    f.slope_t = 0.0;
    f.slope_p_value = 1.0;
  }
  for (int h = 1; h <= horizon_years; ++h) {
    HorizonPoint p;
    p.year = traj.years.back() + h;
    p.unclamped = f.intercept + f.slope * static_cast<double>(p.year);
    p.predicted = std::clamp(p.unclamped, 0.0, 1.0);
    p.clamped = p.predicted != p.unclamped;
    f.any_clamped = f.any_clamped || p.clamped;
    f.horizon.push_back(p);
  }
  return f;
}

GateDecision method_gate(size_t n, Method requested) {
  GateDecision g;
  g.requested = requested;
  if (requested == Method::kRegression) {
    g.permitted = n >= kMinRegressionObservations;
    g.reason = g.permitted ? "regression permitted with " + std::to_string(n) + " observations"
                           : "regression requires >= 4 observations, got " + std::to_string(n);
    return g;
  }
  g.permitted = false;
  if (n < kMinArimaObservations) {
    g.reason = "ARIMA refused: ARIMA-class models require >= 50 observations, got " + std::to_string(n) +
               "; use regression";
  } else {
    g.reason = "ARIMA not implemented: the 50-observation requirement is met (" + std::to_string(n) +
               "), but only the gate is provided";
  }
  return g;
}

std::string_view to_string(Trend trend) {
  switch (trend) {
    case Trend::kIncreasing: return "increasing";
    case Trend::kDecreasing: return "decreasing";
    case Trend::kFlat: return "flat";
  }
  return "flat";
}

Trend classify_trend(const ForecastResult& f, double alpha_level) {
  if (f.slope_p_value < alpha_level) {
    if (f.slope > 0.0) return Trend::kIncreasing;
    if (f.slope < 0.0) return Trend::kDecreasing;
  }
  return Trend::kFlat;
}

std::vector<size_t> candidate_terms(const dtm::DtmModel& model, int topic, size_t top_n) {
  if (topic < 0 || topic >= model.num_topics) throw Error("topic index out of range");
  std::set<size_t> ids;
  for (size_t t = 0; t < model.num_slices; ++t) {
    for (size_t i : lda::rank_indices(model.topic_at(t, topic), model.terms, top_n)) ids.insert(i);
  }
  std::vector<size_t> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end(), [&](size_t a, size_t b) {
    return model.terms.empty() ? a < b : model.terms[a] < model.terms[b];
  });
  return out;
}

CorrelationMatrix correlation_matrix(const dtm::DtmModel& model, int topic, size_t top_n) {
  if (top_n < 2) throw Error("correlation matrix needs top_n >= 2");
  if (model.num_slices < 3) throw Error("correlation needs at least 3 time slices");
  CorrelationMatrix out;
  std::vector<TermTrajectory> series;
  for (size_t w : candidate_terms(model, topic, top_n)) {
    auto tr = dtm::topic_term_trajectory(model, topic, w);
    if (is_constant(tr.values)) {
      out.skipped.push_back(tr.term);
    } else {
      series.push_back(std::move(tr));
    }
  }
  if (series.size() < 2) {
    throw Error("topic " + std::to_string(topic) + " has fewer than 2 non-constant candidate series");
  }
  for (size_t i = 0; i < series.size(); ++i) {
    for (size_t j = i + 1; j < series.size(); ++j) {
      CorrelationResult r = pearson_correlation(series[i].values, series[j].values);
      r.topic = topic;
      r.term_a = series[i].term;
      r.term_b = series[j].term;
      out.pairs.push_back(std::move(r));
    }
  }
  return out;
}

std::string trends_csv(const std::vector<TermTrend>& trends) {
  std::string out = "topic,term,slope,p_value,classification,r_squared\n";
  for (const auto& t : trends) {
    const auto& f = t.forecast;
    out += csv::format_row({std::to_string(f.topic), f.term, io::format_number(f.slope),
                            io::format_number(f.slope_p_value), std::string(to_string(t.classification)),
                            io::format_number(f.r_squared)});
  }
  return out;
}

std::string forecasts_csv(const std::vector<TermTrend>& trends) {
  std::string out = "topic,term,year,predicted,unclamped,clamped,rse,intercept,intercept_reindexed\n";
  for (const auto& t : trends) {
    const auto& f = t.forecast;
    for (const auto& h : f.horizon) {
      out += csv::format_row({std::to_string(f.topic), f.term, std::to_string(h.year), io::format_number(h.predicted),
                              io::format_number(h.unclamped), h.clamped ? "1" : "0", io::format_number(f.rse),
                              io::format_number(f.intercept), io::format_number(f.intercept_reindexed)});
    }
  }
  return out;
}

std::string correlations_csv(const std::vector<CorrelationResult>& pairs) {
  std::string out = "topic,term_a,term_b,r,p_value,n\n";
  for (const auto& p : pairs) {
    out += csv::format_row({std::to_string(p.topic), p.term_a, p.term_b, io::format_number(p.r),
                            io::format_number(p.p_value), std::to_string(p.n)});
  }
  return out;
}

}  // namespace ideaminer::trends
