// Independent reference computations used to check library statistics.
#pragma once

#include <cmath>
#include <set>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "ideaminer/preprocess.hpp"

namespace ideaminer::testing {

struct PearsonOracle {
  double r, t, p;
};

// Raw-moment formulation in long double.
inline PearsonOracle pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const long double n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  const double r = static_cast<double>(num / den);
  const double df = static_cast<double>(n) - 2.0;
  const double t = r * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  const double p = std::isinf(t) ? 0.0 : 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return {r, t, p};
}

struct OlsOracle {
  double slope, intercept, rse, p;
};

// Normal equations solved by Cramer's rule in long double.
inline OlsOracle ols_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  long double s1 = static_cast<long double>(n), sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sy += y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double det = s1 * sxx - sx * sx;
  const long double b = (s1 * sxy - sx * sy) / det;
  const long double a = (sxx * sy - sx * sxy) / det;
  long double sse = 0;
  for (size_t i = 0; i < n; ++i) {
    const long double e = y[i] - (a + b * x[i]);
    sse += e * e;
  }
  const long double df = static_cast<long double>(n) - 2;
  const long double rse = std::sqrt(sse / df);
  const long double se = rse / std::sqrt(sxx - sx * sx / s1);
  const double t = static_cast<double>(b / se);
  boost::math::students_t dist(static_cast<double>(df));
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return {static_cast<double>(b), static_cast<double>(a), static_cast<double>(rse), p};
}

// UMass by direct set membership over every document.
inline double umass_oracle(const std::vector<uint32_t>& top, const preprocess::BowCorpus& bow) {
  std::vector<std::set<uint32_t>> docs;
  for (const auto& d : bow.docs) {
    std::set<uint32_t> s;
    for (const auto& tc : d) s.insert(tc.term);
    docs.push_back(std::move(s));
  }
  double score = 0;
  for (size_t i = 1; i < top.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      double both = 0, dj = 0;
      for (const auto& s : docs) {
        const bool has_j = s.count(top[j]) > 0;
        dj += has_j;
        both += has_j && s.count(top[i]) > 0;
      }
      score += std::log((both + 1.0) / dj);
    }
  }
  return score;
}

inline bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

}  // namespace ideaminer::testing
