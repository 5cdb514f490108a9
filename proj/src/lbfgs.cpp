#include "ideaminer/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ideaminer::optimize {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Pair {
  std::vector<double> s, y;
  double rho;
};

}  // namespace

LbfgsResult minimize(const Objective& f, std::vector<double>& x, const LbfgsOptions& options) {
  const size_t n = x.size();
  LbfgsResult result;
  std::vector<double> grad(n), dir(n), x_new(n), grad_new(n), alpha_buf;
  double fx = f(x, grad);
  ++result.evaluations;
  std::deque<Pair> history;
  constexpr double kArmijo = 1e-4;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (inf_norm(grad) <= options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    // Two-loop recursion.
    dir = grad;
    alpha_buf.assign(history.size(), 0.0);
    for (size_t i = history.size(); i-- > 0;) {
      alpha_buf[i] = history[i].rho * dot(history[i].s, dir);
      for (size_t j = 0; j < n; ++j) dir[j] -= alpha_buf[i] * history[i].y[j];
    }
    if (!history.empty()) {
      const auto& last = history.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (double& d : dir) d *= gamma;
    } else {
      const double scale = 1.0 / std::max(1.0, std::sqrt(dot(grad, grad)));
      for (double& d : dir) d *= scale;
    }
    for (size_t i = 0; i < history.size(); ++i) {
      const double beta = history[i].rho * dot(history[i].y, dir);
      for (size_t j = 0; j < n; ++j) dir[j] += (alpha_buf[i] - beta) * history[i].s[j];
    }
    for (double& d : dir) d = -d;
    double slope = dot(grad, dir);
    if (!(slope < 0.0)) {
      history.clear();
      const double scale = 1.0 / std::max(1.0, std::sqrt(dot(grad, grad)));
      for (size_t j = 0; j < n; ++j) dir[j] = -grad[j] * scale;
      slope = dot(grad, dir);
    }

    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (size_t j = 0; j < n; ++j) x_new[j] = x[j] + step * dir[j];
      f_new = f(x_new, grad_new);
      ++result.evaluations;
      if (std::isfinite(f_new) && f_new <= fx + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || !(f_new < fx)) {  // no further progress possible
      result.converged = true;
      break;
    }

    Pair p;
    p.s.resize(n);
    p.y.resize(n);
    for (size_t j = 0; j < n; ++j) {
      p.s[j] = x_new[j] - x[j];
      p.y[j] = grad_new[j] - grad[j];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 1e-12 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y))) {
      p.rho = 1.0 / sy;
      history.push_back(std::move(p));
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }

    const double f_prev = fx;
    x.swap(x_new);
    grad.swap(grad_new);
    fx = f_new;
    ++result.iterations;
    if (std::abs(f_prev - fx) <= options.function_tolerance * std::max(1.0, std::abs(fx))) {
      result.converged = true;
      break;
    }
  }
  result.value = fx;
  return result;
}

}  // namespace ideaminer::optimize
