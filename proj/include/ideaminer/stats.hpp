#pragma once

namespace ideaminer::stats {

// Regularized incomplete beta I_x(a, b), evaluated by Lentz's continued
// fraction (with the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) for convergence).
double regularized_incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
// Infinite |t| gives 0.
double student_t_two_sided_p(double t, double df);

// P(T <= t).
double student_t_cdf(double t, double df);

}  // namespace ideaminer::stats
