#pragma once

// Regularized incomplete beta/gamma functions and the tail probabilities
// built on them. Accuracy target is 1e-10 absolute.

namespace mediaflu::special {

// I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_beta(double a, double b, double x);

// Q(a, x) = Gamma(a, x) / Gamma(a) for a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

// P(|T| >= |t|) for Student-t with dof degrees of freedom.
double student_t_two_sided(double t, double dof);

// P(X >= x) for chi-square with dof degrees of freedom.
double chi_square_upper(double x, double dof);

}  // namespace mediaflu::special
