#pragma once

namespace pvwave {

/// Zero-order Bessel function of the first kind.
/// Absolute error <= 1e-10 for |x| <= 1e4; even in x.
/// Throws std::domain_error on non-finite input.
double bessel_j0(double x);

/// Laguerre polynomial L_n(x) == Kummer F(-n, 1, x), by three-term recurrence.
/// Throws std::domain_error for n < 0 or non-finite x.
double laguerre(int n, double x);

/// Regularized incomplete beta I_x(a, b); a, b > 0, x in [0, 1].
/// Continued fraction with the symmetry switch at x = (a+1)/(a+b+2).
double reg_inc_beta(double a, double b, double x);

/// P(T <= t) for Student-t with df degrees of freedom.
double student_t_cdf(double t, int df);

/// Two-sided critical value t* with P(|T| > t*) = alpha_two_sided.
double student_t_critical(double alpha_two_sided, int df);

/// P(F <= f) for the F(d1, d2) distribution.
double f_cdf(double f, int d1, int d2);

/// Upper-alpha quantile of F(d1, d2): P(F > f*) = alpha.
double f_critical(double alpha, int d1, int d2);

} // namespace pvwave
