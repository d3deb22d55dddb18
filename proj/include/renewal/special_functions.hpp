#pragma once

namespace renewal {

// Regularized lower and upper incomplete gamma functions P(a,x), Q(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// log Q(a,x), accurate far into the upper tail where Q underflows.
double log_gamma_q(double a, double x);

// x with P(a,x) = p.
double gamma_p_inv(double a, double p);

}  // namespace renewal
