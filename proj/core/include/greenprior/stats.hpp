#pragma once

#include <cstddef>
#include <span>

namespace greenprior {

/// I_x(a, b) for a, b > 0 and x in [0, 1], by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `dof` > 0 degrees of freedom.
double student_t_cdf(double t, double dof);

/// P(|T| >= |t|).
double student_t_two_sided_p(double t, double dof);

double mean(std::span<const double> v);
/// Divides by n.
double population_std(std::span<const double> v);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    double p_value = 1.0; // two-sided test of r = 0 with n - 2 dof
    std::size_t n = 0;
};

/// Ordinary least squares y = slope * x + intercept with Pearson r.
/// Throws ValidationError for fewer than three pairs, mismatched lengths
/// or zero variance in either variable.
LinearFit linear_regression(std::span<const double> x, std::span<const double> y);

} // namespace greenprior
