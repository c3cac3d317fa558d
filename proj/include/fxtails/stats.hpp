#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fxtails {

// Small shared numeric helpers. Moment conventions are population (divisor n)
// throughout unless a function says otherwise.

double mean(std::span<const double> xs);

// Population variance (divisor n).
double variance(std::span<const double> xs);

// Median with the midpoint convention for even counts.
double median(std::vector<double> xs);

// Linear-interpolated quantile of a sorted vector, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares of y on x. Throws DegenerateError when x has zero
// variance. r2 is 1 when y is constant (zero residual, zero total variance).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Pearson correlation coefficient. Throws DegenerateError on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0, 1].
// Continued-fraction evaluation (modified Lentz).
double incomplete_beta(double a, double b, double x);

// Two-sided p-value of a t statistic with df degrees of freedom, clamped to
// the smallest positive normal double so that p stays in (0, 1].
double t_test_p_two_sided(double t, double df);

// Upper-tail p-value of an F statistic with (d1, d2) degrees of freedom.
double f_test_p_upper(double f, double d1, double d2);

// 12 (or `count`) log-spaced distinct integer window sizes in [lo, hi].
std::vector<std::size_t> log_spaced_sizes(std::size_t lo, std::size_t hi, std::size_t count);

}  // namespace fxtails
