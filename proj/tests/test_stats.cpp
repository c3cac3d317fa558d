#include <cmath>
#include <vector>

#include <doctest.h>

#include "fxtails/errors.hpp"
#include "fxtails/rng.hpp"
#include "fxtails/stats.hpp"

using namespace fxtails;

TEST_CASE("mean and population variance") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    CHECK(mean(xs) == 2.5);
    CHECK(variance(xs) == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("median uses the midpoint convention") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK(median({5.0}) == 5.0);
}

TEST_CASE("quantile_sorted matches the linear-interpolation oracle") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 10.0};
    CHECK(quantile_sorted(xs, 0.0) == 1.0);
    CHECK(quantile_sorted(xs, 0.25) == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(quantile_sorted(xs, 0.5) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(quantile_sorted(xs, 0.75) == doctest::Approx(4.75).epsilon(1e-14));
    CHECK(quantile_sorted(xs, 1.0) == 10.0);
    CHECK(quantile_sorted(xs, 0.1) == doctest::Approx(1.3).epsilon(1e-14));
}

TEST_CASE("fit_line matches the least-squares oracle") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const std::vector<double> y = {2.2, 2.9, 4.1, 4.8, 6.2, 6.8};
    const LineFit fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(0.9599999999999996).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(1.1400000000000026).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(0.9906633906633906).epsilon(1e-12));
}

TEST_CASE("fit_line degenerate cases") {
    const std::vector<double> ones = {2.0, 2.0, 2.0};
    const std::vector<double> x = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit_line(ones, x), DegenerateError);
    const LineFit fit = fit_line(x, ones);  // constant response: flat line
    CHECK(fit.slope == 0.0);
    CHECK(fit.intercept == 2.0);
    CHECK(fit.r2 == 1.0);
}

TEST_CASE("pearson matches scipy on a fixed sample") {
    const std::vector<double> x = {1.2, 2.3, 3.1, 4.8, 5.5, 6.1, 7.9, 8.2};
    const std::vector<double> y = {2.1, 2.9, 4.2, 4.0, 6.3, 5.9, 8.1, 9.0};
    CHECK(pearson(x, y) == doctest::Approx(0.967158046533307).epsilon(1e-12));
}

TEST_CASE("incomplete beta matches scipy betainc") {
    CHECK(incomplete_beta(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554536).epsilon(1e-10));
    CHECK(incomplete_beta(2, 3, 0.4) == doctest::Approx(0.5247999999999999).epsilon(1e-10));
    CHECK(incomplete_beta(5, 1.5, 0.9) == doctest::Approx(0.7761721343162159).epsilon(1e-10));
    CHECK(incomplete_beta(10, 10, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(incomplete_beta(0.5, 5, 0.01) == doctest::Approx(0.24284189089843747).epsilon(1e-10));
    CHECK(incomplete_beta(3, 0.5, 0.999) == doctest::Approx(0.9407468104840536).epsilon(1e-10));
    CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
}

TEST_CASE("t-test p-values match scipy") {
    CHECK(t_test_p_two_sided(2.1, 8) == doctest::Approx(0.06893752429531216).epsilon(1e-10));
    CHECK(t_test_p_two_sided(-1.3, 73) == doctest::Approx(0.1976907926884995).epsilon(1e-10));
    CHECK(t_test_p_two_sided(4.5, 3) == doctest::Approx(0.020490412344453403).epsilon(1e-10));
    CHECK(t_test_p_two_sided(0.75, 48) == doctest::Approx(0.45691525484387663).epsilon(1e-10));
    CHECK(t_test_p_two_sided(0.0, 10) == 1.0);
    // Extreme statistics clamp to the positive floor instead of hitting zero.
    const double p = t_test_p_two_sided(1e9, 5);
    CHECK(p > 0.0);
    CHECK(p <= 1e-30);
}

TEST_CASE("F-test p-values match scipy") {
    CHECK(f_test_p_upper(3.2, 2, 72) == doctest::Approx(0.046622076739910395).epsilon(1e-10));
    CHECK(f_test_p_upper(0.5, 2, 10) == doctest::Approx(0.620921323059155).epsilon(1e-10));
    CHECK(f_test_p_upper(10, 2, 5) == doctest::Approx(0.01788854381999832).epsilon(1e-10));
    CHECK(f_test_p_upper(1.0, 2, 30) == doctest::Approx(0.37981240581524567).epsilon(1e-10));
}

TEST_CASE("log_spaced_sizes spans the range with distinct sizes") {
    const auto sizes = log_spaced_sizes(10, 1000, 12);
    REQUIRE(sizes.size() == 12);
    CHECK(sizes.front() == 10);
    CHECK(sizes.back() == 1000);
    for (std::size_t i = 1; i < sizes.size(); ++i) CHECK(sizes[i] > sizes[i - 1]);
}

TEST_CASE("log_spaced_sizes collapses small ranges without duplicates") {
    const auto sizes = log_spaced_sizes(10, 14, 12);
    CHECK(sizes.size() == 5);
    CHECK(sizes.front() == 10);
    CHECK(sizes.back() == 14);
}
