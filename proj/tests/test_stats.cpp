#include <doctest.h>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>

#include "greenprior/errors.hpp"
#include "greenprior/stats.hpp"
#include "support/support.hpp"

using namespace greenprior;

TEST_CASE("regularized incomplete beta matches Boost") {
    gp_test::Rng rng(40);
    for (int i = 0; i < 2000; ++i) {
        const double a = rng.uniform(0.05, 300);
        const double b = rng.uniform(0.05, 300);
        const double x = rng.uniform();
        const double expected = boost::math::ibeta(a, b, x);
        CHECK(std::abs(regularized_incomplete_beta(a, b, x) - expected) <= 1e-11);
    }
    CHECK(regularized_incomplete_beta(2, 3, 0) == 0.0);
    CHECK(regularized_incomplete_beta(2, 3, 1) == 1.0);
    CHECK_THROWS_AS(regularized_incomplete_beta(0, 3, 0.5), ValidationError);
    CHECK_THROWS_AS(regularized_incomplete_beta(1, 3, 1.5), ValidationError);
}

TEST_CASE("Student t distribution matches Boost") {
    gp_test::Rng rng(41);
    for (int i = 0; i < 2000; ++i) {
        const double dof = i % 3 == 0 ? static_cast<double>(rng.integer(1, 1000)) : rng.uniform(0.5, 600);
        const double t = rng.uniform(-12, 12);
        const boost::math::students_t dist(dof);
        CHECK(std::abs(student_t_cdf(t, dof) - boost::math::cdf(dist, t)) <= 1e-11);
        const double p = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
        CHECK(std::abs(student_t_two_sided_p(t, dof) - p) <= 1e-11 * std::max(1.0, p));
    }
    CHECK(student_t_cdf(0.0, 5) == doctest::Approx(0.5));
    CHECK(student_t_two_sided_p(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("mean and population std") {
    CHECK(mean(std::vector{1.0, 2.0, 6.0}) == 3.0);
    CHECK(population_std(std::vector{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) == 2.0);
    CHECK_THROWS_AS(mean(std::vector<double>{}), ValidationError);
}

TEST_CASE("linear_regression") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    std::vector<double> y;
    for (double v : x) y.push_back(2 * v + 1);
    const auto exact = linear_regression(x, y);
    CHECK(exact.slope == doctest::Approx(2.0));
    CHECK(exact.intercept == doctest::Approx(1.0));
    CHECK(exact.r == doctest::Approx(1.0));
    CHECK(exact.p_value == 0.0);

    const auto noisy = linear_regression(std::vector{1.0, 2.0, 3.0, 4.0, 5.0},
                                         std::vector{2.0, 1.0, 4.0, 3.0, 5.0});
    CHECK(noisy.r == doctest::Approx(0.8));
    // t = 0.8 sqrt(3 / 0.36) with 3 dof.
    const double t = 0.8 * std::sqrt(3 / 0.36);
    const boost::math::students_t dist(3);
    CHECK(noisy.p_value == doctest::Approx(2 * boost::math::cdf(boost::math::complement(dist, t))));

    CHECK_THROWS_AS(linear_regression(std::vector{1.0, 2.0}, std::vector{1.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(linear_regression(std::vector{1.0, 1.0, 1.0}, std::vector{1.0, 2.0, 3.0}),
                    ValidationError);
    CHECK_THROWS_AS(linear_regression(std::vector{1.0, 2.0, 3.0}, std::vector{4.0, 4.0, 4.0}),
                    ValidationError);
    CHECK_THROWS_AS(linear_regression(std::vector{1.0, 2.0, 3.0}, std::vector{1.0, 2.0}),
                    ValidationError);
}

TEST_CASE("independent samples rarely show correlation") {
    gp_test::Rng rng(42);
    int small = 0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> x;
        std::vector<double> y;
        for (int i = 0; i < 1000; ++i) {
            x.push_back(rng.normal());
            y.push_back(rng.normal());
        }
        if (std::abs(linear_regression(x, y).r) < 0.1) ++small;
    }
    CHECK(small >= 95);
}

TEST_CASE("a weak negative correlation is recovered") {
    gp_test::Rng rng(43);
    const double rho = -0.25;
    int good = 0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> x;
        std::vector<double> y;
        for (int i = 0; i < 540; ++i) {
            const double a = rng.normal();
            x.push_back(a);
            y.push_back(rho * a + std::sqrt(1 - rho * rho) * rng.normal());
        }
        const auto fit = linear_regression(x, y);
        if (std::abs(fit.r - rho) <= 0.08 && fit.p_value < 0.001) ++good;
    }
    CHECK(good >= 90);
}
