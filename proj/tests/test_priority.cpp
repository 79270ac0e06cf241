#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "greenprior/errors.hpp"
#include "greenprior/priority.hpp"
#include "support/support.hpp"

using namespace greenprior;

namespace {

Eigen::MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r.size()),
                      static_cast<Eigen::Index>(r.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : r) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

void check_weights(const WeightVector& w, std::initializer_list<double> expected, double tol) {
    REQUIRE(w.size() == static_cast<Eigen::Index>(expected.size()));
    Eigen::Index j = 0;
    for (double e : expected) CHECK(std::abs(w(j++) - e) <= tol);
}

void check_simplex(const WeightVector& w) {
    CHECK((w.array() >= 0.0).all());
    CHECK(std::abs(w.sum() - 1.0) <= 1e-9);
}

Eigen::MatrixXd random_matrix(gp_test::Rng& rng, Eigen::Index n, Eigen::Index k) {
    Eigen::MatrixXd m(n, k);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = rng.uniform();
    return m;
}

} // namespace

TEST_CASE("equal_weight_priority") {
    CHECK(equal_weight_priority({1, 1, 1, 1, 1, 1}) == 1.0);
    CHECK(equal_weight_priority({0, 0, 0, 0, 0, 0}) == 0.0);
    CHECK(equal_weight_priority({0.9, 0.8, 0.5, 0.6, 0.7, 0.9}) == doctest::Approx(0.733333).epsilon(1e-6));
    const IndicatorVector v{0.9, 0.8, 0.5, 0.6, 0.7, 0.9};
    CHECK(weighted_priority(v, equal_weights(6)) == doctest::Approx(equal_weight_priority(v)));
    CHECK_THROWS_AS(weighted_priority(v, equal_weights(5)), ValidationError);
}

TEST_CASE("equal_weight_priority is symmetric and monotone") {
    gp_test::Rng rng(100);
    for (int i = 0; i < 1000; ++i) {
        std::array<double, 6> a;
        for (auto& x : a) x = rng.uniform();
        const double p = equal_weight_priority(IndicatorVector::from_array(a));
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        auto perm = a;
        std::reverse(perm.begin(), perm.end());
        std::rotate(perm.begin(), perm.begin() + rng.integer(0, 5), perm.end());
        CHECK(equal_weight_priority(IndicatorVector::from_array(perm)) == doctest::Approx(p));
        auto up = a;
        const auto j = static_cast<std::size_t>(rng.integer(0, 5));
        up[j] = rng.uniform(up[j], 1.0);
        CHECK(equal_weight_priority(IndicatorVector::from_array(up)) >= p);
    }
}

TEST_CASE("entropy weights") {
    const Eigen::MatrixXd same = rows({{0.2, 0.2, 0.2, 0.2, 0.2, 0.2},
                                      {0.9, 0.9, 0.9, 0.9, 0.9, 0.9},
                                      {0.4, 0.4, 0.4, 0.4, 0.4, 0.4}});
    check_weights(entropy_weights(same), {1 / 6., 1 / 6., 1 / 6., 1 / 6., 1 / 6., 1 / 6.}, 1e-12);

    Eigen::MatrixXd alt(8, 6);
    for (Eigen::Index i = 0; i < 8; ++i) alt.row(i) << (i % 2), 0.5, 0.3, 0.0, 1.0, 0.7;
    check_weights(entropy_weights(alt), {1, 0, 0, 0, 0, 0}, 1e-12);

    const Eigen::MatrixXd hand = rows({{0.2, 0.9, 0.5, 0.0, 0.3, 0.6},
                                      {0.4, 0.7, 0.5, 0.5, 0.9, 0.1},
                                      {0.8, 0.8, 1.0, 1.0, 0.6, 0.3}});
    check_weights(entropy_weights(hand),
                  {0.14933396855684125, 0.00545662473902565, 0.06153772676159801,
                   0.48286184556862805, 0.0911265959483724, 0.20968323842553466},
                  1e-9);

    const Eigen::MatrixXd flat = rows({{0.3, 0.0}, {0.3, 0.0}});
    check_weights(entropy_weights(flat), {0.5, 0.5}, 1e-15);

    CHECK_THROWS_AS(entropy_weights(rows({{0.1, 0.2}})), ValidationError);
    CHECK_THROWS_AS(entropy_weights(rows({{0.1, 2.0}, {0.1, 0.2}})), ValidationError);
}

TEST_CASE("cv weights") {
    const Eigen::MatrixXd same = rows({{0.2, 0.2, 0.2}, {0.9, 0.9, 0.9}});
    check_weights(cv_weights(same), {1 / 3., 1 / 3., 1 / 3.}, 1e-12);

    const Eigen::MatrixXd one_const = rows({{0.2, 0.5, 0.1}, {0.9, 0.5, 0.4}, {0.4, 0.5, 0.8}});
    CHECK(cv_weights(one_const)(1) == 0.0);

    const Eigen::MatrixXd hand = rows({{0.2, 0.9, 0.5, 0.1, 0.3, 0.6},
                                      {0.4, 0.7, 0.5, 0.5, 0.9, 0.1},
                                      {0.8, 0.8, 1.0, 0.9, 0.6, 0.3}});
    check_weights(cv_weights(hand),
                  {0.20034388858836, 0.03825379310324831, 0.13251502647410796,
                   0.24482427586078914, 0.15301517241299323, 0.23104784356050137},
                  1e-9);

    const auto zero_mean = cv_weights_detailed(rows({{-1.0, 1.0}, {1.0, 3.0}}));
    REQUIRE(zero_mean.zero_mean_columns.size() == 1);
    CHECK(zero_mean.zero_mean_columns[0] == 0);
    // Column 0: std 1 on its own; column 1: std 1 over mean 2.
    check_weights(zero_mean.weights, {2 / 3., 1 / 3.}, 1e-12);
}

TEST_CASE("critic weights") {
    Eigen::MatrixXd twins(5, 6);
    for (Eigen::Index i = 0; i < 5; ++i) {
        const double v = 0.1 + 0.2 * static_cast<double>(i * i % 5);
        twins.row(i) << v, v, 0.5, 0.2, 0.0, 1.0;
    }
    check_weights(critic_weights(twins), {0.5, 0.5, 0, 0, 0, 0}, 1e-12);

    // Orthogonal +-1 contrasts: zero correlation, equal std.
    const Eigen::MatrixXd ortho = rows({{1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const Eigen::MatrixXd hadamard =
        rows({{1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    check_weights(critic_weights(hadamard), {1 / 3., 1 / 3., 1 / 3.}, 1e-12);
    check_simplex(critic_weights(ortho));

    const Eigen::MatrixXd hand = rows({{0.1, 0.5, 0.9}, {0.4, 0.2, 0.8}, {0.7, 0.9, 0.3}, {0.3, 0.6, 0.5}});
    check_weights(critic_weights(hand), {0.25567105402791895, 0.2960855742790132, 0.4482433716930679},
                  1e-9);
}

TEST_CASE("every scheme returns simplex weights") {
    gp_test::Rng rng(55);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = random_matrix(rng, rng.integer(2, 40), 6);
        if (rng.chance(0.3)) m.col(rng.integer(0, 5)).setConstant(rng.uniform());
        if (rng.chance(0.1)) m.setConstant(0.5);
        for (auto scheme : all_weighting_schemes) check_simplex(scheme_weights(scheme, m));
    }
}

TEST_CASE("uniform column scaling keeps the dominant column") {
    gp_test::Rng rng(56);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_matrix(rng, 12, 6);
        const double s = rng.uniform(0.1, 10);
        Eigen::Index a = 0;
        Eigen::Index b = 0;
        cv_weights(m).maxCoeff(&a);
        cv_weights(m * s).maxCoeff(&b);
        CHECK(a == b);
        critic_weights(m).maxCoeff(&a);
        critic_weights(m * s).maxCoeff(&b);
        CHECK(a == b);
    }
}

TEST_CASE("identical columns give identical priorities under every scheme") {
    gp_test::Rng rng(57);
    std::vector<IndicatorVector> v;
    for (int i = 0; i < 10; ++i) {
        const double x = rng.uniform();
        v.push_back({x, x, x, x, x, x});
    }
    const auto m = indicator_matrix(v);
    const auto base = score_buildings(v, equal_weights(6));
    for (auto scheme : all_weighting_schemes) {
        const auto p = score_buildings(v, scheme_weights(scheme, m));
        for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == doctest::Approx(base[i]).epsilon(1e-12));
    }
}

TEST_CASE("rank_buildings") {
    const std::vector<std::string> ids{"x", "y", "z"};
    const auto r = rank_buildings(ids, std::vector{0.9, 0.5, 0.7});
    CHECK(r[0].building_id == "x");
    CHECK(r[1].building_id == "z");
    CHECK(r[2].building_id == "y");
    CHECK(r[0].rank == 1);
    CHECK(r[2].rank == 3);
    CHECK(r[0].percentile == 100.0);
    CHECK(r[1].percentile == 50.0);
    CHECK(r[2].percentile == 0.0);

    const std::vector<std::string> tie_ids{"b", "a"};
    const auto t = rank_buildings(tie_ids, std::vector{0.5, 0.5});
    CHECK(t[0].building_id == "a");

    const std::vector<std::string> one{"solo"};
    const auto s = rank_buildings(one, std::vector{0.3});
    CHECK(s[0].rank == 1);
    CHECK(s[0].percentile == 100.0);

    CHECK_THROWS_AS(rank_buildings(one, std::vector{0.1, 0.2}), ValidationError);
}

TEST_CASE("summarize_priorities") {
    const auto s = summarize_priorities(std::vector{0.9, 0.4, 0.6, 0.5});
    CHECK(s.count == 4);
    CHECK(s.share_above_half == 0.5);
    CHECK(s.mean == doctest::Approx(0.6));
    CHECK(s.max == 0.9);
    CHECK(summarize_priorities({}).count == 0);
}

TEST_CASE("scheme names") {
    for (auto s : all_weighting_schemes) CHECK(weighting_scheme_from_string(to_string(s)) == s);
    CHECK_FALSE(weighting_scheme_from_string("ahp").has_value());
}
