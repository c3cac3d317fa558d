#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "fxtails/errors.hpp"
#include "fxtails/rng.hpp"
#include "fxtails/similarity.hpp"

using namespace fxtails;

namespace {

const double kLn2 = std::log(2.0);

Histogram two_bin(double m0, double m1) {
    return Histogram{{0.0, 1.0, 2.0}, {m0, m1}};
}

std::vector<double> draw(std::uint64_t seed, int n, double shift = 0.0, double scale = 1.0) {
    CounterRng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(shift + scale * rng.next_gaussian());
    return out;
}

}  // namespace

TEST_CASE("kl divergence basics") {
    const auto p = two_bin(1.0, 0.0);
    const auto q = two_bin(0.5, 0.5);
    CHECK(kl_divergence(p, p) == 0.0);
    CHECK(kl_divergence(q, q) == 0.0);
    CHECK(kl_divergence(p, q) == doctest::Approx(kLn2).epsilon(1e-15));
    CHECK_THROWS_AS(kl_divergence(q, p), DomainError);

    Histogram r = q;
    r.edges[2] = 2.5;
    CHECK_THROWS_AS(kl_divergence(q, r), ValidationError);
}

TEST_CASE("js divergence matches the hand-evaluated two-bin case") {
    const auto p = two_bin(1.0, 0.0);
    const auto q = two_bin(0.5, 0.5);
    const double expected = 0.5 * std::log(4.0 / 3.0) +
                            0.5 * (0.5 * std::log(2.0 / 3.0) + 0.5 * kLn2);
    CHECK(expected == doctest::Approx(0.21576155433883565).epsilon(1e-15));
    CHECK(js_divergence(p, q) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(js_divergence(p, q) == js_divergence(q, p));

    CHECK(js_divergence(p, p) == 0.0);
    // Disjoint supports attain the natural-log ceiling.
    CHECK(js_divergence(p, two_bin(0.0, 1.0)) == kLn2);
}

TEST_CASE("js divergence is symmetric, bounded, and bin-order blind") {
    CounterRng rng(40);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 50; ++i) a.push_back(rng.next_unit());
        for (int i = 0; i < 50; ++i) b.push_back(rng.next_unit() * 2.0);
        const auto [p, q] = shared_histograms(a, b, 8);
        const double js = js_divergence(p, q);
        CHECK(js == js_divergence(q, p));  // exact
        CHECK(js >= 0.0);
        CHECK(js <= kLn2 + 1e-12);

        // Reversing both mass vectors relabels bins without changing JS.
        Histogram pr = p, qr = q;
        std::reverse(pr.mass.begin(), pr.mass.end());
        std::reverse(qr.mass.begin(), qr.mass.end());
        CHECK(js_divergence(pr, qr) == doctest::Approx(js).epsilon(1e-12));
    }
}

TEST_CASE("shared histograms bin on the pooled range") {
    const std::vector<double> r1 = {0.0, 0.5, 1.0};
    const std::vector<double> r2 = {2.0, 2.5, 3.0};
    const auto [p, q] = shared_histograms(r1, r2, 4);
    REQUIRE(p.edges.size() == 5);
    CHECK(p.edges == q.edges);
    CHECK(p.edges.front() == 0.0);
    CHECK(p.edges.back() == 3.0);
    // Disjoint samples occupy disjoint bins; mass sums to 1 on each side.
    double pm = 0.0, qm = 0.0;
    for (std::size_t b = 0; b < 4; ++b) {
        pm += p.mass[b];
        qm += q.mass[b];
        CHECK(!(p.mass[b] > 0.0 && q.mass[b] > 0.0));
    }
    CHECK(pm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(js_divergence(p, q) == doctest::Approx(kLn2).epsilon(1e-12));

    // The top edge is closed: a sample exactly at max lands in the last bin.
    const auto [s, t] = shared_histograms(std::vector<double>{0.0, 4.0},
                                          std::vector<double>{1.0}, 4);
    CHECK(s.mass[3] == doctest::Approx(0.5));
    CHECK(t.mass[1] == doctest::Approx(1.0));

    const auto [u, v] = shared_histograms(r1, r1, 4);
    CHECK(u.mass == v.mass);

    CHECK_THROWS_AS(shared_histograms(r1, r2, 1), ConfigError);
    CHECK_THROWS_AS(shared_histograms(std::vector<double>{}, r2, 4), ValidationError);
    CHECK_THROWS_AS(shared_histograms(std::vector<double>{1.0, 1.0},
                                      std::vector<double>{1.0}, 4),
                    DegenerateError);
}

TEST_CASE("same-distribution samples have near-zero divergence") {
    const auto a = draw(1, 100000);
    const auto b = draw(2, 100000);
    const auto [p, q] = shared_histograms(a, b, 1000);
    CHECK(js_divergence(p, q) < 0.01);
}

TEST_CASE("similarity distance is a metric on discretized distributions") {
    CHECK(similarity_distance(draw(3, 500), draw(3, 500), 100) == 0.0);

    const std::vector<double> lo = {0.1, 0.2, 0.3};
    const std::vector<double> hi = {2.1, 2.2, 2.3};
    CHECK(similarity_distance(lo, hi, 4) == doctest::Approx(std::sqrt(kLn2)).epsilon(1e-12));

    CounterRng rng(60);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> a, b, c;
        for (int i = 0; i < 40; ++i) {
            a.push_back(rng.next_gaussian());
            b.push_back(rng.next_gaussian() * (1.0 + rng.next_unit()));
            c.push_back(rng.next_unit() * 3.0 - 1.0);
        }
        // Pairwise distances need a common grid for the metric property, so
        // bin all three on the pooled range via the matrix path.
        const auto m = distance_matrix({"A", "B", "C"}, {a, b, c}, 16, BinningMode::global);
        const double dab = m.at(0, 1), dbc = m.at(1, 2), dac = m.at(0, 2);
        CHECK(dac <= dab + dbc + 1e-12);
        CHECK(dab <= dac + dbc + 1e-12);
        CHECK(dbc <= dab + dac + 1e-12);
    }
}

TEST_CASE("distance matrix drops degenerate series and keeps symmetry") {
    const auto a = draw(5, 2000);
    const auto b = draw(6, 2000, 0.5);
    const std::vector<double> flat(100, 1.0);

    const auto m = distance_matrix({"AAA", "FLT", "BBB", "DUP"}, {a, flat, b, a}, 64);
    REQUIRE(m.size() == 3);
    CHECK(m.codes == std::vector<std::string>{"AAA", "BBB", "DUP"});
    REQUIRE(m.excluded.size() == 1);
    CHECK(m.excluded[0].find("FLT") != std::string::npos);
    CHECK(m.excluded[0].find("constant") != std::string::npos);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(m.at(i, i) == 0.0);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(m.at(i, j) == m.at(j, i));
            CHECK(m.at(i, j) <= std::sqrt(kLn2) + 1e-12);
        }
    }
    CHECK(m.at(0, 2) == 0.0);   // duplicated sample
    CHECK(m.at(0, 1) > 0.05);   // shifted distribution is genuinely apart

    CHECK_THROWS_AS(distance_matrix({"A", "F"}, {a, flat}, 64), ValidationError);
    CHECK_THROWS_AS(distance_matrix({"A"}, {a}, 64), ValidationError);
    CHECK_THROWS_AS(distance_matrix({"A", "B"}, {a}, 64), ValidationError);
    CHECK_THROWS_AS(distance_matrix({"A", "B"}, {a, b}, 1), ConfigError);
}

TEST_CASE("distance matrix is stable under currency reordering") {
    const std::vector<std::vector<double>> samples = {draw(7, 800), draw(8, 800, 0.3),
                                                      draw(9, 800, 0.0, 2.0)};
    const auto m = distance_matrix({"A", "B", "C"}, samples, 32);
    const auto r = distance_matrix({"C", "A", "B"}, {samples[2], samples[0], samples[1]}, 32);
    // Permutation sigma maps new index -> old index.
    const std::size_t sigma[3] = {2, 0, 1};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(r.at(i, j) == m.at(sigma[i], sigma[j]));
}

TEST_CASE("heavier-tailed classes sit farther apart than class siblings") {
    std::vector<std::string> codes;
    std::vector<std::vector<double>> samples;
    int id = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        CounterRng g(seed), t3(seed + 10), t15(seed + 20);
        std::vector<double> sg, s3, s15;
        for (int i = 0; i < 20000; ++i) {
            sg.push_back(g.next_gaussian());
            s3.push_back(t3.next_student_t(3.0));
            s15.push_back(t15.next_student_t(1.5));
        }
        codes.push_back("G" + std::to_string(id));
        samples.push_back(std::move(sg));
        codes.push_back("T" + std::to_string(id));
        samples.push_back(std::move(s3));
        codes.push_back("H" + std::to_string(id));
        samples.push_back(std::move(s15));
        ++id;
    }
    const auto m = distance_matrix(codes, samples, 1000);
    double within = 0.0, between = 0.0;
    std::size_t nw = 0, nb = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (m.codes[i][0] == m.codes[j][0]) {
                within += m.at(i, j);
                ++nw;
            } else {
                between += m.at(i, j);
                ++nb;
            }
        }
    CHECK(within / static_cast<double>(nw) < between / static_cast<double>(nb));
}
