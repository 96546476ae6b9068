#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "torus/equimeasurable.hpp"
#include "torus/error.hpp"
#include "torus/spectral.hpp"

using namespace torus;

namespace {

constexpr double kPi = std::numbers::pi;

const EigenspaceInfo& hex_info() {
    static const EigenspaceInfo info = classify_eigenspace(lattice_preset("hexagonal"));
    return info;
}

EigenstateCoeffs hex(double a1, double a2, double a3, double alpha3) {
    return EigenstateCoeffs::make(hex_info(), {a1, a2, a3}, {0, 0, alpha3});
}

// Real roots by sign changes on a fine partition and bisection.
std::vector<double> bisection_roots(const std::array<double, 4>& a, double lo, double hi) {
    std::vector<double> roots;
    constexpr int kCells = 20000;
    auto f = [&](double x) { return evaluate_cubic(a, x); };
    for (int i = 0; i < kCells; ++i) {
        double l = lo + (hi - lo) * i / kCells, r = lo + (hi - lo) * (i + 1) / kCells;
        if (f(l) == 0.0) {
            roots.push_back(l);
            continue;
        }
        if ((f(l) < 0) == (f(r) < 0)) continue;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (l + r);
            ((f(m) < 0) == (f(l) < 0) ? l : r) = m;
        }
        roots.push_back(0.5 * (l + r));
    }
    return roots;
}

bool contains(const std::vector<CandidateTriple>& v, CandidateTriple t, double tol) {
    return std::any_of(v.begin(), v.end(), [&](const CandidateTriple& u) {
        return std::abs(u.x - t.x) <= tol && std::abs(u.y - t.y) <= tol && std::abs(u.z - t.z) <= tol;
    });
}

}  // namespace

TEST_CASE("moment brackets on simple states") {
    const auto single = hex(1, 0, 0, 0);
    CHECK(moment_bracket(single, 2) == 1);
    CHECK(moment_bracket(single, 3) == 0);
    CHECK(moment_bracket(single, 4) == 1);
    CHECK(moment_bracket(single, 6) == 1);
    const auto ones = hex(1, 1, 1, 0);
    CHECK(moment_bracket(ones, 2) == 3);
    CHECK(moment_bracket(ones, 3) == 1);
    CHECK(moment_bracket(ones, 4) == 15);
    CHECK(moment_bracket(ones, 6) == 102);
    CHECK_THROWS_AS(moment_bracket(ones, 5), Error);
    CHECK_THROWS_AS(moment_kappa(1), Error);
}

TEST_CASE("quadrature oracle values") {
    CHECK(moments_quadrature_oracle(hex(1, 1, 1, 0), 2) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(std::abs(moments_quadrature_oracle(hex(1, 1, 1, kPi / 2), 3)) < 1e-14);
    CHECK(std::abs(moments_quadrature_oracle(hex(0.3, 1.2, 0.7, 2.0), 1)) < 1e-14);
}

TEST_CASE("brackets times kappa reproduce the quadrature moments") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> a(0, 2), ph(0, 2 * kPi);
    for (int i = 0; i < 50; ++i) {
        const auto c = EigenstateCoeffs::make(hex_info(), {a(rng), a(rng), a(rng)}, {ph(rng), ph(rng), ph(rng)});
        for (int m : {2, 3, 4, 6}) {
            const double scale = std::pow(moment_bracket(c, 2), 0.5 * m);
            CHECK(std::abs(moments_quadrature_oracle(c, m) - moment_kappa(m) * moment_bracket(c, m)) <= 1e-12 * scale);
        }
    }
    // Lower dimensions are the same formulas with missing amplitudes set to zero.
    const EigenspaceInfo sq = classify_eigenspace(lattice_preset("square"));
    const auto s = EigenstateCoeffs::make(sq, {0.8, 1.3}, {0.2, 2.0});
    for (int m : {2, 4, 6}) {
        CHECK(moments_quadrature_oracle(s, m) == doctest::Approx(moment_kappa(m) * moment_bracket(s, m)).epsilon(1e-12));
    }
}

TEST_CASE("c3 bridge removes the cos^2 term") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> a(0, 2), ph(0, 2 * kPi);
    for (int i = 0; i < 100; ++i) {
        const auto c = hex(a(rng), a(rng), a(rng), ph(rng));
        const MomentData md = moment_data(c);
        const auto f = forward_moments({c.amplitude[0] * c.amplitude[0], c.amplitude[1] * c.amplitude[1],
                                        c.amplitude[2] * c.amplitude[2]});
        CHECK(md.c1 == doctest::Approx(f[0]).epsilon(1e-12));
        CHECK(md.c2 == doctest::Approx(f[1]).epsilon(1e-12));
        CHECK(std::abs(md.c3 - f[2]) <= 1e-9 * std::max(1.0, f[2]));
    }
}

TEST_CASE("cubic reduction vanishes at every squared amplitude") {
    const auto c = forward_moments({1, 2, 3});
    CHECK(c[0] == 6);
    CHECK(c[1] == 58);
    CHECK(c[2] == 630);
    const auto cubic = reduce_to_cubic(c[0], c[1], c[2]);
    for (double x : {1.0, 2.0, 3.0}) CHECK(std::abs(evaluate_cubic(cubic, x)) < 1e-9);

    const double t = 0.7;
    const auto cs = forward_moments({t, t, t});
    CHECK(std::abs(evaluate_cubic(reduce_to_cubic(cs[0], cs[1], cs[2]), t)) < 1e-12);

    const auto zero = solve_cubic(reduce_to_cubic(0, 0, 0));
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].value == 0);
    CHECK(zero[0].multiplicity == 3);
}

TEST_CASE("cubic solver") {
    // 3 (x - 1)(x - 2)(x - 3)
    const auto r = solve_cubic({3, -18, 33, -18});
    REQUIRE(r.size() == 3);
    CHECK(r[0].value == doctest::Approx(1).epsilon(1e-14));
    CHECK(r[1].value == doctest::Approx(2).epsilon(1e-14));
    CHECK(r[2].value == doctest::Approx(3).epsilon(1e-14));

    const auto single = solve_cubic({1, 0, 1, 1});
    REQUIRE(single.size() == 1);
    const auto oracle = bisection_roots({1, 0, 1, 1}, -3, 3);
    REQUIRE(oracle.size() == 1);
    CHECK(single[0].value == doctest::Approx(oracle[0]).epsilon(1e-12));
    CHECK(single[0].value == doctest::Approx(-0.6823278038).epsilon(1e-9));
    CHECK(std::abs(evaluate_cubic({1, 0, 1, 1}, single[0].value)) < 1e-9);

    // (x - 1)^2 (x + 2)
    const auto dbl = solve_cubic({1, 0, -3, 2});
    REQUIRE(dbl.size() == 2);
    CHECK(dbl[0].value == doctest::Approx(-2));
    CHECK(dbl[1].value == doctest::Approx(1));
    CHECK(dbl[1].multiplicity == 2);

    CHECK_THROWS_AS(solve_cubic({0, 1, 1, 1}), Error);
}

TEST_CASE("cubic solver agrees with bisection on random cubics") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 200; ++i) {
        const double x1 = u(rng), x2 = u(rng), x3 = u(rng);
        const double lead = 0.5 + std::abs(u(rng));
        // lead (x - x1)(x - x2)(x - x3)
        const std::array<double, 4> a{lead, -lead * (x1 + x2 + x3), lead * (x1 * x2 + x1 * x3 + x2 * x3),
                                      -lead * x1 * x2 * x3};
        const auto roots = solve_cubic(a);
        const double coeff_scale = std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2]), std::abs(a[3])});
        int total = 0;
        for (const CubicRoot& r : roots) {
            CHECK(std::abs(evaluate_cubic(a, r.value)) <= 1e-9 * coeff_scale);
            total += r.multiplicity;
        }
        CHECK(total == 3);
        for (double x : bisection_roots(a, -4, 4)) {
            const bool found = std::any_of(roots.begin(), roots.end(),
                                           [&](const CubicRoot& r) { return std::abs(r.value - x) < 1e-6; });
            CHECK(found);
        }
    }
}

TEST_CASE("back substitution") {
    const auto c = forward_moments({1, 2, 3});
    const auto pairs = back_substitute(1, c[0], c[1]);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == doctest::Approx(2));
    CHECK(pairs[0].second == doctest::Approx(3));

    const double t = 0.4;
    const auto ct = forward_moments({t, t, t});
    const auto sym = back_substitute(t, ct[0], ct[1]);
    REQUIRE(sym.size() == 1);
    CHECK(sym[0].first == doctest::Approx(t));
    CHECK(sym[0].second == doctest::Approx(t));

    // s^2 < 4q: y + z = 1, yz = 1.
    CHECK(back_substitute(0, 1, 3).empty());
}

TEST_CASE("candidate enumeration") {
    const auto ones = enumerate_candidates(moment_data(hex(1, 1, 1, 0)));
    CHECK(contains(ones, {1, 1, 1}, 1e-9));
    CHECK(ones.size() <= 6);

    const auto two = enumerate_candidates(moment_data(hex(2, 1, 0, 0)));
    CHECK(contains(two, {4, 1, 0}, 1e-9));
    CHECK(two.size() <= 6);

    const auto zero = enumerate_candidates({0, 0, 0, 0});
    REQUIRE(zero.size() == 1);
    CHECK(contains(zero, {0, 0, 0}, 0));

    const auto c = forward_moments({1, 2, 3});
    const auto perms = enumerate_candidates({c[0], c[1], c[2], 0});
    CHECK(perms.size() == 6);
    for (std::size_t i = 1; i < perms.size(); ++i) CHECK(perms[i - 1].x <= perms[i].x);
}

TEST_CASE("orbit census") {
    const EigenspaceInfo rect = classify_eigenspace(lattice_preset("rectangular:3.14159"));
    const auto c2 = orbit_census(EigenstateCoeffs::make(rect, {0.7}, {1.0}));
    CHECK(c2.count == 1);
    CHECK(c2.reference_index == 0);

    const EigenspaceInfo sq = classify_eigenspace(lattice_preset("square"));
    const auto c4 = orbit_census(EigenstateCoeffs::make(sq, {0.7, 1.1}, {1.0, 2.0}));
    CHECK(c4.count == 2);
    const auto c4eq = orbit_census(EigenstateCoeffs::make(sq, {0.9, 0.9}, {1.0, 2.0}));
    CHECK(c4eq.count == 1);

    const auto ref = hex(1, 1, 1, 0);
    const auto c6 = orbit_census(ref);
    CHECK(c6.count <= 12);
    REQUIRE(c6.reference_index >= 0);
    CHECK(same_orbit(c6.representatives[c6.reference_index], ref, kCensusTolerance));

    const auto single = orbit_census(hex(1, 0, 0, 0));
    CHECK(single.count == 3);
    for (int i = 0; i < single.count; ++i) {
        for (int j = i + 1; j < single.count; ++j) {
            CHECK_FALSE(same_orbit(single.representatives[i], single.representatives[j], kCensusTolerance));
        }
    }

    const auto generic = orbit_census(EigenstateCoeffs::make(hex_info(), {1.0, 0.7, 0.3}, {0.2, 1.1, 2.5}));
    CHECK(generic.count == 12);
    CHECK(generic.reference_index >= 0);
}

TEST_CASE("square census agrees with the sup-norm route") {
    // On the square torus max|w| = A1 + A2, and A1^2 + A2^2 fixes the unordered pair.
    const EigenspaceInfo sq = classify_eigenspace(lattice_preset("square"));
    const Grid g(sq.basis, 64, 64);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> a(0.1, 2), ph(0, 2 * kPi);
    for (int i = 0; i < 20; ++i) {
        const auto ref = EigenstateCoeffs::make(sq, {a(rng), a(rng)}, {ph(rng), ph(rng)});
        const RealField w = synthesize_eigenstate(ref, g);
        double sup = 0.0;
        for (double v : w.samples) sup = std::max(sup, std::abs(v));
        const double l2 = moment_bracket(ref, 2);
        const OrbitCensus census = orbit_census(ref);
        for (const EigenstateCoeffs& r : census.representatives) {
            const double s = r.amplitude[0] + r.amplitude[1];
            CHECK(s == doctest::Approx(ref.amplitude[0] + ref.amplitude[1]).epsilon(1e-10));
            CHECK(std::abs(s - sup) <= 0.01 * s);
            CHECK(r.amplitude[0] * r.amplitude[0] + r.amplitude[1] * r.amplitude[1] ==
                  doctest::Approx(l2).epsilon(1e-12));
        }
    }
}
