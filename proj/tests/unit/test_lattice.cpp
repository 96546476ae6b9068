#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "torus/error.hpp"
#include "torus/lattice.hpp"

using namespace torus;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute force over a box of dual coordinates; independent of the reduction.
struct BruteShortest {
    double rho;
    std::vector<std::pair<int, int>> vectors;
};

BruteShortest brute_shortest(const LatticeBasis& b, int box) {
    const DualBasis d = dual_basis(b);
    double best = INFINITY;
    for (int m = -box; m <= box; ++m) {
        for (int n = -box; n <= box; ++n) {
            if (m == 0 && n == 0) continue;
            best = std::min(best, norm(d.vector(m, n)));
        }
    }
    BruteShortest out{best, {}};
    for (int m = -box; m <= box; ++m) {
        for (int n = -box; n <= box; ++n) {
            if ((m != 0 || n != 0) && norm(d.vector(m, n)) <= best * (1 + 1e-9)) out.vectors.push_back({m, n});
        }
    }
    return out;
}

LatticeBasis random_basis(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> len(0.5, 5.0), ang(0.0, 2 * kPi), gap(0.4, kPi - 0.4);
    const double a = ang(rng), b = a + gap(rng), r1 = len(rng), r2 = len(rng);
    return LatticeBasis({r1 * std::cos(a), r1 * std::sin(a)}, {r2 * std::cos(b), r2 * std::sin(b)});
}

}  // namespace

TEST_CASE("presets give the golden eigenvalues") {
    const EigenspaceInfo hex = classify_eigenspace(lattice_preset("hexagonal"));
    CHECK(hex.dim == 6);
    CHECK(hex.lambda1 == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(hex.rho == doctest::Approx(1.0 / (std::sqrt(3.0) * kPi)).epsilon(1e-12));

    const EigenspaceInfo sq = classify_eigenspace(lattice_preset("square"));
    CHECK(sq.dim == 4);
    CHECK(sq.lambda1 == doctest::Approx(1.0).epsilon(1e-12));

    const EigenspaceInfo narrow = classify_eigenspace(lattice_preset("rectangular:3.14159"));
    CHECK(narrow.dim == 2);
    CHECK(narrow.lambda1 == doctest::Approx(1.0).epsilon(1e-12));

    // Taller than 2 pi: the short dual vector is now (0, 1/h).
    const EigenspaceInfo tall = classify_eigenspace(lattice_preset("rectangular:8"));
    CHECK(tall.dim == 2);
    CHECK(tall.lambda1 == doctest::Approx(4 * kPi * kPi / 64).epsilon(1e-12));
}

TEST_CASE("hexagonal representatives are xi*, eta*, xi* + eta*") {
    const EigenspaceInfo hex = classify_eigenspace(lattice_preset("hexagonal"));
    REQUIRE(hex.k.size() == 3);
    CHECK((hex.k[0].m == 1 && hex.k[0].n == 0));
    CHECK((hex.k[1].m == 0 && hex.k[1].n == 1));
    CHECK((hex.k[2].m == 1 && hex.k[2].n == 1));
    CHECK(hex.k[0].k.x == doctest::Approx(1 / (2 * kPi)));
    CHECK(hex.k[0].k.y == doctest::Approx(-1 / (2 * kPi * std::sqrt(3.0))));
    CHECK(hex.k[1].k.y == doctest::Approx(2 / (2 * kPi * std::sqrt(3.0))));
}

TEST_CASE("six shortest vectors always carry a k3 = k1 + k2 triple") {
    // Rotated and sheared hexagonal lattices.
    for (double rot : {0.0, 0.3, 1.1, 2.9}) {
        const double s = 3.7;
        const Vec2 u{s * std::cos(rot), s * std::sin(rot)};
        const Vec2 v{s * std::cos(rot + kPi / 3), s * std::sin(rot + kPi / 3)};
        for (const LatticeBasis& b : {LatticeBasis(u, v), LatticeBasis(u, v + u), LatticeBasis(v, u - v)}) {
            const EigenspaceInfo info = classify_eigenspace(b);
            REQUIRE(info.dim == 6);
            const Vec2 sum = info.k[0].k + info.k[1].k;
            CHECK(norm(sum - info.k[2].k) < 1e-12);
        }
    }
}

TEST_CASE("shortest vectors match brute-force enumeration") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 300; ++i) {
        const LatticeBasis b = random_basis(rng);
        const ShortestVectorSet s = shortest_vectors(b);
        const BruteShortest oracle = brute_shortest(b, 25);
        CHECK(s.rho == doctest::Approx(oracle.rho).epsilon(1e-12));
        REQUIRE(s.vectors.size() == oracle.vectors.size());
        for (const DualVector& v : s.vectors) {
            CHECK(std::find(oracle.vectors.begin(), oracle.vectors.end(), std::make_pair(v.m, v.n)) !=
                  oracle.vectors.end());
            CHECK(norm(v.k - dual_basis(b).vector(v.m, v.n)) < 1e-15);
        }
        CHECK(s.representatives.size() * 2 == s.vectors.size());
        for (const DualVector& r : s.representatives) CHECK(has_canonical_sign(r.k, 1e-9 * s.rho));
    }
}

TEST_CASE("dual basis identities hold on random bases") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const LatticeBasis b = random_basis(rng);
        const DualBasis d = dual_basis(b);
        CHECK(std::abs(dot(d.xi_star, b.xi()) - 1) < 1e-12);
        CHECK(std::abs(dot(d.eta_star, b.eta()) - 1) < 1e-12);
        CHECK(std::abs(dot(d.xi_star, b.eta())) < 1e-12);
        CHECK(std::abs(dot(d.eta_star, b.xi())) < 1e-12);
        const DualGram g = gram_dual(b);
        CHECK(g.q(2, -3) == doctest::Approx(dot(d.vector(2, -3), d.vector(2, -3))));
    }
}

TEST_CASE("degenerate and malformed inputs are rejected") {
    CHECK_THROWS_AS(LatticeBasis({1, 2}, {2, 4}), Error);
    CHECK_THROWS_AS(LatticeBasis({0, 0}, {0, 0}), Error);
    try {
        LatticeBasis({1, 0}, {1e-14, 0});
        FAIL("expected DegenerateBasis");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateBasis);
    }
    for (const char* bad : {"triangle", "rectangular:", "rectangular:-1", "rectangular:abc", "rectangular:2x"}) {
        try {
            lattice_preset(bad);
            FAIL("expected ConfigError for " << bad);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ConfigError);
        }
    }
}

TEST_CASE("reduction modulo the lattice and torus distance") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-20, 20);
    const LatticeBasis b = lattice_preset("hexagonal");
    for (int i = 0; i < 200; ++i) {
        const Vec2 p{u(rng), u(rng)};
        const Vec2 y = reduce_mod_lattice(b, p);
        CHECK(y.x >= -0.5);
        CHECK(y.x < 0.5);
        CHECK(y.y >= -0.5);
        CHECK(y.y < 0.5);
        // p - point(y) is a lattice vector.
        const DualBasis d = dual_basis(b);
        const Vec2 diff = p - b.point(y.x, y.y);
        CHECK(std::abs(dot(d.xi_star, diff) - std::round(dot(d.xi_star, diff))) < 1e-9);
        CHECK(std::abs(dot(d.eta_star, diff) - std::round(dot(d.eta_star, diff))) < 1e-9);

        const Vec2 q{u(rng), u(rng)};
        double brute = INFINITY;
        for (int a = -12; a <= 12; ++a) {
            for (int c = -12; c <= 12; ++c) brute = std::min(brute, norm(p - q - b.point(a, c)));
        }
        CHECK(torus_distance(b, p, q) == doctest::Approx(brute).epsilon(1e-12));
    }
}
