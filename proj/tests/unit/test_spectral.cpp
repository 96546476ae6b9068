#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "torus/error.hpp"
#include "torus/spectral.hpp"

using namespace torus;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

RealField plane_wave(const Grid& g, Vec2 k, double phase) {
    RealField f(g);
    for (int j1 = 0; j1 < g.n1(); ++j1) {
        for (int j2 = 0; j2 < g.n2(); ++j2) f.at(j1, j2) = std::cos(kTwoPi * dot(k, g.point(j1, j2)) + phase);
    }
    return f;
}

RealField noise(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0, 1);
    RealField f(g);
    for (double& v : f.samples) v = n(rng);
    return remove_mean(std::move(f));
}

}  // namespace

TEST_CASE("grid sizes are validated") {
    const LatticeBasis b = lattice_preset("square");
    CHECK_THROWS_AS(Grid(b, 8, 32), Error);
    CHECK_THROWS_AS(Grid(b, 32, 33), Error);
    CHECK_NOTHROW(Grid(b, 16, 48));
    CHECK_THROWS_AS(RealField(Grid(b, 16, 16), std::vector<double>(10)), Error);
}

TEST_CASE("analysis and synthesis are inverse") {
    const Grid g(lattice_preset("hexagonal"), 32, 48);
    const RealField f = noise(g, 3);
    const RealField back = synthesize(analyze(f));
    double err = 0;
    for (std::size_t i = 0; i < f.samples.size(); ++i) err = std::max(err, std::abs(back.samples[i] - f.samples[i]));
    CHECK(err < 1e-13);
}

TEST_CASE("a plane wave has coefficient e^{i phase}/2 at +k") {
    const LatticeBasis b = lattice_preset("hexagonal");
    const Grid g(b, 32, 32);
    const DualBasis d = dual_basis(b);
    const SpectralField F = analyze(plane_wave(g, d.vector(2, -3), 0.7));
    CHECK(std::abs(F.coeff(2, -3) - 0.5 * std::polar(1.0, 0.7)) < 1e-14);
    CHECK(std::abs(F.coeff(-2, 3) - 0.5 * std::polar(1.0, -0.7)) < 1e-14);
    CHECK(std::abs(F.coeff(1, 1)) < 1e-14);

    SpectralField G(g);
    G.set_coeff(2, -3, 0.5 * std::polar(1.0, 0.7));
    const RealField s = synthesize(G);
    const RealField want = plane_wave(g, d.vector(2, -3), 0.7);
    for (std::size_t i = 0; i < s.samples.size(); ++i) CHECK(s.samples[i] == doctest::Approx(want.samples[i]));
}

TEST_CASE("velocity of a plane wave matches the analytic formula") {
    const LatticeBasis b = LatticeBasis({5.0, 0.4}, {1.3, 4.1});
    const Grid g(b, 32, 32);
    const Vec2 k = dual_basis(b).vector(1, 2);
    const double phase = 0.25;
    const auto [v1, v2] = velocity_from_vorticity(analyze(plane_wave(g, k, phase)));
    // psi = cos(theta) / (4 pi^2 |k|^2), v = (d2 psi, -d1 psi).
    const double c = 1.0 / (kTwoPi * dot(k, k));
    double err = 0;
    for (int j1 = 0; j1 < g.n1(); ++j1) {
        for (int j2 = 0; j2 < g.n2(); ++j2) {
            const double s = std::sin(kTwoPi * dot(k, g.point(j1, j2)) + phase);
            err = std::max(err, std::abs(v1.at(j1, j2) - (-c * k.y * s)));
            err = std::max(err, std::abs(v2.at(j1, j2) - (c * k.x * s)));
        }
    }
    CHECK(err < 1e-14);
}

TEST_CASE("Green operator inverts minus the Laplacian") {
    const Grid g(lattice_preset("square"), 32, 32);
    SpectralField F = analyze(noise(g, 8));
    for_each_mode(g, [&](std::size_t idx, int i1, int j, int, int) {
        if (g.is_nyquist(i1, j)) F.coeffs[idx] = 0;
    });
    const SpectralField back = laplacian(green_apply(F));
    for (std::size_t i = 1; i < F.coeffs.size(); ++i) CHECK(std::abs(back.coeffs[i] + F.coeffs[i]) < 1e-13);
    SpectralField with_mean = F;
    with_mean.coeffs[0] = 0.1;
    CHECK_THROWS_AS(green_apply(with_mean), Error);
}

TEST_CASE("quadratic functionals agree with grid quadrature") {
    const Grid g(LatticeBasis({6.0, 0.0}, {2.0, 5.0}), 48, 32);
    const RealField w = noise(g, 5);
    const SpectralField F = analyze(w);
    CHECK(enstrophy(F) == doctest::Approx(enstrophy(w)).epsilon(1e-12));
    const RealField psi = synthesize(green_apply(F));
    CHECK(energy(F) == doctest::Approx(0.5 * inner_product(w, psi)).epsilon(1e-12));
    CHECK(casimir(w, 2) == doctest::Approx(enstrophy(w)).epsilon(1e-12));
    CHECK(std::abs(casimir(w, 1)) < 1e-12);
    CHECK(lp_norm(w, 2) == doctest::Approx(std::sqrt(enstrophy(w))).epsilon(1e-12));
    CHECK_THROWS_AS(lp_norm(w, 0.5), Error);
    CHECK_THROWS_AS(casimir(w, 0), Error);
    // Dirichlet integral of psi equals int omega psi.
    SpectralField G = green_apply(F);
    for_each_mode(g, [&](std::size_t idx, int i1, int j, int, int) {
        if (g.is_nyquist(i1, j)) G.coeffs[idx] = 0;
    });
    SpectralField Fs = laplacian(G);
    for (auto& c : Fs.coeffs) c = -c;
    CHECK(dirichlet_integral(G) == doctest::Approx(2 * energy(Fs)).epsilon(1e-12));
}

TEST_CASE("L^p norm of a plane wave") {
    const Grid g(lattice_preset("square"), 32, 32);
    const RealField f = plane_wave(g, dual_basis(g.basis()).vector(1, 0), 0.0);
    // int cos^2 = |T|/2, int |cos|^4 = 3|T|/8.
    const double area = g.basis().area();
    CHECK(lp_norm(f, 2) == doctest::Approx(std::sqrt(area / 2)));
    CHECK(lp_norm(f, 4) == doctest::Approx(std::pow(3 * area / 8, 0.25)));
}

TEST_CASE("energy-enstrophy gap is nonnegative and vanishes on E1") {
    for (const char* preset : {"hexagonal", "square", "rectangular:2"}) {
        const Grid g(lattice_preset(preset), 32, 32);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const SpectralField F = analyze(noise(g, seed));
            CHECK(energy_enstrophy_gap(F) >= -1e-12);
            CHECK(energy_enstrophy_gap(F) ==
                  doctest::Approx(enstrophy(F) / classify_eigenspace(g.basis()).lambda1 - 2 * energy(F)).epsilon(1e-10));
        }
        const EigenspaceInfo info = classify_eigenspace(g.basis());
        SpectralField e1(g);
        for (const DualVector& k : info.k) e1.set_coeff(k.m, k.n, Complex(0.3, -0.2));
        CHECK(std::abs(energy_enstrophy_gap(e1)) < 1e-12 * enstrophy(e1));
        CHECK(in_first_eigenspace(e1));
        CHECK(e1_mass_fraction(e1) < 1e-15);
        CHECK_FALSE(in_first_eigenspace(analyze(noise(g, 2))));
    }
}

TEST_CASE("mean-zero check") {
    const Grid g(lattice_preset("square"), 16, 16);
    SpectralField F(g);
    F.set_coeff(1, 0, 1.0);
    CHECK_NOTHROW(require_mean_zero(F));
    F.coeffs[0] = 1e-9;
    CHECK_THROWS_AS(require_mean_zero(F), Error);
    RealField r(g);
    for (double& v : r.samples) v = 2.0;
    CHECK(mean(remove_mean(r)) == doctest::Approx(0.0));
}

TEST_CASE("fields on different grids do not mix") {
    const Grid a(lattice_preset("square"), 16, 16);
    const Grid b(lattice_preset("square"), 32, 16);
    CHECK_THROWS_AS(inner_product(RealField(a), RealField(b)), Error);
}
