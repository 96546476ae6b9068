#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "torus/euler.hpp"
#include "torus/field_io.hpp"
#include "torus/workers.hpp"

using namespace torus;

namespace {

constexpr double kPi = std::numbers::pi;

Grid hex_grid(int n) { return Grid(lattice_preset("hexagonal"), n, n); }

double max_abs(const RealField& f) {
    double m = 0.0;
    for (double v : f.samples) m = std::max(m, std::abs(v));
    return m;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
    return m;
}

SpectralField two_mode(const Grid& g) {
    SpectralField w(g);
    w.set_coeff(1, 0, 0.5);
    w.set_coeff(0, 2, Complex(0.0, 0.25));
    return w;
}

}  // namespace

TEST_CASE("rhs vanishes on steady states") {
    const Grid g = hex_grid(32);
    CHECK(max_abs(synthesize(rhs(SpectralField(g)))) == 0.0);

    SpectralField wave(g);
    wave.set_coeff(2, 1, Complex(0.3, -0.4));
    CHECK(max_abs(synthesize(rhs(wave))) < 1e-12);

    const EigenspaceInfo info = classify_eigenspace(g.basis());
    const auto c = EigenstateCoeffs::make(info, {1.0, 0.6, 1.3}, {0.1, 2.0, -1.0});
    CHECK(max_abs(synthesize(rhs(eigenstate_spectrum(c, g)))) < 1e-12);
}

TEST_CASE("rhs rejects a nonzero mean") {
    SpectralField w(hex_grid(16));
    w.set_coeff(0, 0, 1.0);
    CHECK_THROWS_AS(rhs(w), Error);
}

TEST_CASE("rhs matches analytic advection of two cosines") {
    // omega = a cos(2 pi k1.x) + b cos(2 pi k2.x); with psi_i = omega_i / (4 pi^2 |k_i|^2)
    // the self-advection terms vanish and only the cross terms survive.
    for (const char* preset : {"hexagonal", "rectangular:2.5", "square"}) {
        const Grid g(lattice_preset(preset), 64, 64);
        const DualBasis dual = dual_basis(g.basis());
        const int m1 = 1, n1 = 0, m2 = 1, n2 = 2;
        const double a = 0.8, b = -0.35;
        SpectralField w(g);
        w.set_coeff(m1, n1, 0.5 * a);
        w.set_coeff(m2, n2, 0.5 * b);
        const RealField r = synthesize(rhs(w));

        const Vec2 k1 = dual.vector(m1, n1), k2 = dual.vector(m2, n2);
        const double q1 = dot(k1, k1), q2 = dot(k2, k2);
        double err = 0.0;
        for (int j1 = 0; j1 < g.n1(); ++j1) {
            for (int j2 = 0; j2 < g.n2(); ++j2) {
                const double y1 = static_cast<double>(j1) / g.n1(), y2 = static_cast<double>(j2) / g.n2();
                const double t1 = 2 * kPi * (m1 * y1 + n1 * y2), t2 = 2 * kPi * (m2 * y1 + n2 * y2);
                // grad psi and grad omega
                const Vec2 gpsi = (-a * std::sin(t1) / (2 * kPi * q1)) * k1 + (-b * std::sin(t2) / (2 * kPi * q2)) * k2;
                const Vec2 gw = (-2 * kPi * a * std::sin(t1)) * k1 + (-2 * kPi * b * std::sin(t2)) * k2;
                const Vec2 v{gpsi.y, -gpsi.x};
                const double expected = -(v.x * gw.x + v.y * gw.y);
                err = std::max(err, std::abs(r.at(j1, j2) - expected));
            }
        }
        INFO(preset);
        CHECK(err < 1e-10);
    }
}

TEST_CASE("time reversal returns to the initial state") {
    const Grid g = hex_grid(128);
    SpectralField w0 = two_mode(g);
    w0.set_coeff(1, 1, 0.3);
    SolverConfig cfg(g);
    cfg.dt = 1e-2;
    cfg.t_end = 2.0;
    cfg.diag_stride = 50;
    const RunResult fwd = run(cfg, w0);
    SolverConfig back = cfg;
    back.reverse = true;
    const RunResult bwd = run(back, fwd.final_state.omega);
    const double scale = max_abs(synthesize(w0));
    CHECK(max_abs(synthesize(fwd.final_state.omega)) > 0.0);
    CHECK(max_diff(fwd.final_state.omega, w0) > 1e-3);
    CHECK(max_abs(synthesize(bwd.final_state.omega)) > 0.0);
    RealField diff = synthesize(bwd.final_state.omega);
    const RealField ref = synthesize(w0);
    for (std::size_t i = 0; i < diff.samples.size(); ++i) diff.samples[i] -= ref.samples[i];
    CHECK(max_abs(diff) <= 1e-6 * scale);
}

TEST_CASE("blowup guard keeps partial diagnostics") {
    const Grid g = hex_grid(32);
    SpectralField w = random_perturbation(g, 3);
    for (Complex& c : w.coeffs) c *= 100.0;
    SolverConfig cfg(g);
    cfg.dt = 5.0;
    cfg.t_end = 500.0;
    cfg.diag_stride = 1;
    cfg.dealias = Dealias::None;
    bool thrown = false;
    try {
        run(cfg, w);
    } catch (const NumericalBlowupError& e) {
        thrown = true;
        CHECK(e.code() == ErrorCode::NumericalBlowup);
        CHECK_FALSE(e.partial().rows.empty());
        CHECK(e.partial().rows.front().t == 0.0);
        CHECK(e.partial().cfl_warning);
    }
    CHECK(thrown);
}

TEST_CASE("admissibility on a steady and a drifting series") {
    const Grid g = hex_grid(64);
    const EigenspaceInfo info = classify_eigenspace(g.basis());
    const auto c = EigenstateCoeffs::make(info, {1.0, 0.7, 0.4}, {0.0, 0.5, 1.0});
    SolverConfig cfg(g);
    cfg.t_end = 1.0;
    const RunResult r = run(cfg, eigenstate_spectrum(c, g), c);
    const AdmissibilityReport ok = admissibility_check(r.diagnostics, {}, g.basis().area());
    CHECK(ok.pass);
    CHECK(ok.energy_drift <= 1e-10);
    for (double d : ok.casimir_drift) CHECK(d <= 1e-10);
    for (const DiagnosticsRow& row : r.diagnostics.rows) CHECK(row.orbit_dist <= 1e-10);

    Diagnostics drifting = r.diagnostics;
    drifting.rows.back().energy *= 1.001;
    drifting.rows.back().casimir[1] *= 1.01;
    const AdmissibilityReport bad = admissibility_check(drifting, {}, g.basis().area());
    CHECK_FALSE(bad.pass);
    CHECK(bad.failures.size() >= 2);
}

TEST_CASE("conserved quantities on a generic flow") {
    const Grid g = hex_grid(128);
    SpectralField w = two_mode(g);
    w.set_coeff(1, 1, 0.3);
    SolverConfig cfg(g);
    cfg.t_end = 2.0;
    const RunResult r = run(cfg, w);
    const AdmissibilityReport rep = admissibility_check(r.diagnostics, {}, g.basis().area());
    CHECK(rep.pass);
    for (const DiagnosticsRow& row : r.diagnostics.rows) {
        CHECK(std::abs(row.meanv1) < 1e-12);
        CHECK(std::abs(row.meanv2) < 1e-12);
        CHECK(std::isnan(row.orbit_dist));
    }
}

TEST_CASE("diagnostics CSV") {
    const Grid g = hex_grid(32);
    SolverConfig cfg(g);
    cfg.t_end = 0.1;
    cfg.diag_stride = 5;
    const SpectralField w = two_mode(g);
    const RunResult a = run(cfg, w);
    const RunResult b = run(cfg, w);
    CHECK(a.diagnostics.rows.size() == 3);
    CHECK(a.diagnostics.rows.back().t == doctest::Approx(0.1));

    std::ostringstream sa, sb;
    write_diagnostics_csv(sa, a.diagnostics, {"lattice hexagonal", "seed 7"});
    write_diagnostics_csv(sb, b.diagnostics, {"lattice hexagonal", "seed 7"});
    CHECK(sa.str() == sb.str());

    std::istringstream in(sa.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# lattice hexagonal");
    std::getline(in, line);
    CHECK(line == "# seed 7");
    std::getline(in, line);
    CHECK(line == kDiagnosticsHeader);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 12);
    }
    CHECK(rows == 3);
}

TEST_CASE("solver configuration errors") {
    const Grid g = hex_grid(32);
    SolverConfig cfg(g);
    cfg.dt = 0.0;
    CHECK_THROWS_AS(EulerSolver{cfg}, Error);
    cfg.dt = 1e-2;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(EulerSolver{cfg}, Error);
    cfg.t_end = 1.0;
    cfg.diag_stride = 0;
    CHECK_THROWS_AS(EulerSolver{cfg}, Error);

    SolverConfig good(g);
    CHECK_THROWS_AS(run(good, SpectralField(hex_grid(16))), Error);
    SpectralField mean(g);
    mean.set_coeff(0, 0, 0.5);
    CHECK_THROWS_AS(run(good, mean), Error);
}

TEST_CASE("snapshots are written and read back") {
    const auto dir = std::filesystem::temp_directory_path() / "torus_snapshot_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const Grid g = hex_grid(32);
    SolverConfig cfg(g);
    cfg.t_end = 0.2;
    cfg.snapshot_times = {0.1, 0.0};
    cfg.snapshot_dir = dir;
    const RunResult r = run(cfg, two_mode(g));
    REQUIRE(r.snapshots.size() == 2);
    const RealField first = read_torf(r.snapshots[0]);
    CHECK(first.samples == synthesize(two_mode(g)).samples);
    const RealField second = read_torf(r.snapshots[1]);
    CHECK(second.grid == g);
    std::filesystem::remove_all(dir);
}

TEST_CASE("random perturbation") {
    const Grid g = hex_grid(64);
    const SpectralField a = random_perturbation(g, 11);
    const SpectralField b = random_perturbation(g, 11);
    const SpectralField c = random_perturbation(g, 12);
    CHECK(a.coeffs == b.coeffs);
    CHECK(max_diff(a, c) > 1e-3);
    CHECK(lp_norm(synthesize(a), 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lp_norm(synthesize(random_perturbation(g, 11, 4.0)), 4.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(a.coeff(0, 0)) == 0.0);
    const EigenspaceInfo info = classify_eigenspace(g.basis());
    const DualBasis dual = dual_basis(g.basis());
    for_each_mode(g, [&](std::size_t idx, int, int, int m, int n) {
        if (norm(dual.vector(m, n)) > 3.0 * info.rho * (1 + 1e-9)) CHECK(a.coeffs[idx] == Complex(0.0));
    });
}

TEST_CASE("unperturbed stability experiment stays on the orbit") {
    const Grid g = hex_grid(64);
    const EigenspaceInfo info = classify_eigenspace(g.basis());
    const auto ref = EigenstateCoeffs::make(info, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0});
    SolverConfig cfg(g);
    cfg.t_end = 1.0;
    const StabilityResult s = stability_experiment(g.basis(), ref, 0.0, 1, 2.0, cfg);
    CHECK(s.d0 <= 1e-12);
    CHECK(s.d_max <= 1e-6);
    CHECK(s.theta_max_dev <= 1e-10);

    const StabilityResult p = stability_experiment(g.basis(), ref, 1e-2, 1, 2.0, cfg);
    CHECK(p.d0 > 0.0);
    CHECK(p.d0 <= 1e-2 * (1 + 1e-9));
    CHECK_THROWS_AS(stability_experiment(lattice_preset("square"), ref, 0.0, 1, 2.0, cfg), Error);
    CHECK_THROWS_AS(stability_experiment(g.basis(), ref, -1.0, 1, 2.0, cfg), Error);
}

TEST_CASE("job pool covers every index and propagates failures") {
    std::vector<int> hits(37, 0);
    run_jobs(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(run_jobs(10, [](std::size_t i) { if (i == 3) throw std::runtime_error("x"); }, 3),
                    std::runtime_error);
    CHECK(worker_limit() >= 1);
}
