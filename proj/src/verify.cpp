#include "torus/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "torus/eigenstate.hpp"
#include "torus/equimeasurable.hpp"
#include "torus/euler.hpp"
#include "torus/lattice.hpp"
#include "torus/spectral.hpp"
#include "torus/workers.hpp"

namespace torus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string format(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

CriterionOutcome outcome(int id, const char* name, bool pass, std::string detail) {
    return {id, name, pass, std::move(detail), 0.0};
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

LatticeBasis random_basis(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> len(0.5, 10.0);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    std::uniform_real_distribution<double> gap(0.3, kPi - 0.3);
    const double a = ang(rng);
    const double b = a + gap(rng);
    const double r1 = len(rng);
    const double r2 = len(rng);
    return LatticeBasis({r1 * std::cos(a), r1 * std::sin(a)}, {r2 * std::cos(b), r2 * std::sin(b)});
}

EigenstateCoeffs random_coeffs(const EigenspaceInfo& info, std::mt19937_64& rng, double zero_probability,
                               double amp_lo, double amp_hi) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> amp(amp_lo, amp_hi);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::vector<double> a(info.pairs()), p(info.pairs());
    for (int i = 0; i < info.pairs(); ++i) {
        a[i] = unit(rng) < zero_probability ? 0.0 : amp(rng);
        p[i] = phase(rng);
    }
    return EigenstateCoeffs::make(info, std::move(a), std::move(p));
}

const EigenspaceInfo& hexagonal_info() {
    static const EigenspaceInfo info = classify_eigenspace(lattice_preset("hexagonal"));
    return info;
}

// Eigenspaces of dimension 2, 4 and 6 from the presets.
EigenspaceInfo info_for_dim(int dim) {
    if (dim == 2) return classify_eigenspace(lattice_preset("rectangular:3.14159"));
    if (dim == 4) return classify_eigenspace(lattice_preset("square"));
    return hexagonal_info();
}

double field_norm_diff(const SpectralField& a, const SpectralField& b) {
    double total = 0.0;
    for_each_mode(a.grid, [&](std::size_t idx, int, int j, int, int) {
        total += a.grid.column_weight(j) * std::norm(a.coeffs[idx] - b.coeffs[idx]);
    });
    return std::sqrt(total * a.grid.basis().area());
}

}  // namespace

CriterionOutcome check_golden_lattice(const VerifyOptions&) {
    constexpr double tol = 1e-10;
    double worst = 0.0;
    bool ok = true;
    auto expect = [&](double got, double want) {
        const double e = std::abs(got - want);
        worst = std::max(worst, e);
        if (!(e <= tol)) ok = false;
    };

    for (const char* preset : {"rectangular:3.14159", "rectangular:1", "rectangular:6"}) {
        const EigenspaceInfo info = classify_eigenspace(lattice_preset(preset));
        ok = ok && info.dim == 2;
        expect(info.lambda1, 1.0);
    }
    const EigenspaceInfo sq = classify_eigenspace(lattice_preset("square"));
    ok = ok && sq.dim == 4;
    expect(sq.lambda1, 1.0);

    const LatticeBasis hex = lattice_preset("hexagonal");
    const EigenspaceInfo hx = classify_eigenspace(hex);
    ok = ok && hx.dim == 6 && hx.k.size() == 3;
    expect(hx.lambda1, 4.0 / 3.0);
    expect(hx.rho, 1.0 / (std::sqrt(3.0) * kPi));
    const Vec2 xs{1.0 / kTwoPi, -1.0 / (std::sqrt(3.0) * kTwoPi)};
    const Vec2 es{0.0, 2.0 / (std::sqrt(3.0) * kTwoPi)};
    const DualBasis d = dual_basis(hex);
    expect(d.xi_star.x, xs.x);
    expect(d.xi_star.y, xs.y);
    expect(d.eta_star.x, es.x);
    expect(d.eta_star.y, es.y);
    if (hx.k.size() == 3) {
        const Vec2 want[3] = {xs, es, xs + es};
        for (int i = 0; i < 3; ++i) {
            expect(hx.k[i].k.x, want[i].x);
            expect(hx.k[i].k.y, want[i].y);
        }
    }
    const ShortestVectorSet s = shortest_vectors(hex);
    ok = ok && s.vectors.size() == 6;
    for (const DualVector& v : s.vectors) {
        const bool listed = (std::abs(v.m) == 1 && v.n == 0) || (v.m == 0 && std::abs(v.n) == 1) ||
                            (v.m == v.n && std::abs(v.m) == 1);
        ok = ok && listed;
    }
    return outcome(1, "golden lattice values", ok,
                   format("dims 2/4/6, lambda1 1/1/4/3, hexagonal S = {+-xi*, +-eta*, +-(xi*+eta*)}; max error %.2e (tol 1e-10)", worst));
}

CriterionOutcome check_dual_identities(const VerifyOptions&) {
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const LatticeBasis b = random_basis(rng);
        const DualBasis d = dual_basis(b);
        worst = std::max({worst, std::abs(dot(d.xi_star, b.xi()) - 1.0), std::abs(dot(d.xi_star, b.eta())),
                          std::abs(dot(d.eta_star, b.xi())), std::abs(dot(d.eta_star, b.eta()) - 1.0)});
    }
    return outcome(2, "dual-basis identities", worst <= 1e-12,
                   format("1000 random bases, max |xi*.xi - 1|, |xi*.eta|, ... = %.2e (tol 1e-12)", worst));
}

CriterionOutcome check_energy_enstrophy(const VerifyOptions&) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    double min_gap = std::numeric_limits<double>::infinity();
    double worst_oracle = 0.0;
    double worst_e1 = 0.0;
    int fields = 0;
    int e1_fields = 0;
    while (fields < 200) {
        const LatticeBasis basis = fields % 4 == 0   ? lattice_preset("hexagonal")
                                   : fields % 4 == 1 ? lattice_preset("square")
                                   : fields % 4 == 2 ? lattice_preset("rectangular:2.5")
                                                     : random_basis(rng);
        const Grid grid(basis, 64, 64);
        const EigenspaceInfo info = classify_eigenspace(basis);

        RealField w(grid);
        for (double& v : w.samples) v = normal(rng);
        w = remove_mean(std::move(w));
        const double scale = 1.0 / std::sqrt(enstrophy(w));
        for (double& v : w.samples) v *= scale;
        SpectralField F = analyze(w);
        F.coeffs[0] = 0.0;

        const double gap = energy_enstrophy_gap(F);
        // Oracle: both integrals by grid quadrature, psi = G omega sampled.
        const RealField psi = synthesize(green_apply(F));
        const RealField ws = synthesize(F);
        const double direct = enstrophy(ws) / info.lambda1 - inner_product(ws, psi);
        min_gap = std::min(min_gap, gap);
        worst_oracle = std::max(worst_oracle, std::abs(gap - direct) / (enstrophy(ws) / info.lambda1));
        ++fields;

        bool resolved = true;
        for (const DualVector& k : info.k) resolved = resolved && grid.resolves(k.m, k.n);
        if (resolved) {
            const EigenstateCoeffs c = random_coeffs(info, rng, 0.0, 0.1, 2.0);
            const SpectralField e1 = analyze(synthesize_eigenstate(c, grid));
            worst_e1 = std::max(worst_e1, energy_enstrophy_gap(e1) / enstrophy(e1));
            ++e1_fields;
        }
    }
    const bool pass = min_gap >= -1e-10 && worst_e1 <= 1e-10 && worst_oracle <= 1e-10;
    return outcome(3, "energy-enstrophy inequality", pass,
                   format("200 fields at 64^2: min gap %.2e (>= -1e-10), gap vs quadrature %.2e; %d E1 fields: max gap/enstrophy %.2e (<= 1e-10)",
                          min_gap, worst_oracle, e1_fields, worst_e1));
}

CriterionOutcome check_moment_certification(const VerifyOptions&) {
    std::mt19937_64 rng(11);
    const EigenspaceInfo& info = hexagonal_info();
    constexpr int kStates = 100;
    // Features per order, in the monomials of A and cos(alpha).
    Eigen::MatrixXd f2(kStates, 1), f3(kStates, 1), f4(kStates, 2), f6(kStates, 4);
    Eigen::VectorXd o2(kStates), o3(kStates), o4(kStates), o6(kStates);
    double worst_direct = 0.0;
    for (int s = 0; s < kStates; ++s) {
        const EigenstateCoeffs c = random_coeffs(info, rng, 0.0, 0.1, 2.0);
        const double x = c.amplitude[0] * c.amplitude[0];
        const double y = c.amplitude[1] * c.amplitude[1];
        const double z = c.amplitude[2] * c.amplitude[2];
        const double ca = std::cos(c.phase[2] - c.phase[0] - c.phase[1]);
        const double prod = std::sqrt(x * y * z);
        f2(s, 0) = x + y + z;
        f3(s, 0) = prod * ca;
        f4(s, 0) = x * x + y * y + z * z;
        f4(s, 1) = x * y + x * z + y * z;
        f6(s, 0) = x * x * x + y * y * y + z * z * z;
        f6(s, 1) = x * x * y + x * x * z + y * y * x + y * y * z + z * z * x + z * z * y;
        f6(s, 2) = x * y * z;
        f6(s, 3) = x * y * z * ca * ca;
        o2(s) = moments_quadrature_oracle(c, 2);
        o3(s) = moments_quadrature_oracle(c, 3);
        o4(s) = moments_quadrature_oracle(c, 4);
        o6(s) = moments_quadrature_oracle(c, 6);
        for (int m : {2, 3, 4, 6}) {
            const double scale = std::pow(x + y + z, 0.5 * m);
            worst_direct = std::max(worst_direct,
                                    std::abs(moments_quadrature_oracle(c, m) - moment_kappa(m) * moment_bracket(c, m)) / scale);
        }
    }
    auto fit = [](const Eigen::MatrixXd& a, const Eigen::VectorXd& b) -> Eigen::VectorXd {
        return a.colPivHouseholderQr().solve(b);
    };
    const Eigen::VectorXd c2 = fit(f2, o2), c3 = fit(f3, o3), c4 = fit(f4, o4), c6 = fit(f6, o6);
    const double e = std::max({rel_err(c2(0), 0.5), rel_err(c3(0), 1.5), rel_err(c4(0), 3.0 / 8.0),
                               rel_err(c4(1) / c4(0), 4.0), rel_err(c6(0), 5.0 / 16.0), rel_err(c6(1) / c6(0), 9.0),
                               rel_err(c6(2) / c6(0), 27.0), rel_err(c6(3) / c6(0), 18.0)});
    const bool pass = e <= 1e-9 && worst_direct <= 1e-9;
    return outcome(4, "moment-system certification", pass,
                   format("fitted cross terms x%.10g x%.10g x%.10g x%.10g, kappa %.6g/%.6g/%.6g/%.6g; max rel err %.2e, per-state residual %.2e (tol 1e-9)",
                          c4(1) / c4(0), c6(1) / c6(0), c6(2) / c6(0), c6(3) / c6(0), c2(0), c3(0), c4(0), c6(0), e,
                          worst_direct));
}

CriterionOutcome check_cubic_round_trip(const VerifyOptions&) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    int max_count = 0;
    double worst = 0.0;
    int misses = 0;
    auto recover = [&](const CandidateTriple& t) {
        const auto c = forward_moments(t);
        const auto cands = enumerate_candidates({c[0], c[1], c[2], 0.0});
        max_count = std::max(max_count, static_cast<int>(cands.size()));
        double best = std::numeric_limits<double>::infinity();
        for (const CandidateTriple& k : cands) {
            best = std::min(best, std::max({std::abs(k.x - t.x), std::abs(k.y - t.y), std::abs(k.z - t.z)}));
        }
        worst = std::max(worst, best);
        if (!(best <= 1e-6)) ++misses;
    };
    for (int i = 0; i < 500; ++i) recover({u(rng), u(rng), u(rng)});

    const auto spot = forward_moments({1.0, 2.0, 3.0});
    const bool spot_forward = spot[0] == 6.0 && spot[1] == 58.0 && spot[2] == 630.0;
    const int misses_before = misses;
    recover({1.0, 2.0, 3.0});
    const bool spot_back = misses == misses_before;
    const bool pass = misses == 0 && max_count <= 6 && spot_forward && spot_back;
    return outcome(5, "cubic reduction round-trip", pass,
                   format("500 triples: max candidates %d (<= 6), worst recovery %.2e (tol 1e-6); (1,2,3) -> (%g, %g, %g) %s",
                          max_count, worst, spot[0], spot[1], spot[2], spot_back ? "recovered" : "NOT recovered"));
}

CriterionOutcome check_census_bounds(const VerifyOptions&) {
    std::mt19937_64 rng(3);
    const int bounds[3] = {1, 2, 12};
    int max_count[3] = {0, 0, 0};
    int failures = 0;
    std::string first_failure;
    for (int d = 0; d < 3; ++d) {
        const EigenspaceInfo info = info_for_dim(2 * (d + 1));
        for (int i = 0; i < 200; ++i) {
            const EigenstateCoeffs ref = random_coeffs(info, rng, 0.0, 0.0, 2.0);
            try {
                const OrbitCensus c = orbit_census(ref);
                max_count[d] = std::max(max_count[d], c.count);
                if (c.count > bounds[d] || c.reference_index < 0) ++failures;
            } catch (const Error& e) {
                if (first_failure.empty()) first_failure = format_coeffs(ref) + ": " + e.what();
                ++failures;
            }
        }
    }
    std::string detail = format("200 references per dim: max counts %d/%d/%d (bounds 1/2/12), reference missing in %d",
                                max_count[0], max_count[1], max_count[2], failures);
    if (!first_failure.empty()) detail += "; first failure " + first_failure;
    return outcome(6, "orbit-census bounds", failures == 0, detail);
}

CriterionOutcome check_orbit_equivalence(const VerifyOptions&) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> log_delta(std::log(1e-4), std::log(1e-1));
    int disagreements = 0;
    int same = 0;
    int total = 0;
    for (int dim : {2, 4, 6}) {
        const EigenspaceInfo info = info_for_dim(dim);
        for (int i = 0; i < 500; ++i) {
            const EigenstateCoeffs a = random_coeffs(info, rng, 0.2, 0.1, 2.0);
            const Vec2 p = info.basis.point(unit(rng), unit(rng));
            EigenstateCoeffs b = translate_coeffs(a, p);
            if (unit(rng) < 0.5) {
                const int mode = static_cast<int>(unit(rng) * info.pairs()) % info.pairs();
                const double delta = std::copysign(std::exp(log_delta(rng)), unit(rng) - 0.5);
                std::vector<double> amp = b.amplitude, ph = b.phase;
                if (unit(rng) < 0.5) {
                    amp[mode] = std::abs(amp[mode] + delta);
                } else {
                    ph[mode] += delta;
                }
                b = EigenstateCoeffs::make(info, amp, ph);
            }
            const bool by_invariant = same_orbit(a, b);
            const bool by_solve = solve_translation(a, b, 1e-8).has_value();
            if (by_invariant != by_solve) ++disagreements;
            if (by_invariant) ++same;
            ++total;
        }
    }
    return outcome(7, "translation-orbit equivalence", disagreements == 0,
                   format("%d pairs over dims 2/4/6 (%d in one orbit): %d disagreements at tol 1e-8", total, same,
                          disagreements));
}

CriterionOutcome check_steadiness(const VerifyOptions& options) {
    const LatticeBasis hex = lattice_preset("hexagonal");
    const EigenspaceInfo& info = hexagonal_info();
    const Grid grid(hex, 128, 128);
    std::vector<EigenstateCoeffs> states{
        EigenstateCoeffs::make(info, {1, 1, 1}, {0, 0, 0}),
        EigenstateCoeffs::make(info, {1, 0, 0}, {0.3, 0, 0}),
        EigenstateCoeffs::make(info, {0, 0.8, 1.3}, {0, 2.0, 4.0}),
    };
    std::mt19937_64 rng(23);
    for (int i = 0; i < (options.quick ? 1 : 5); ++i) states.push_back(random_coeffs(info, rng, 0.0, 0.1, 2.0));

    SolverConfig cfg(grid);
    cfg.dt = 1e-2;
    cfg.t_end = options.quick ? 1.0 : 10.0;
    cfg.diag_stride = 10;
    double worst = 0.0;
    for (const EigenstateCoeffs& c : states) {
        const SpectralField w0 = eigenstate_spectrum(c, grid);
        const double size = std::sqrt(enstrophy(w0));
        for (const DiagnosticsRow& r : run(cfg, w0, c).diagnostics.rows) {
            worst = std::max(worst, r.orbit_dist / size);
        }
    }
    return outcome(8, "solver steadiness", worst <= 1e-6,
                   format("%zu E1 states on the hexagonal torus, 128^2, dt 1e-2, t_end %g: max relative orbit distance %.2e (tol 1e-6)",
                          states.size(), cfg.t_end, worst));
}

CriterionOutcome check_conservation(const VerifyOptions& options) {
    const Grid grid(lattice_preset("hexagonal"), 128, 128);
    SpectralField w(grid);
    // cos(2 pi xi*.x) - 0.5 sin(2 pi 2 eta*.x): two modes of different wavenumber.
    w.set_coeff(1, 0, 0.5);
    w.set_coeff(0, 2, Complex(0.0, 0.25));
    SolverConfig cfg(grid);
    cfg.dt = 1e-2;
    cfg.t_end = options.quick ? 1.0 : 5.0;
    cfg.diag_stride = 10;
    const Diagnostics d = run(cfg, w).diagnostics;
    const AdmissibilityReport rep = admissibility_check(d, {}, grid.basis().area());
    double meanv = 0.0;
    for (const DiagnosticsRow& r : d.rows) meanv = std::max({meanv, std::abs(r.meanv1), std::abs(r.meanv2)});
    const bool pass = rep.energy_drift <= 1e-8 && rep.casimir_drift[0] <= 1e-8 && meanv <= 1e-12;
    return outcome(9, "conservation", pass,
                   format("two-mode state, 128^2, dt 1e-2, t_end %g: energy drift %.2e, enstrophy drift %.2e (tol 1e-8), mean velocity %.2e (tol 1e-12)",
                          cfg.t_end, rep.energy_drift, rep.casimir_drift[0], meanv));
}

CriterionOutcome check_stability_witness(const VerifyOptions& options) {
    const LatticeBasis hex = lattice_preset("hexagonal");
    const EigenstateCoeffs ref = EigenstateCoeffs::make(hexagonal_info(), {1, 1, 1}, {0, 0, 0});
    const std::vector<double> eps{1e-3, 1e-2};
    const int seeds = options.quick ? 2 : 5;
    SolverConfig cfg(Grid(hex, 128, 128));
    cfg.dt = 1e-2;
    cfg.t_end = options.quick ? 2.0 : 20.0;
    cfg.diag_stride = 10;

    std::vector<StabilityResult> results(eps.size() * seeds);
    run_jobs(results.size(), [&](std::size_t i) {
        results[i] = stability_experiment(hex, ref, eps[i / seeds], i % seeds + 1, 2.0, cfg);
    });
    double worst_ratio = 0.0;
    double worst_theta = 0.0;
    for (const StabilityResult& r : results) {
        worst_ratio = std::max(worst_ratio, r.d_max / r.d0);
        worst_theta = std::max(worst_theta, r.theta_max_dev);
    }
    const bool pass = worst_ratio <= 10.0 && worst_theta <= 0.1;
    return outcome(10, "stability witness", pass,
                   format("eps {1e-3, 1e-2} x seeds 1..%d, t <= %g: max D(t)/D(0) %.4f (<= 10), max |theta(t) - theta(0)| %.2e rad (<= 0.1)",
                          seeds, cfg.t_end, worst_ratio, worst_theta));
}

CriterionOutcome check_rk4_order(const VerifyOptions&) {
    const Grid grid(lattice_preset("hexagonal"), 64, 64);
    SpectralField w(grid);
    w.set_coeff(1, 0, 0.5);
    w.set_coeff(0, 2, Complex(0.0, 0.25));
    w.set_coeff(1, 1, 0.3);
    constexpr double dt = 0.05;
    auto terminal = [&](double h) {
        SolverConfig cfg(grid);
        cfg.dt = h;
        cfg.t_end = 2.0;
        cfg.diag_stride = 1 << 30;
        return run(cfg, w).final_state.omega;
    };
    const SpectralField reference = terminal(dt / 16.0);
    const double e1 = field_norm_diff(terminal(dt), reference);
    const double e2 = field_norm_diff(terminal(dt / 2.0), reference);
    const double ratio = e1 / e2;
    return outcome(11, "RK4 order", ratio >= 12.0 && ratio <= 20.0,
                   format("64^2, t_end 2, dt %g vs %g against dt/16: errors %.3e / %.3e, ratio %.3f (in [12, 20])", dt,
                          dt / 2.0, e1, e2, ratio));
}

const std::vector<Criterion>& acceptance_criteria() {
    static const std::vector<Criterion> all{
        {1, "golden lattice values", check_golden_lattice},
        {2, "dual-basis identities", check_dual_identities},
        {3, "energy-enstrophy inequality", check_energy_enstrophy},
        {4, "moment-system certification", check_moment_certification},
        {5, "cubic reduction round-trip", check_cubic_round_trip},
        {6, "orbit-census bounds", check_census_bounds},
        {7, "translation-orbit equivalence", check_orbit_equivalence},
        {8, "solver steadiness", check_steadiness},
        {9, "conservation", check_conservation},
        {10, "stability witness", check_stability_witness},
        {11, "RK4 order", check_rk4_order},
    };
    return all;
}

std::string format_outcome(const CriterionOutcome& o) {
    return format("%s [%d] %s: %s (%.1f s)", o.pass ? "PASS" : "FAIL", o.id, o.name.c_str(), o.detail.c_str(),
                  o.seconds);
}

std::vector<CriterionOutcome> run_acceptance(const VerifyOptions& options, std::ostream& out) {
    std::vector<CriterionOutcome> results;
    for (const Criterion& c : acceptance_criteria()) {
        const auto start = std::chrono::steady_clock::now();
        CriterionOutcome o;
        try {
            o = c.check(options);
        } catch (const std::exception& e) {
            o = {c.id, c.name, false, std::string("exception: ") + e.what(), 0.0};
        }
        o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out << format_outcome(o) << std::endl;
        results.push_back(std::move(o));
    }
    return results;
}

}  // namespace torus
