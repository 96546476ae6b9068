#include "torus/euler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "torus/fft.hpp"
#include "torus/field_io.hpp"

namespace torus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
constexpr double kBlowupFactor = 1e6;

void validate(const SolverConfig& c) {
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw Error(ErrorCode::ConfigError, "dt must be positive");
    if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) {
        throw Error(ErrorCode::ConfigError, "t_end must be nonnegative");
    }
    if (c.diag_stride < 1) throw Error(ErrorCode::ConfigError, "diag_stride must be >= 1");
}

double min_cell_size(const Grid& g) {
    return std::min(norm(g.basis().xi()) / g.n1(), norm(g.basis().eta()) / g.n2());
}

bool all_finite(const SpectralField& f) {
    double total = 0.0;
    for (const Complex& c : f.coeffs) total += std::norm(c);
    return std::isfinite(total);
}

void axpy(SpectralField& out, const SpectralField& x, double a, const SpectralField& y) {
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = x.coeffs[i] + a * y.coeffs[i];
}

}  // namespace

EulerSolver::EulerSolver(SolverConfig config) : config_(std::move(config)) {
    validate(config_);
    const Grid& g = config_.grid;
    const DualBasis dual = dual_basis(g.basis());
    const DualGram gram = gram_dual(g.basis());
    kx_.assign(g.spectral_size(), 0.0);
    ky_.assign(g.spectral_size(), 0.0);
    inv_lap_.assign(g.spectral_size(), 0.0);
    mask_.assign(g.spectral_size(), 0.0);
    for_each_mode(g, [&](std::size_t idx, int i1, int j, int m, int n) {
        if (m == 0 && n == 0) return;
        inv_lap_[idx] = 1.0 / (kFourPiSq * gram.q(m, n));
        if (g.is_nyquist(i1, j)) return;
        const Vec2 k = dual.vector(m, n);
        kx_[idx] = kTwoPi * k.x;
        ky_[idx] = kTwoPi * k.y;
        const bool keep = config_.dealias == Dealias::None ||
                          (3 * std::abs(m) < g.n1() && 3 * std::abs(n) < g.n2());
        mask_[idx] = keep ? 1.0 : 0.0;
    });
}

SpectralField EulerSolver::rhs(const SpectralField& omega) const {
    const Grid& g = config_.grid;
    if (!(omega.grid == g)) throw Error(ErrorCode::ShapeMismatch, "field does not match solver grid");
    require_mean_zero(omega);

    const std::size_t ns = g.spectral_size();
    const std::size_t nr = g.real_size();
    std::vector<Complex> u1(ns), u2(ns), wx(ns), wy(ns);
    const Complex I(0.0, 1.0);
    for (std::size_t i = 0; i < ns; ++i) {
        const Complex w = omega.coeffs[i];
        const Complex psi = w * inv_lap_[i];
        u1[i] = I * ky_[i] * psi;
        u2[i] = -I * kx_[i] * psi;
        wx[i] = I * kx_[i] * w;
        wy[i] = I * ky_[i] * w;
    }

    FftPlan2D& fft = fft_for(g.n1(), g.n2());
    std::vector<double> ru1(nr), ru2(nr), rwx(nr), rwy(nr);
    fft.inverse(u1, ru1);
    fft.inverse(u2, ru2);
    fft.inverse(wx, rwx);
    fft.inverse(wy, rwy);
    for (std::size_t i = 0; i < nr; ++i) ru1[i] = ru1[i] * rwx[i] + ru2[i] * rwy[i];

    SpectralField out(g);
    fft.forward(ru1, out.coeffs);
    const double scale = (config_.reverse ? 1.0 : -1.0) / static_cast<double>(nr);
    for (std::size_t i = 0; i < ns; ++i) out.coeffs[i] *= scale * mask_[i];
    out.coeffs[0] = 0.0;
    return out;
}

void EulerSolver::step(SolverState& state, double dt) const {
    const SpectralField& w = state.omega;
    SpectralField tmp(w.grid);
    const SpectralField k1 = rhs(w);
    axpy(tmp, w, 0.5 * dt, k1);
    const SpectralField k2 = rhs(tmp);
    axpy(tmp, w, 0.5 * dt, k2);
    const SpectralField k3 = rhs(tmp);
    axpy(tmp, w, dt, k3);
    const SpectralField k4 = rhs(tmp);
    const double h6 = dt / 6.0;
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
        state.omega.coeffs[i] += h6 * (k1.coeffs[i] + 2.0 * (k2.coeffs[i] + k3.coeffs[i]) + k4.coeffs[i]);
    }
    state.t += dt;
}

SpectralField rhs(const SpectralField& omega, Dealias dealias) {
    SolverConfig config{omega.grid};
    config.dealias = dealias;
    return EulerSolver(std::move(config)).rhs(omega);
}

SolverState step(SolverState state, const SolverConfig& config) {
    EulerSolver(config).step(state, config.dt);
    return state;
}

DiagnosticsRow diagnose(const SolverState& state, const std::optional<EigenstateCoeffs>& target,
                        double p_norm) {
    const SpectralField& F = state.omega;
    const RealField w = synthesize(F);
    DiagnosticsRow row;
    row.t = state.t;
    row.energy = energy(F);
    row.enstrophy = enstrophy(F);
    for (int m = 3; m <= 6; ++m) row.casimir[m - 3] = casimir(w, m);
    const auto [v1, v2] = velocity_from_vorticity(F);
    row.meanv1 = mean(v1);
    row.meanv2 = mean(v2);
    for (std::size_t i = 0; i < v1.samples.size(); ++i) {
        row.max_speed = std::max(row.max_speed, std::hypot(v1.samples[i], v2.samples[i]));
    }
    for (double v : w.samples) row.max_abs = std::max(row.max_abs, std::abs(v));

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    row.orbit_dist = row.pstar1 = row.pstar2 = nan;
    if (target) {
        const OrbitDistance d = p_norm == 2.0 ? orbit_distance(F, *target) : orbit_distance(w, *target, p_norm);
        row.orbit_dist = d.distance;
        row.pstar1 = d.p_star.x;
        row.pstar2 = d.p_star.y;
    }
    const Projection proj = project_to_e1(F);
    row.theta = phase_invariant_angle(proj.coeffs);
    row.e1_residual = proj.residual;
    return row;
}

RunResult run(const SolverConfig& config, const SpectralField& omega0,
              const std::optional<EigenstateCoeffs>& target, double p_norm) {
    const EulerSolver solver(config);
    if (!(omega0.grid == config.grid)) {
        throw Error(ErrorCode::ShapeMismatch, "initial vorticity does not match solver grid");
    }
    require_mean_zero(omega0);

    RunResult result{SolverState{0.0, omega0}, {}, {}};
    SolverState& s = result.final_state;
    Diagnostics& diag = result.diagnostics;
    const double h = min_cell_size(config.grid);

    std::vector<double> pending = config.snapshot_times;
    std::sort(pending.begin(), pending.end());
    std::size_t next_snapshot = 0;
    auto write_snapshots = [&]() {
        while (next_snapshot < pending.size() && s.t >= pending[next_snapshot] - 1e-9 * config.dt) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%04zu.torf", next_snapshot);
            const std::filesystem::path path = config.snapshot_dir / name;
            write_torf(path, synthesize(s.omega));
            result.snapshots.push_back(path);
            ++next_snapshot;
        }
    };
    auto record = [&]() {
        DiagnosticsRow row = diagnose(s, target, p_norm);
        row.cfl = config.dt * row.max_speed / h;
        if (row.cfl > 0.5) diag.cfl_warning = true;
        diag.rows.push_back(row);
        return row.max_abs;
    };

    const double max0 = record();
    write_snapshots();
    const auto steps = static_cast<long long>(std::ceil(config.t_end / config.dt - 1e-9));
    for (long long i = 1; i <= steps; ++i) {
        const double t_next = i == steps ? config.t_end : static_cast<double>(i) * config.dt;
        solver.step(s, t_next - s.t);
        s.t = t_next;
        if (!all_finite(s.omega)) {
            throw NumericalBlowupError("non-finite vorticity at t = " + std::to_string(s.t), diag);
        }
        if (i % config.diag_stride == 0 || i == steps) {
            const double max_abs = record();
            if (max0 > 0.0 && max_abs > kBlowupFactor * max0) {
                throw NumericalBlowupError("max|omega| grew beyond 1e6 times its initial value at t = " +
                                               std::to_string(s.t),
                                           diag);
            }
        }
        write_snapshots();
    }
    return result;
}

AdmissibilityReport admissibility_check(const Diagnostics& d, AdmissibilityThresholds thresholds, double area) {
    AdmissibilityReport report;
    if (d.rows.empty()) return report;
    const DiagnosticsRow& first = d.rows.front();
    auto casimir_of = [](const DiagnosticsRow& r, int m) { return m == 2 ? r.enstrophy : r.casimir[m - 3]; };
    const double l2 = std::sqrt(first.enstrophy);
    for (const DiagnosticsRow& r : d.rows) {
        const double e_scale = first.energy != 0.0 ? std::abs(first.energy) : 1.0;
        report.energy_drift = std::max(report.energy_drift, std::abs(r.energy - first.energy) / e_scale);
        for (int m = 2; m <= 6; ++m) {
            double scale = std::max(std::abs(casimir_of(first, m)), std::pow(l2, m) * std::pow(area, 1.0 - 0.5 * m));
            if (scale == 0.0) scale = 1.0;
            double& drift = report.casimir_drift[m - 2];
            drift = std::max(drift, std::abs(casimir_of(r, m) - casimir_of(first, m)) / scale);
        }
    }
    auto flag = [&](const std::string& name, double drift, double limit) {
        if (!(drift <= limit)) {
            report.pass = false;
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s drift %.3e above %.1e", name.c_str(), drift, limit);
            report.failures.emplace_back(buf);
        }
    };
    flag("energy", report.energy_drift, thresholds.energy);
    flag("enstrophy", report.casimir_drift[0], thresholds.enstrophy);
    for (int m = 3; m <= 6; ++m) {
        flag("casimir" + std::to_string(m), report.casimir_drift[m - 2], thresholds.casimir);
    }
    return report;
}

SpectralField random_perturbation(const Grid& grid, std::uint64_t seed, double p_norm) {
    const EigenspaceInfo info = classify_eigenspace(grid.basis());
    const DualBasis dual = dual_basis(grid.basis());
    const double cutoff = 3.0 * info.rho * (1.0 + 1e-9);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    SpectralField g(grid);
    const int mmax = grid.n1() / 2 - 1;
    const int nmax = grid.n2() / 2 - 1;
    for (int m = -mmax; m <= mmax; ++m) {
        for (int n = 0; n <= nmax; ++n) {
            if (n == 0 && m <= 0) continue;
            if (norm(dual.vector(m, n)) > cutoff) continue;
            const double re = normal(rng);
            const double im = normal(rng);
            g.set_coeff(m, n, Complex(re, im));
        }
    }
    const double size = lp_norm(synthesize(g), p_norm);
    if (size == 0.0) throw Error(ErrorCode::GridTooCoarse, "perturbation band contains no modes");
    for (Complex& c : g.coeffs) c /= size;
    return g;
}

StabilityResult stability_experiment(const LatticeBasis& basis, const EigenstateCoeffs& reference,
                                     double epsilon, std::uint64_t perturbation_seed, double p_norm,
                                     const SolverConfig& config) {
    if (!(config.grid.basis() == basis)) {
        throw Error(ErrorCode::ConfigError, "solver grid does not live on the experiment lattice");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorCode::ConfigError, "epsilon must be nonnegative");
    }
    SpectralField zeta0 = eigenstate_spectrum(reference, config.grid);
    if (epsilon > 0.0) {
        const SpectralField g = random_perturbation(config.grid, perturbation_seed, p_norm);
        for (std::size_t i = 0; i < zeta0.coeffs.size(); ++i) zeta0.coeffs[i] += epsilon * g.coeffs[i];
    }

    StabilityResult out;
    out.diagnostics = run(config, zeta0, reference, p_norm).diagnostics;
    const auto& rows = out.diagnostics.rows;
    out.d0 = rows.front().orbit_dist;
    out.theta0 = rows.front().theta;
    for (const DiagnosticsRow& r : rows) {
        out.d_max = std::max(out.d_max, r.orbit_dist);
        if (std::isfinite(out.theta0)) {
            out.theta_max_dev = std::max(out.theta_max_dev, circular_distance(r.theta, out.theta0));
        }
    }
    return out;
}

void write_diagnostics_csv(std::ostream& out, const Diagnostics& d, const std::vector<std::string>& provenance) {
    for (const std::string& line : provenance) out << "# " << line << '\n';
    out << kDiagnosticsHeader << '\n';
    char buf[32];
    auto put = [&](double v, bool last) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << (last ? '\n' : ',');
    };
    for (const DiagnosticsRow& r : d.rows) {
        put(r.t, false);
        put(r.energy, false);
        put(r.enstrophy, false);
        for (double c : r.casimir) put(c, false);
        put(r.meanv1, false);
        put(r.meanv2, false);
        put(r.orbit_dist, false);
        put(r.pstar1, false);
        put(r.pstar2, false);
        put(r.theta, true);
    }
}

}  // namespace torus
