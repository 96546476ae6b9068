#pragma once

// Pseudo-spectral integration of the vorticity equation
//
//   d omega / dt + v . grad omega = 0,   v = perp-grad G omega,
//
// on an arbitrary flat torus, with classical RK4 in time and the 2/3 rule on
// the (m, n) index rectangle.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "torus/eigenstate.hpp"
#include "torus/error.hpp"
#include "torus/spectral.hpp"

namespace torus {

enum class Integrator { RK4 };
enum class Dealias { TwoThirds, None };

struct SolverConfig {
    explicit SolverConfig(Grid g) : grid(std::move(g)) {}

    Grid grid;
    double dt = 1e-2;
    double t_end = 1.0;
    Integrator integrator = Integrator::RK4;
    Dealias dealias = Dealias::TwoThirds;
    int diag_stride = 10;
    /// Integrate the time-reversed equation (rhs with flipped sign).
    bool reverse = false;
    /// Snapshots are written as TORF files at the first step reaching each time.
    std::vector<double> snapshot_times;
    std::filesystem::path snapshot_dir;
};

struct SolverState {
    double t = 0.0;
    SpectralField omega;
};

struct DiagnosticsRow {
    double t = 0.0;
    double energy = 0.0;
    double enstrophy = 0.0;
    double casimir[4] = {0.0, 0.0, 0.0, 0.0};  // m = 3, 4, 5, 6
    double meanv1 = 0.0;
    double meanv2 = 0.0;
    double orbit_dist = 0.0;  // NaN without a target
    double pstar1 = 0.0;
    double pstar2 = 0.0;
    double theta = 0.0;         // NaN unless dim E1 == 6
    double e1_residual = 0.0;   // || omega - P_E1 omega ||_2
    double max_abs = 0.0;
    double max_speed = 0.0;
    double cfl = 0.0;  // dt * max|v| / min cell size, filled in by run()
};

struct Diagnostics {
    std::vector<DiagnosticsRow> rows;
    /// Set when dt exceeded 0.5 * min cell size / max|v| at some sample.
    bool cfl_warning = false;
};

class NumericalBlowupError : public Error {
public:
    NumericalBlowupError(const std::string& what, Diagnostics partial)
        : Error(ErrorCode::NumericalBlowup, what), partial_(std::move(partial)) {}
    const Diagnostics& partial() const { return partial_; }

private:
    Diagnostics partial_;
};

class EulerSolver {
public:
    explicit EulerSolver(SolverConfig config);

    const SolverConfig& config() const { return config_; }

    /// -(v . grad omega), dealiased, zero mode forced to 0. Throws NonZeroMean.
    SpectralField rhs(const SpectralField& omega) const;
    /// One RK4 step of size dt.
    void step(SolverState& state, double dt) const;

private:
    SolverConfig config_;
    std::vector<double> kx_;       // 2 pi k_x, zero on Nyquist modes
    std::vector<double> ky_;
    std::vector<double> inv_lap_;  // 1 / (4 pi^2 q), zero at the mean mode
    std::vector<double> mask_;
};

SpectralField rhs(const SpectralField& omega, Dealias dealias = Dealias::TwoThirds);
SolverState step(SolverState state, const SolverConfig& config);

struct RunResult {
    SolverState final_state;
    Diagnostics diagnostics;
    std::vector<std::filesystem::path> snapshots;
};

/// Diagnostics row for the current state. `target` enables the orbit distance
/// columns, measured in L^p_norm.
DiagnosticsRow diagnose(const SolverState& state, const std::optional<EigenstateCoeffs>& target,
                        double p_norm = 2.0);

/// Integrates omega0 to t_end. Throws NumericalBlowupError (with the rows
/// recorded so far) when max|omega| exceeds 1e6 times its initial value or a
/// value stops being finite.
RunResult run(const SolverConfig& config, const SpectralField& omega0,
              const std::optional<EigenstateCoeffs>& target = std::nullopt, double p_norm = 2.0);

struct AdmissibilityThresholds {
    double energy = 1e-8;
    double enstrophy = 1e-8;
    double casimir = 1e-5;  // m = 3..6
};

struct AdmissibilityReport {
    double energy_drift = 0.0;
    double casimir_drift[5] = {0.0, 0.0, 0.0, 0.0, 0.0};  // m = 2..6
    bool pass = true;
    std::vector<std::string> failures;
};

/// Maximum relative drift of the energy and of the Casimirs m = 2..6. Odd
/// Casimirs can vanish initially, so each drift is scaled by
/// max(|C_m(0)|, ||omega||_2^m |T|^(1 - m/2)).
AdmissibilityReport admissibility_check(const Diagnostics& d, AdmissibilityThresholds thresholds = {},
                                        double area = 1.0);

/// Seeded random mean-zero field band-limited to |k| <= 3 rho with unit L^p norm.
SpectralField random_perturbation(const Grid& grid, std::uint64_t seed, double p_norm = 2.0);

struct StabilityResult {
    Diagnostics diagnostics;
    double d0 = 0.0;
    double d_max = 0.0;
    double theta0 = 0.0;
    double theta_max_dev = 0.0;
};

/// Runs omega_bar + epsilon * g and records the orbit distance to `reference`,
/// the recovered translation and the projected phase invariant.
StabilityResult stability_experiment(const LatticeBasis& basis, const EigenstateCoeffs& reference,
                                     double epsilon, std::uint64_t perturbation_seed, double p_norm,
                                     const SolverConfig& config);

inline constexpr const char* kDiagnosticsHeader =
    "t,energy,enstrophy,casimir3,casimir4,casimir5,casimir6,meanv1,meanv2,orbit_dist,pstar1,pstar2,theta";

/// CSV with '#' provenance lines before the header; doubles printed with %.17g.
void write_diagnostics_csv(std::ostream& out, const Diagnostics& d,
                           const std::vector<std::string>& provenance = {});

}  // namespace torus
