#pragma once

// Elements of the first eigenspace as amplitude/phase tuples.
//
//   w(x) = sum_i A_i cos(2 pi k_i . x + alpha_i),   A_i >= 0, alpha_i in [0, 2 pi)
//
// over the representatives k_i of S(L*) / {+-1}. Translating w by p shifts
// every phase by -2 pi k_i . p, so the translational orbit of w is described by
// the amplitudes plus, in the hexagonal case, the phase combination
// alpha_1 + alpha_2 - alpha_3 (k_3 = k_1 + k_2).

#include <optional>
#include <string>
#include <vector>

#include "torus/lattice.hpp"
#include "torus/spectral.hpp"

namespace torus {

struct EigenstateCoeffs {
    EigenspaceInfo info;
    std::vector<double> amplitude;
    std::vector<double> phase;

    /// Canonicalizes: negative amplitudes are folded into the phase (A -> -A,
    /// alpha -> alpha + pi), phases are reduced to [0, 2 pi), and the phase of
    /// a zero amplitude is set to 0. Throws InvalidCoefficients when the number
    /// of pairs differs from dim / 2 or an entry is not finite.
    static EigenstateCoeffs make(EigenspaceInfo info, std::vector<double> amplitude,
                                 std::vector<double> phase);
    static EigenstateCoeffs zero(EigenspaceInfo info);

    int pairs() const { return static_cast<int>(amplitude.size()); }
};

struct OrbitInvariant {
    std::vector<double> amps;
    /// A1 A2 A3 exp(i (alpha1 + alpha2 - alpha3)); present only when dim == 6.
    std::optional<Complex> phase;
};

struct OrbitTolerance {
    double amplitude = 1e-8;
    double phase = 1e-8;
};

/// Distance between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);
/// Reduces an angle to [0, 2 pi).
double wrap_phase(double a);

/// Spectrum of w: coefficient A_i exp(i alpha_i) / 2 at +k_i. Throws GridTooCoarse.
SpectralField eigenstate_spectrum(const EigenstateCoeffs& c, const Grid& grid);
RealField synthesize_eigenstate(const EigenstateCoeffs& c, const Grid& grid);

/// Coefficients of w(. - p).
EigenstateCoeffs translate_coeffs(const EigenstateCoeffs& c, Vec2 p);

OrbitInvariant orbit_invariant(const EigenstateCoeffs& c);
/// alpha1 + alpha2 - alpha3 wrapped to (-pi, pi]; NaN unless dim == 6.
double phase_invariant_angle(const EigenstateCoeffs& c);

/// Orbit comparison through the invariants (amplitudes, and the hexagonal
/// phase combination when A1 A2 A3 > tol.amplitude). Throws MixedEigenspace.
bool same_orbit(const EigenstateCoeffs& a, const EigenstateCoeffs& b, OrbitTolerance tol = {});

/// Finds p with translate_coeffs(a, p) == b by solving the phase equations of
/// two independent modes and checking the remaining one. Empty when no such
/// translation exists within `tol` (absolute, on complex mode coefficients).
std::optional<Vec2> solve_translation(const EigenstateCoeffs& a, const EigenstateCoeffs& b,
                                      double tol = 1e-8);

struct OrbitDistance {
    double distance = 0.0;
    Vec2 p_star;  // reduced into the fundamental cell around the origin
};

/// min over translations p of || f - w(. - p) ||_p. For p == 2 the per-mode
/// closed form is used; otherwise a 32x32 scan of the fundamental cell is
/// refined with Nelder-Mead.
OrbitDistance orbit_distance(const RealField& f, const EigenstateCoeffs& c, double p_norm = 2.0);
OrbitDistance orbit_distance(const SpectralField& f, const EigenstateCoeffs& c);

struct Projection {
    EigenstateCoeffs coeffs;
    double residual = 0.0;  // || f - synthesize(coeffs) ||_2
};

/// Coefficients of f on the first eigenspace. Throws NonZeroMean.
Projection project_to_e1(const RealField& f);
Projection project_to_e1(const SpectralField& f);

/// Plain-text record "dim A1 alpha1 [A2 alpha2 [A3 alpha3]]".
std::string format_coeffs(const EigenstateCoeffs& c);
/// Accepts the record form, or the bare "A1 alpha1 ..." pairs without the
/// leading dimension.
EigenstateCoeffs parse_coeffs(const std::string& text, const EigenspaceInfo& info);

}  // namespace torus
