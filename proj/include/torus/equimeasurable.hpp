#pragma once

// Moments of first eigenstates and the census of translational orbits that
// share them.
//
// For w = A1 cos y1 + A2 cos y2 + A3 cos(y1 + y2 + alpha) the torus average of
// w^m is kappa_m * b_m with
//
//   b(2) = A1^2 + A2^2 + A3^2                                    kappa = 1/2
//   b(3) = A1 A2 A3 cos(alpha)                                   kappa = 3/2
//   b(4) = sum A^4 + 4 sum_{i<j} Ai^2 Aj^2                       kappa = 3/8
//   b(6) = sum A^6 + 9 sum_{i!=j} Ai^4 Aj^2
//          + 27 A1^2 A2^2 A3^2 + 18 A1^2 A2^2 A3^2 cos^2(alpha)  kappa = 5/16
//
// In squared amplitudes x, y, z the brackets become symmetric polynomials, and
// eliminating y and z leaves a cubic in x whose roots are exactly {x, y, z}.
// Lower dimensional eigenspaces use the same formulas with missing amplitudes
// set to zero.

#include <array>
#include <utility>
#include <vector>

#include "torus/eigenstate.hpp"

namespace torus {

struct MomentData {
    double c1 = 0.0;  // x + y + z
    double c2 = 0.0;  // x^2 + y^2 + z^2 + 4 (xy + yz + zx)
    double c3 = 0.0;  // b(6) - 18 b(3)^2
    double b2 = 0.0;  // A1 A2 A3 cos(alpha)
};

struct CandidateTriple {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct OrbitCensus {
    int dim = 0;
    std::vector<EigenstateCoeffs> representatives;
    int count = 0;
    int reference_index = -1;  // representative in the reference's own orbit
};

/// Coefficient of the bracket in the average of w^m (m in {2, 3, 4, 6}).
double moment_kappa(int m);

/// Bracket polynomial b(m) of the coefficients. Throws UnsupportedMoment.
double moment_bracket(const EigenstateCoeffs& c, int m);

/// Average of w^m over [0, 2 pi]^2 on an N x N grid with N > 2m, which is
/// exact for the trigonometric polynomial w^m.
double moments_quadrature_oracle(const EigenstateCoeffs& c, int m);

MomentData moment_data(const EigenstateCoeffs& c);
/// Forward map from squared amplitudes to (c1, c2, c3).
std::array<double, 3> forward_moments(const CandidateTriple& t);

/// Coefficients (a3, a2, a1, a0) of
/// 3x^3 - 3 c1 x^2 + 3/2 (c2 - c1^2) x + 3 c1 c2 - 2 c1^3 - c3.
std::array<double, 4> reduce_to_cubic(double c1, double c2, double c3);
double evaluate_cubic(const std::array<double, 4>& a, double x);

struct CubicRoot {
    double value = 0.0;
    int multiplicity = 1;
};

/// Real roots of a3 x^3 + a2 x^2 + a1 x + a0 in increasing order. Roots closer
/// than 1e-8 (relative to the root scale) are merged. Throws
/// DegenerateLeadingCoefficient when a3 is zero.
std::vector<CubicRoot> solve_cubic(const std::array<double, 4>& a);

/// Unordered pair (y, z), y <= z, with y + z = c1 - x and
/// yz = x^2 - c1 x + (c2 - c1^2)/2. Empty if the pair is complex or negative.
std::vector<std::pair<double, double>> back_substitute(double x, double c1, double c2);

/// All nonnegative triples reproducing (c1, c2, c3), sorted by x then y.
std::vector<CandidateTriple> enumerate_candidates(const MomentData& md);

/// One representative per translational orbit compatible with the moments of
/// `reference`. Throws InconsistentMoments when the reference's own orbit is
/// not recovered.
OrbitCensus orbit_census(const EigenstateCoeffs& reference);

/// Tolerance used to compare census members with each other and with the reference.
inline constexpr OrbitTolerance kCensusTolerance{1e-6, 1e-6};

}  // namespace torus
