#include "torus/equimeasurable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torus/error.hpp"

namespace torus {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kClamp = 1e-9;
constexpr double kForwardTolerance = 1e-7;
constexpr double kDedup = 1e-7;

std::array<double, 3> padded_amplitudes(const EigenstateCoeffs& c) {
    std::array<double, 3> a{0.0, 0.0, 0.0};
    for (int i = 0; i < c.pairs() && i < 3; ++i) a[i] = c.amplitude[i];
    return a;
}

// alpha3 - alpha1 - alpha2; the triad phase is only defined in the hexagonal case.
double triad_phase(const EigenstateCoeffs& c) {
    return c.info.dim == 6 ? c.phase[2] - c.phase[0] - c.phase[1] : 0.0;
}

double clamp_square(double v) { return (v < 0.0 && v >= -kClamp) ? 0.0 : v; }

bool close_relative(double got, double want, double scale) {
    return std::abs(got - want) <= kForwardTolerance * scale;
}

// Checks the forward map against (c1, c2, c3). Each c_k is homogeneous of
// degree k, so c1^k sets its natural scale.
bool reproduces(const CandidateTriple& t, double c1, double c2, double c3, int upto) {
    const auto f = forward_moments(t);
    const double s = std::max(std::abs(c1), 1e-300);
    if (!close_relative(f[0], c1, s)) return false;
    if (!close_relative(f[1], c2, std::max(s * s, std::abs(c2)))) return false;
    if (upto >= 3 && !close_relative(f[2], c3, std::max(s * s * s, std::abs(c3)))) return false;
    return true;
}

double polish_root(const std::array<double, 4>& a, double x) {
    for (int it = 0; it < 8; ++it) {
        const double f = evaluate_cubic(a, x);
        const double df = (3.0 * a[0] * x + 2.0 * a[1]) * x + a[2];
        if (df == 0.0) break;
        const double next = x - f / df;
        if (!(std::abs(evaluate_cubic(a, next)) < std::abs(f))) break;
        x = next;
    }
    return x;
}

}  // namespace

double moment_kappa(int m) {
    switch (m) {
        case 2: return 0.5;
        case 3: return 1.5;
        case 4: return 3.0 / 8.0;
        case 6: return 5.0 / 16.0;
        default: throw Error(ErrorCode::UnsupportedMoment, "moment order must be 2, 3, 4 or 6");
    }
}

double moment_bracket(const EigenstateCoeffs& c, int m) {
    const auto a = padded_amplitudes(c);
    const double x = a[0] * a[0];
    const double y = a[1] * a[1];
    const double z = a[2] * a[2];
    const double cos_alpha = std::cos(triad_phase(c));
    switch (m) {
        case 2: return x + y + z;
        case 3: return a[0] * a[1] * a[2] * cos_alpha;
        case 4: return x * x + y * y + z * z + 4.0 * (x * y + x * z + y * z);
        case 6:
            return x * x * x + y * y * y + z * z * z +
                   9.0 * (x * x * y + x * x * z + y * y * x + y * y * z + z * z * x + z * z * y) +
                   27.0 * x * y * z + 18.0 * x * y * z * cos_alpha * cos_alpha;
        default: throw Error(ErrorCode::UnsupportedMoment, "moment order must be 2, 3, 4 or 6");
    }
}

double moments_quadrature_oracle(const EigenstateCoeffs& c, int m) {
    if (m == 0) return 1.0;
    const auto a = padded_amplitudes(c);
    std::array<double, 3> phase{0.0, 0.0, 0.0};
    for (int i = 0; i < c.pairs() && i < 3; ++i) phase[i] = c.phase[i];
    const int n = 4 * std::max(m, 1) + 4;
    const double h = 2.0 * kPi / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y1 = h * i;
        for (int j = 0; j < n; ++j) {
            const double y2 = h * j;
            double w = a[0] * std::cos(y1 + phase[0]) + a[1] * std::cos(y2 + phase[1]);
            if (c.info.dim == 6) w += a[2] * std::cos(y1 + y2 + phase[2]);
            total += std::pow(w, m);
        }
    }
    return total / (static_cast<double>(n) * n);
}

MomentData moment_data(const EigenstateCoeffs& c) {
    const double b2 = moment_bracket(c, 3);
    return {moment_bracket(c, 2), moment_bracket(c, 4), moment_bracket(c, 6) - 18.0 * b2 * b2, b2};
}

std::array<double, 3> forward_moments(const CandidateTriple& t) {
    const double x = t.x, y = t.y, z = t.z;
    return {x + y + z, x * x + y * y + z * z + 4.0 * (x * y + x * z + y * z),
            x * x * x + y * y * y + z * z * z +
                9.0 * (x * x * y + x * x * z + x * y * y + y * y * z + x * z * z + y * z * z) +
                27.0 * x * y * z};
}

std::array<double, 4> reduce_to_cubic(double c1, double c2, double c3) {
    return {3.0, -3.0 * c1, 1.5 * (c2 - c1 * c1), 3.0 * c1 * c2 - 2.0 * c1 * c1 * c1 - c3};
}

double evaluate_cubic(const std::array<double, 4>& a, double x) {
    return ((a[0] * x + a[1]) * x + a[2]) * x + a[3];
}

std::vector<CubicRoot> solve_cubic(const std::array<double, 4>& a) {
    if (a[0] == 0.0 || !std::isfinite(a[0])) {
        throw Error(ErrorCode::DegenerateLeadingCoefficient, "cubic has a zero leading coefficient");
    }
    const double b = a[1] / a[0];
    const double c = a[2] / a[0];
    const double d = a[3] / a[0];
    // x = t - b/3 gives t^3 + p t + q.
    const double shift = b / 3.0;
    const double p = c - b * shift;
    const double q = 2.0 * shift * shift * shift - shift * c + d;
    const double scale = std::max({std::abs(shift), std::sqrt(std::abs(c)), std::cbrt(std::abs(d))});

    std::vector<CubicRoot> roots;
    if (scale == 0.0 || (std::abs(p) <= 1e-13 * scale * scale && std::abs(q) <= 1e-14 * scale * scale * scale)) {
        roots.push_back({-shift, 3});
        return roots;
    }

    const double p3 = 4.0 * p * p * p;
    const double q2 = 27.0 * q * q;
    const double disc = p3 + q2;  // negative: three distinct real roots
    if (std::abs(disc) <= 1e-12 * (std::abs(p3) + q2) && p != 0.0) {
        const double simple = 3.0 * q / p;
        const double twice = -1.5 * q / p;
        roots.push_back({polish_root(a, simple - shift), 1});
        roots.push_back({twice - shift, 2});
    } else if (disc < 0.0) {
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots.push_back({polish_root(a, r * std::cos(phi - 2.0 * kPi * k / 3.0) - shift), 1});
        }
    } else {
        const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        const double t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
        roots.push_back({polish_root(a, t - shift), 1});
    }

    std::sort(roots.begin(), roots.end(), [](const CubicRoot& u, const CubicRoot& v) { return u.value < v.value; });
    std::vector<CubicRoot> merged;
    const double spacing = 1e-8 * std::max(1.0, scale);
    for (const CubicRoot& r : roots) {
        if (!merged.empty() && r.value - merged.back().value <= spacing) {
            CubicRoot& m = merged.back();
            m.value = (m.value * m.multiplicity + r.value * r.multiplicity) / (m.multiplicity + r.multiplicity);
            m.multiplicity += r.multiplicity;
        } else {
            merged.push_back(r);
        }
    }
    return merged;
}

std::vector<std::pair<double, double>> back_substitute(double x, double c1, double c2) {
    const double s = c1 - x;
    const double q = x * x - c1 * x + 0.5 * (c2 - c1 * c1);
    double disc = s * s - 4.0 * q;
    const double scale = std::max({s * s, std::abs(q), c1 * c1});
    if (disc < 0.0) {
        if (disc < -1e-12 * scale) return {};
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    // Stable pair: the larger-magnitude root first, the other from the product.
    double big = 0.5 * (s + std::copysign(root, s));
    double small = big != 0.0 ? q / big : 0.0;
    double y = clamp_square(std::min(big, small));
    double z = clamp_square(std::max(big, small));
    if (y < 0.0 || z < 0.0) return {};
    const CandidateTriple t{clamp_square(x), y, z};
    if (t.x < 0.0 || !reproduces(t, c1, c2, 0.0, 2)) return {};
    return {{y, z}};
}

std::vector<CandidateTriple> enumerate_candidates(const MomentData& md) {
    std::vector<CandidateTriple> out;
    auto add = [&](CandidateTriple t) {
        if (!reproduces(t, md.c1, md.c2, md.c3, 3)) return;
        const double tol = kDedup * std::max(1.0, std::abs(md.c1));
        for (const CandidateTriple& u : out) {
            if (std::abs(u.x - t.x) <= tol && std::abs(u.y - t.y) <= tol && std::abs(u.z - t.z) <= tol) return;
        }
        out.push_back(t);
    };
    for (const CubicRoot& r : solve_cubic(reduce_to_cubic(md.c1, md.c2, md.c3))) {
        const double x = clamp_square(r.value);
        if (x < 0.0) continue;
        for (const auto& [y, z] : back_substitute(x, md.c1, md.c2)) {
            add({x, y, z});
            add({x, z, y});
        }
    }
    std::sort(out.begin(), out.end(), [](const CandidateTriple& u, const CandidateTriple& v) {
        return u.x != v.x ? u.x < v.x : (u.y != v.y ? u.y < v.y : u.z < v.z);
    });
    return out;
}

OrbitCensus orbit_census(const EigenstateCoeffs& reference) {
    const EigenspaceInfo& info = reference.info;
    OrbitCensus census;
    census.dim = info.dim;

    auto add = [&](std::vector<double> amps, std::vector<double> phases) {
        EigenstateCoeffs c = EigenstateCoeffs::make(info, std::move(amps), std::move(phases));
        for (const EigenstateCoeffs& r : census.representatives) {
            if (same_orbit(r, c, kCensusTolerance)) return;
        }
        census.representatives.push_back(std::move(c));
    };

    if (info.dim == 2) {
        add({reference.amplitude[0]}, {0.0});
    } else if (info.dim == 4) {
        const double c1 = moment_bracket(reference, 2);
        const double c2 = moment_bracket(reference, 4);
        // {x, y} are the roots of t^2 - c1 t + (c2 - c1^2)/2.
        for (const auto& [x, y] : back_substitute(0.0, c1, c2)) {
            add({std::sqrt(x), std::sqrt(y)}, {0.0, 0.0});
            add({std::sqrt(y), std::sqrt(x)}, {0.0, 0.0});
        }
    } else {
        const MomentData md = moment_data(reference);
        for (const CandidateTriple& t : enumerate_candidates(md)) {
            const std::vector<double> amps{std::sqrt(t.x), std::sqrt(t.y), std::sqrt(t.z)};
            const double product = amps[0] * amps[1] * amps[2];
            if (product <= kCensusTolerance.amplitude) {
                add(amps, {0.0, 0.0, 0.0});
                continue;
            }
            double cos_alpha = md.b2 / product;
            if (std::abs(cos_alpha) > 1.0 + 1e-6) continue;
            if (std::abs(std::abs(cos_alpha) - 1.0) <= 1e-12) cos_alpha = std::copysign(1.0, cos_alpha);
            const double alpha = std::acos(std::clamp(cos_alpha, -1.0, 1.0));
            add(amps, {0.0, 0.0, alpha});
            add(amps, {0.0, 0.0, -alpha});
        }
    }

    census.count = static_cast<int>(census.representatives.size());
    for (int i = 0; i < census.count; ++i) {
        if (same_orbit(census.representatives[i], reference, kCensusTolerance)) {
            census.reference_index = i;
            break;
        }
    }
    if (census.reference_index < 0) {
        throw Error(ErrorCode::InconsistentMoments, "reference orbit is not recovered from its own moments");
    }
    return census;
}

}  // namespace torus
