#include "torus/eigenstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "torus/error.hpp"
#include "torus/nelder_mead.hpp"

namespace torus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same(const EigenstateCoeffs& a, const EigenstateCoeffs& b) {
    if (!same_eigenspace(a.info, b.info)) {
        throw Error(ErrorCode::MixedEigenspace, "coefficients refer to different eigenspaces");
    }
}

void require_resolved(const EigenspaceInfo& info, const Grid& grid) {
    if (!(grid.basis() == info.basis)) {
        throw Error(ErrorCode::ShapeMismatch, "grid and eigenstate live on different lattices");
    }
    for (const DualVector& k : info.k) {
        if (!grid.resolves(k.m, k.n)) {
            throw Error(ErrorCode::GridTooCoarse, "grid does not resolve the first eigenspace");
        }
    }
}

// Solves 2 pi [k_a; k_b] p = (ta, tb).
Vec2 solve_phase_system(Vec2 ka, Vec2 kb, double ta, double tb) {
    const double det = cross(ka, kb);
    const double ra = ta / kTwoPi;
    const double rb = tb / kTwoPi;
    return {(ra * kb.y - rb * ka.y) / det, (ka.x * rb - kb.x * ra) / det};
}

// Maximizes a1 cos t1 + a2 cos t2 + a3 cos(t1 + t2 + delta) over the torus.
std::array<double, 2> maximize_triad(double a1, double a2, double a3, double delta) {
    auto value = [&](double t1, double t2) {
        return a1 * std::cos(t1) + a2 * std::cos(t2) + a3 * std::cos(t1 + t2 + delta);
    };
    constexpr int kScan = 48;
    struct Seed {
        double t1, t2, v;
    };
    std::vector<Seed> seeds;
    seeds.reserve(kScan * kScan);
    for (int i = 0; i < kScan; ++i) {
        for (int j = 0; j < kScan; ++j) {
            const double t1 = kTwoPi * i / kScan - kPi;
            const double t2 = kTwoPi * j / kScan - kPi;
            seeds.push_back({t1, t2, value(t1, t2)});
        }
    }
    std::partial_sort(seeds.begin(), seeds.begin() + 4, seeds.end(),
                      [](const Seed& p, const Seed& q) { return p.v > q.v; });

    const double scale = std::max({a1, a2, a3});
    std::array<double, 2> best{seeds[0].t1, seeds[0].t2};
    double best_value = seeds[0].v;
    for (int s = 0; s < 4; ++s) {
        double t1 = seeds[s].t1;
        double t2 = seeds[s].t2;
        for (int it = 0; it < 60; ++it) {
            const double s1 = std::sin(t1), c1 = std::cos(t1);
            const double s2 = std::sin(t2), c2 = std::cos(t2);
            const double s3 = std::sin(t1 + t2 + delta), c3 = std::cos(t1 + t2 + delta);
            const double g1 = -a1 * s1 - a3 * s3;
            const double g2 = -a2 * s2 - a3 * s3;
            const double h11 = -a1 * c1 - a3 * c3;
            const double h22 = -a2 * c2 - a3 * c3;
            const double h12 = -a3 * c3;
            const double det = h11 * h22 - h12 * h12;
            double d1, d2;
            if (h11 < 0.0 && det > 1e-14 * scale * scale) {
                d1 = -(h22 * g1 - h12 * g2) / det;
                d2 = -(-h12 * g1 + h11 * g2) / det;
            } else {
                d1 = 0.5 * g1 / scale;
                d2 = 0.5 * g2 / scale;
            }
            const double step = std::hypot(d1, d2);
            if (step > 0.5) {
                d1 *= 0.5 / step;
                d2 *= 0.5 / step;
            }
            if (value(t1 + d1, t2 + d2) < value(t1, t2) - 1e-15 * scale) break;
            t1 += d1;
            t2 += d2;
            if (std::hypot(d1, d2) < 1e-15) break;
        }
        const double v = value(t1, t2);
        if (v > best_value) {
            best_value = v;
            best = {t1, t2};
        }
    }
    return best;
}

bool in_representatives(const EigenspaceInfo& info, int m, int n) {
    return std::any_of(info.k.begin(), info.k.end(), [&](const DualVector& k) {
        return (k.m == m && k.n == n) || (k.m == -m && k.n == -n);
    });
}

// area * sum of |F|^2 over modes outside +-k_i.
double off_eigenspace_mass(const SpectralField& f, const EigenspaceInfo& info) {
    double total = 0.0;
    for_each_mode(f.grid, [&](std::size_t idx, int, int j, int m, int n) {
        if (in_representatives(info, m, n)) return;
        total += f.grid.column_weight(j) * std::norm(f.coeffs[idx]);
    });
    return total * f.grid.basis().area();
}

}  // namespace

double wrap_phase(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double circular_distance(double a, double b) {
    const double d = wrap_phase(a - b);
    return std::min(d, kTwoPi - d);
}

EigenstateCoeffs EigenstateCoeffs::make(EigenspaceInfo info, std::vector<double> amplitude,
                                        std::vector<double> phase) {
    if (static_cast<int>(amplitude.size()) != info.pairs() || amplitude.size() != phase.size()) {
        throw Error(ErrorCode::InvalidCoefficients,
                    "expected " + std::to_string(info.pairs()) + " amplitude/phase pairs");
    }
    for (std::size_t i = 0; i < amplitude.size(); ++i) {
        if (!std::isfinite(amplitude[i]) || !std::isfinite(phase[i])) {
            throw Error(ErrorCode::InvalidCoefficients, "non-finite coefficient");
        }
        if (amplitude[i] < 0.0) {
            amplitude[i] = -amplitude[i];
            phase[i] += kPi;
        }
        phase[i] = amplitude[i] == 0.0 ? 0.0 : wrap_phase(phase[i]);
    }
    return {std::move(info), std::move(amplitude), std::move(phase)};
}

EigenstateCoeffs EigenstateCoeffs::zero(EigenspaceInfo info) {
    const auto n = static_cast<std::size_t>(info.pairs());
    return make(std::move(info), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

SpectralField eigenstate_spectrum(const EigenstateCoeffs& c, const Grid& grid) {
    require_resolved(c.info, grid);
    SpectralField F(grid);
    for (int i = 0; i < c.pairs(); ++i) {
        F.set_coeff(c.info.k[i].m, c.info.k[i].n, 0.5 * std::polar(c.amplitude[i], c.phase[i]));
    }
    return F;
}

RealField synthesize_eigenstate(const EigenstateCoeffs& c, const Grid& grid) {
    require_resolved(c.info, grid);
    RealField w(grid);
    for (int j1 = 0; j1 < grid.n1(); ++j1) {
        for (int j2 = 0; j2 < grid.n2(); ++j2) {
            double value = 0.0;
            for (int i = 0; i < c.pairs(); ++i) {
                // 2 pi k.x with x = (j1/n1) xi + (j2/n2) eta is exact in lattice coordinates.
                const double arg = kTwoPi * (static_cast<double>(c.info.k[i].m) * j1 / grid.n1() +
                                             static_cast<double>(c.info.k[i].n) * j2 / grid.n2());
                value += c.amplitude[i] * std::cos(arg + c.phase[i]);
            }
            w.at(j1, j2) = value;
        }
    }
    return w;
}

EigenstateCoeffs translate_coeffs(const EigenstateCoeffs& c, Vec2 p) {
    std::vector<double> phase(c.phase);
    for (int i = 0; i < c.pairs(); ++i) phase[i] -= kTwoPi * dot(c.info.k[i].k, p);
    return EigenstateCoeffs::make(c.info, c.amplitude, std::move(phase));
}

OrbitInvariant orbit_invariant(const EigenstateCoeffs& c) {
    OrbitInvariant inv{c.amplitude, std::nullopt};
    if (c.info.dim == 6) {
        inv.phase = std::polar(c.amplitude[0] * c.amplitude[1] * c.amplitude[2],
                               c.phase[0] + c.phase[1] - c.phase[2]);
    }
    return inv;
}

double phase_invariant_angle(const EigenstateCoeffs& c) {
    if (c.info.dim != 6) return std::numeric_limits<double>::quiet_NaN();
    const double theta = wrap_phase(c.phase[0] + c.phase[1] - c.phase[2]);
    return theta > kPi ? theta - kTwoPi : theta;
}

bool same_orbit(const EigenstateCoeffs& a, const EigenstateCoeffs& b, OrbitTolerance tol) {
    require_same(a, b);
    for (int i = 0; i < a.pairs(); ++i) {
        if (std::abs(a.amplitude[i] - b.amplitude[i]) > tol.amplitude) return false;
    }
    if (a.info.dim != 6) return true;
    const double product = a.amplitude[0] * a.amplitude[1] * a.amplitude[2];
    if (product <= tol.amplitude) return true;
    return circular_distance(phase_invariant_angle(a), phase_invariant_angle(b)) <= tol.phase;
}

std::optional<Vec2> solve_translation(const EigenstateCoeffs& a, const EigenstateCoeffs& b, double tol) {
    require_same(a, b);
    std::vector<int> active;
    for (int i = 0; i < a.pairs(); ++i) {
        if (std::abs(a.amplitude[i] - b.amplitude[i]) > tol) return std::nullopt;
        if (a.amplitude[i] > tol) active.push_back(i);
    }

    // alpha'_i = alpha_i - 2 pi k_i.p  =>  2 pi k_i.p = alpha_i - alpha'_i.
    auto shift = [&](int i) { return a.phase[i] - b.phase[i]; };
    Vec2 p{};
    if (active.size() == 1) {
        const Vec2 k = a.info.k[active[0]].k;
        p = (shift(active[0]) / (kTwoPi * dot(k, k))) * k;
    } else if (active.size() >= 2) {
        const int i = active[0];
        const int j = active[1];
        p = solve_phase_system(a.info.k[i].k, a.info.k[j].k, shift(i), shift(j));
    }

    for (int i = 0; i < a.pairs(); ++i) {
        const Complex moved = std::polar(a.amplitude[i], a.phase[i] - kTwoPi * dot(a.info.k[i].k, p));
        const Complex target = std::polar(b.amplitude[i], b.phase[i]);
        if (std::abs(moved - target) > tol) return std::nullopt;
    }
    return p;
}

OrbitDistance orbit_distance(const SpectralField& f, const EigenstateCoeffs& c) {
    require_resolved(c.info, f.grid);
    const EigenspaceInfo& info = c.info;
    const int pairs = c.pairs();

    // Overlap of f with A_i cos(2 pi k_i.x + alpha_i - 2 pi k_i.p) is
    // area * A_i |F_i| cos(theta_i) with theta_i = phi_i - alpha_i + 2 pi k_i.p.
    std::vector<Complex> F(pairs);
    std::vector<double> offset(pairs);
    std::vector<double> weight(pairs);
    for (int i = 0; i < pairs; ++i) {
        F[i] = f.coeff(info.k[i].m, info.k[i].n);
        offset[i] = std::arg(F[i]) - c.phase[i];
        weight[i] = c.amplitude[i] * std::abs(F[i]);
    }

    Vec2 p{};
    if (pairs == 1) {
        const Vec2 k = info.k[0].k;
        p = (-offset[0] / (kTwoPi * dot(k, k))) * k;
    } else if (pairs == 2) {
        p = solve_phase_system(info.k[0].k, info.k[1].k, -offset[0], -offset[1]);
    } else {
        const double delta = offset[2] - offset[0] - offset[1];
        const auto t = maximize_triad(weight[0], weight[1], weight[2], delta);
        p = solve_phase_system(info.k[0].k, info.k[1].k, t[0] - offset[0], t[1] - offset[1]);
    }

    double dist2 = off_eigenspace_mass(f, info);
    for (int i = 0; i < pairs; ++i) {
        const Complex w = 0.5 * std::polar(c.amplitude[i], c.phase[i] - kTwoPi * dot(info.k[i].k, p));
        dist2 += 2.0 * f.grid.basis().area() * std::norm(F[i] - w);
    }
    const Vec2 y = reduce_mod_lattice(f.grid.basis(), p);
    return {std::sqrt(std::max(0.0, dist2)), f.grid.basis().point(y.x, y.y)};
}

OrbitDistance orbit_distance(const RealField& f, const EigenstateCoeffs& c, double p_norm) {
    if (!(p_norm >= 1.0)) throw Error(ErrorCode::BadExponent, "orbit distance needs p >= 1");
    if (p_norm == 2.0) return orbit_distance(analyze(f), c);
    require_resolved(c.info, f.grid);

    const Grid& grid = f.grid;
    const int pairs = c.pairs();
    const std::size_t npts = grid.real_size();
    // cos/sin of 2 pi k_i.x at every sample.
    std::vector<double> cos_tab(npts * pairs);
    std::vector<double> sin_tab(npts * pairs);
    for (int j1 = 0; j1 < grid.n1(); ++j1) {
        for (int j2 = 0; j2 < grid.n2(); ++j2) {
            const std::size_t idx = static_cast<std::size_t>(j1) * grid.n2() + j2;
            for (int i = 0; i < pairs; ++i) {
                const double arg = kTwoPi * (static_cast<double>(c.info.k[i].m) * j1 / grid.n1() +
                                             static_cast<double>(c.info.k[i].n) * j2 / grid.n2());
                cos_tab[idx * pairs + i] = std::cos(arg);
                sin_tab[idx * pairs + i] = std::sin(arg);
            }
        }
    }

    const double cell = grid.cell_area();
    // Distance as a function of the translation in lattice coordinates.
    auto distance_at = [&](std::array<double, 2> y) {
        std::vector<double> ca(pairs), sa(pairs);
        for (int i = 0; i < pairs; ++i) {
            // k_i.p = m_i y1 + n_i y2 for p = y1 xi + y2 eta.
            const double beta = c.phase[i] - kTwoPi * (c.info.k[i].m * y[0] + c.info.k[i].n * y[1]);
            ca[i] = c.amplitude[i] * std::cos(beta);
            sa[i] = c.amplitude[i] * std::sin(beta);
        }
        double total = 0.0;
        for (std::size_t idx = 0; idx < npts; ++idx) {
            double w = 0.0;
            for (int i = 0; i < pairs; ++i) {
                w += ca[i] * cos_tab[idx * pairs + i] - sa[i] * sin_tab[idx * pairs + i];
            }
            total += std::pow(std::abs(f.samples[idx] - w), p_norm);
        }
        return std::pow(total * cell, 1.0 / p_norm);
    };

    constexpr int kScan = 32;
    std::array<double, 2> best_y{0.0, 0.0};
    double best = distance_at(best_y);
    for (int a = 0; a < kScan; ++a) {
        for (int b = 0; b < kScan; ++b) {
            const std::array<double, 2> y{static_cast<double>(a) / kScan, static_cast<double>(b) / kScan};
            const double d = distance_at(y);
            if (d < best) {
                best = d;
                best_y = y;
            }
        }
    }
    NelderMeadOptions options;
    options.initial_step = 1.0 / kScan;
    const NelderMeadResult refined = nelder_mead_2d(distance_at, best_y, options);
    if (refined.value < best) {
        best = refined.value;
        best_y = refined.x;
    }
    const Vec2 p = grid.basis().point(best_y[0], best_y[1]);
    const Vec2 y = reduce_mod_lattice(grid.basis(), p);
    return {best, grid.basis().point(y.x, y.y)};
}

Projection project_to_e1(const SpectralField& f) {
    require_mean_zero(f);
    EigenspaceInfo info = classify_eigenspace(f.grid.basis());
    require_resolved(info, f.grid);
    std::vector<double> amplitude(info.pairs());
    std::vector<double> phase(info.pairs());
    double scale = 0.0;
    for (int i = 0; i < info.pairs(); ++i) {
        const Complex F = f.coeff(info.k[i].m, info.k[i].n);
        amplitude[i] = 2.0 * std::abs(F);
        phase[i] = std::arg(F);
        scale = std::max(scale, amplitude[i]);
    }
    // Round-off level amplitudes are reported as exact zeros.
    for (double& a : amplitude) {
        if (a <= 1e-14 * std::max(1.0, scale)) a = 0.0;
    }
    const double residual = std::sqrt(off_eigenspace_mass(f, info));
    return {EigenstateCoeffs::make(std::move(info), std::move(amplitude), std::move(phase)), residual};
}

Projection project_to_e1(const RealField& f) { return project_to_e1(analyze(f)); }

std::string format_coeffs(const EigenstateCoeffs& c) {
    std::string out = std::to_string(c.info.dim);
    char buf[64];
    for (int i = 0; i < c.pairs(); ++i) {
        std::snprintf(buf, sizeof buf, " %.17g %.17g", c.amplitude[i], c.phase[i]);
        out += buf;
    }
    return out;
}

EigenstateCoeffs parse_coeffs(const std::string& text, const EigenspaceInfo& info) {
    std::istringstream in(text);
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) {
            throw Error(ErrorCode::InvalidCoefficients, "bad number '" + token + "' in coefficients");
        }
        values.push_back(v);
    }
    if (values.size() % 2 == 1) {
        if (values.front() != static_cast<double>(info.dim)) {
            throw Error(ErrorCode::InvalidCoefficients,
                        "record dimension does not match the eigenspace (dim " +
                            std::to_string(info.dim) + ")");
        }
        values.erase(values.begin());
    }
    std::vector<double> amplitude, phase;
    for (std::size_t i = 0; i + 1 < values.size(); i += 2) {
        amplitude.push_back(values[i]);
        phase.push_back(values[i + 1]);
    }
    return EigenstateCoeffs::make(info, std::move(amplitude), std::move(phase));
}

}  // namespace torus
