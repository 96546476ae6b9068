#include "torus/lattice.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>

#include "torus/error.hpp"

namespace torus {

namespace {

constexpr double kTieTolerance = 1e-9;

// A basis vector together with its integer coordinates in the basis it was
// derived from.
struct TrackedVector {
    Vec2 v;
    int a = 0;
    int b = 0;
};

TrackedVector combine(const TrackedVector& p, long long s, const TrackedVector& q) {
    return {p.v - static_cast<double>(s) * q.v, p.a - static_cast<int>(s) * q.a,
            p.b - static_cast<int>(s) * q.b};
}

// Lagrange-Gauss reduction: on exit |b1| <= |b2| and |b1.b2| <= |b1|^2 / 2.
std::array<TrackedVector, 2> gauss_reduce(Vec2 u, Vec2 w) {
    TrackedVector b1{u, 1, 0};
    TrackedVector b2{w, 0, 1};
    if (dot(b1.v, b1.v) > dot(b2.v, b2.v)) std::swap(b1, b2);
    for (int iter = 0; iter < 10000; ++iter) {
        const double mu = std::nearbyint(dot(b1.v, b2.v) / dot(b1.v, b1.v));
        if (mu == 0.0) break;
        b2 = combine(b2, static_cast<long long>(mu), b1);
        if (dot(b2.v, b2.v) < dot(b1.v, b1.v)) {
            std::swap(b1, b2);
        } else {
            break;
        }
    }
    return {b1, b2};
}

double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }

}  // namespace

LatticeBasis::LatticeBasis(Vec2 xi, Vec2 eta) : xi_(xi), eta_(eta) {
    const double scale = std::max(norm(xi), norm(eta));
    if (!std::isfinite(scale) || !(std::abs(cross(xi, eta)) >= 1e-12 * scale * scale) ||
        scale == 0.0) {
        throw Error(ErrorCode::DegenerateBasis, "generators are linearly dependent");
    }
}

bool same_eigenspace(const EigenspaceInfo& a, const EigenspaceInfo& b) {
    return a.dim == b.dim && a.k == b.k && a.basis == b.basis;
}

DualBasis dual_basis(const LatticeBasis& basis) {
    const Vec2 xi = basis.xi();
    const Vec2 eta = basis.eta();
    const double det = basis.det();
    return {Vec2{eta.y, -eta.x} * (1.0 / det), Vec2{-xi.y, xi.x} * (1.0 / det)};
}

DualGram gram_dual(const LatticeBasis& basis) {
    const DualBasis d = dual_basis(basis);
    return {dot(d.xi_star, d.xi_star), dot(d.xi_star, d.eta_star), dot(d.eta_star, d.eta_star)};
}

LatticeBasis dual_as_lattice(const LatticeBasis& basis) {
    const DualBasis d = dual_basis(basis);
    return LatticeBasis(d.xi_star, d.eta_star);
}

bool has_canonical_sign(Vec2 v, double tol) {
    return v.x > tol || (std::abs(v.x) <= tol && v.y > 0.0);
}

ShortestVectorSet shortest_vectors(const LatticeBasis& basis) {
    const DualBasis dual = dual_basis(basis);
    const auto [r1, r2] = gauss_reduce(dual.xi_star, dual.eta_star);

    struct Candidate {
        int m;
        int n;
        double length;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(24);
    double shortest = std::numeric_limits<double>::infinity();
    for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
            if (a == 0 && b == 0) continue;
            const int m = a * r1.a + b * r2.a;
            const int n = a * r1.b + b * r2.b;
            const double length = norm(dual.vector(m, n));
            candidates.push_back({m, n, length});
            shortest = std::min(shortest, length);
        }
    }

    ShortestVectorSet out;
    out.rho = shortest;
    for (const Candidate& c : candidates) {
        if (c.length <= shortest * (1.0 + kTieTolerance)) {
            out.vectors.push_back({c.m, c.n, dual.vector(c.m, c.n)});
        }
    }

    const double sign_tol = kTieTolerance * shortest;
    for (const DualVector& v : out.vectors) {
        if (has_canonical_sign(v.k, sign_tol)) out.representatives.push_back(v);
    }
    std::sort(out.representatives.begin(), out.representatives.end(),
              [](const DualVector& p, const DualVector& q) { return angle_of(p.k) < angle_of(q.k); });
    std::sort(out.vectors.begin(), out.vectors.end(),
              [](const DualVector& p, const DualVector& q) { return angle_of(p.k) < angle_of(q.k); });

    if (out.vectors.size() != 2 * out.representatives.size() || out.vectors.size() > 6) {
        throw Error(ErrorCode::InternalInvariant, "shortest vector set is not a union of +/- pairs");
    }
    return out;
}

EigenspaceInfo classify_eigenspace(const LatticeBasis& basis) {
    const ShortestVectorSet s = shortest_vectors(basis);
    EigenspaceInfo info{basis, s.rho, 4.0 * std::numbers::pi * std::numbers::pi * s.rho * s.rho,
                        static_cast<int>(s.vectors.size()), {}};
    if (info.dim != 6) {
        info.k = s.representatives;
        return info;
    }

    const DualBasis dual = dual_basis(basis);
    const auto& reps = s.representatives;
    auto find = [&](int m, int n) -> const DualVector* {
        for (const DualVector& v : reps) {
            if (v.m == m && v.n == n) return &v;
        }
        return nullptr;
    };
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (std::size_t j = i + 1; j < reps.size(); ++j) {
            if (const DualVector* sum = find(reps[i].m + reps[j].m, reps[i].n + reps[j].n)) {
                info.k = {reps[i], reps[j], *sum};
                return info;
            }
        }
    }
    // Flipping the sign of the second vector turns a difference into a sum.
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (std::size_t j = 0; j < reps.size(); ++j) {
            if (i == j) continue;
            if (const DualVector* diff = find(reps[i].m - reps[j].m, reps[i].n - reps[j].n)) {
                const DualVector flipped{-reps[j].m, -reps[j].n, dual.vector(-reps[j].m, -reps[j].n)};
                info.k = {reps[i], flipped, *diff};
                return info;
            }
        }
    }
    throw Error(ErrorCode::InternalInvariant, "six shortest vectors without a k3 = k1 + k2 relation");
}

LatticeBasis lattice_preset(std::string_view name) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (name == "square") return LatticeBasis({two_pi, 0.0}, {0.0, two_pi});
    if (name == "hexagonal") {
        return LatticeBasis({two_pi, 0.0}, {two_pi * 0.5, two_pi * std::sqrt(3.0) / 2.0});
    }
    constexpr std::string_view rect = "rectangular:";
    if (name.starts_with(rect)) {
        const std::string text(name.substr(rect.size()));
        std::size_t used = 0;
        double h = 0.0;
        try {
            h = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size() || text.empty() || !(h > 0.0) || !std::isfinite(h)) {
            throw Error(ErrorCode::ConfigError, "rectangular preset needs a positive height, got '" +
                                                    text + "'");
        }
        return LatticeBasis({two_pi, 0.0}, {0.0, h});
    }
    throw Error(ErrorCode::ConfigError, "unknown lattice preset '" + std::string(name) + "'");
}

Vec2 reduce_mod_lattice(const LatticeBasis& basis, Vec2 p) {
    const DualBasis d = dual_basis(basis);
    Vec2 y{dot(d.xi_star, p), dot(d.eta_star, p)};
    y.x -= std::floor(y.x + 0.5);
    y.y -= std::floor(y.y + 0.5);
    return y;
}

double torus_distance(const LatticeBasis& basis, Vec2 p, Vec2 q) {
    const auto [r1, r2] = gauss_reduce(basis.xi(), basis.eta());
    const Vec2 diff = p - q;
    // Coordinates of diff in the reduced basis.
    const double det = cross(r1.v, r2.v);
    const double c1 = cross(diff, r2.v) / det;
    const double c2 = cross(r1.v, diff) / det;
    const double f1 = std::nearbyint(c1);
    const double f2 = std::nearbyint(c2);
    double best = std::numeric_limits<double>::infinity();
    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
            const Vec2 shift = (f1 + a) * r1.v + (f2 + b) * r2.v;
            best = std::min(best, norm(diff - shift));
        }
    }
    return best;
}

}  // namespace torus
