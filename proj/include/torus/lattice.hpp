#pragma once

// Lattices, dual lattices and the first Laplacian eigenspace of a flat torus.
//
// A torus R^2 / L is described by a basis (xi, eta) of L. Its Fourier modes are
// indexed by the dual lattice L*, whose basis (xi*, eta*) satisfies
// xi*.xi = eta*.eta = 1 and xi*.eta = eta*.xi = 0. The Laplacian eigenvalue of
// the plane wave exp(2 pi i k.x) is 4 pi^2 |k|^2, so the first eigenspace is
// spanned by the shortest nonzero dual vectors.

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace torus {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Generators of the period lattice. Construction rejects (nearly) collinear
/// generators: |det| < 1e-12 * max(|xi|, |eta|)^2.
class LatticeBasis {
public:
    LatticeBasis(Vec2 xi, Vec2 eta);

    Vec2 xi() const { return xi_; }
    Vec2 eta() const { return eta_; }
    double det() const { return cross(xi_, eta_); }
    double area() const { return std::abs(det()); }

    /// Point with lattice coordinates (y1, y2), i.e. y1*xi + y2*eta.
    Vec2 point(double y1, double y2) const { return y1 * xi_ + y2 * eta_; }

    friend bool operator==(const LatticeBasis&, const LatticeBasis&) = default;

private:
    Vec2 xi_;
    Vec2 eta_;
};

struct DualBasis {
    Vec2 xi_star;
    Vec2 eta_star;

    Vec2 vector(int m, int n) const { return m * xi_star + n * eta_star; }
};

/// Gram matrix of the dual basis; q(m, n) = |m xi* + n eta*|^2.
struct DualGram {
    double g11 = 0.0;
    double g12 = 0.0;
    double g22 = 0.0;

    double q(double m, double n) const { return g11 * m * m + 2.0 * g12 * m * n + g22 * n * n; }
};

/// A dual lattice vector with its integer coordinates in the (xi*, eta*) basis.
struct DualVector {
    int m = 0;
    int n = 0;
    Vec2 k;

    friend bool operator==(const DualVector& a, const DualVector& b) {
        return a.m == b.m && a.n == b.n;
    }
};

struct ShortestVectorSet {
    double rho = 0.0;
    std::vector<DualVector> vectors;          // all of S(L*), closed under negation
    std::vector<DualVector> representatives;  // one per +/- pair, canonical sign, sorted by angle
};

struct EigenspaceInfo {
    LatticeBasis basis;
    double rho = 0.0;
    double lambda1 = 0.0;
    int dim = 0;
    /// k_1[, k_2[, k_3]]; when dim == 6, k_3 = k_1 + k_2 in integer coordinates.
    std::vector<DualVector> k;

    int pairs() const { return dim / 2; }
};

bool same_eigenspace(const EigenspaceInfo& a, const EigenspaceInfo& b);

DualBasis dual_basis(const LatticeBasis& basis);
DualGram gram_dual(const LatticeBasis& basis);

/// Basis of the dual lattice read as a primal lattice (L** = L).
LatticeBasis dual_as_lattice(const LatticeBasis& basis);

/// Lagrange-Gauss reduction of the dual basis followed by enumeration of
/// coefficient pairs in [-2, 2]^2 of the reduced basis. Ties in |k| are
/// accepted at relative tolerance 1e-9.
ShortestVectorSet shortest_vectors(const LatticeBasis& basis);

EigenspaceInfo classify_eigenspace(const LatticeBasis& basis);

/// True when `v` has the canonical sign: v.x > tol, or |v.x| <= tol and v.y > 0.
bool has_canonical_sign(Vec2 v, double tol);

/// Presets: "square", "hexagonal", "rectangular:h" (0 < h).
LatticeBasis lattice_preset(std::string_view name);

/// Reduces a translation modulo the lattice into lattice coordinates [-1/2, 1/2).
Vec2 reduce_mod_lattice(const LatticeBasis& basis, Vec2 p);

/// Distance between p and q on the torus, |p - q| minimized over lattice shifts.
double torus_distance(const LatticeBasis& basis, Vec2 p, Vec2 q);

}  // namespace torus
