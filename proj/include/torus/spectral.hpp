#pragma once

// Fourier representation of fields on a flat torus.
//
// Samples live on the lattice-adapted grid x(j1, j2) = (j1/n1) xi + (j2/n2) eta,
// so a single rectangular FFT serves every torus shape: the DFT index (m, n)
// is the dual lattice vector k = m xi* + n eta*, and Cartesian geometry only
// enters through per-mode wavevectors.
//
// Coefficients are normalized so that f(x) = sum_(m,n) F(m,n) exp(2 pi i k.x).
// SpectralField stores the half spectrum of a real field (n1 x (n2/2 + 1),
// FFTW r2c layout); coeff(m, n) reconstructs the other half by Hermitian
// symmetry.

#include <complex>
#include <cstdlib>
#include <cstddef>
#include <utility>
#include <vector>

#include "torus/lattice.hpp"

namespace torus {

using Complex = std::complex<double>;

class Grid {
public:
    /// n1, n2 must be even and >= 16.
    Grid(LatticeBasis basis, int n1, int n2);

    const LatticeBasis& basis() const { return basis_; }
    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int half_cols() const { return n2_ / 2 + 1; }
    std::size_t real_size() const { return static_cast<std::size_t>(n1_) * n2_; }
    std::size_t spectral_size() const { return static_cast<std::size_t>(n1_) * half_cols(); }
    double cell_area() const { return basis_.area() / static_cast<double>(real_size()); }

    Vec2 point(int j1, int j2) const {
        return basis_.point(static_cast<double>(j1) / n1_, static_cast<double>(j2) / n2_);
    }

    /// Signed mode index of stored row i1.
    int mode_m(int i1) const { return i1 < n1_ / 2 ? i1 : i1 - n1_; }
    /// True for the unpaired Nyquist modes m = -n1/2 or n = n2/2.
    bool is_nyquist(int i1, int j) const { return i1 == n1_ / 2 || j == n2_ / 2; }
    /// Multiplicity of a stored half-spectrum column in full-spectrum sums.
    double column_weight(int j) const { return (j == 0 || j == n2_ / 2) ? 1.0 : 2.0; }
    /// True when mode (m, n) lies strictly inside the resolved range.
    bool resolves(int m, int n) const {
        return 2 * std::abs(m) < n1_ && 2 * std::abs(n) < n2_;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    LatticeBasis basis_;
    int n1_;
    int n2_;
};

struct RealField {
    Grid grid;
    std::vector<double> samples;  // row-major, index j1 * n2 + j2

    explicit RealField(Grid g) : grid(std::move(g)), samples(grid.real_size(), 0.0) {}
    RealField(Grid g, std::vector<double> values);

    double& at(int j1, int j2) { return samples[static_cast<std::size_t>(j1) * grid.n2() + j2]; }
    double at(int j1, int j2) const {
        return samples[static_cast<std::size_t>(j1) * grid.n2() + j2];
    }
};

struct SpectralField {
    Grid grid;
    std::vector<Complex> coeffs;  // index i1 * (n2/2 + 1) + j

    explicit SpectralField(Grid g) : grid(std::move(g)), coeffs(grid.spectral_size()) {}

    /// Coefficient of mode (m, n), m in [-n1/2, n1/2), n in [-n2/2, n2/2).
    Complex coeff(int m, int n) const;
    /// Sets mode (m, n) and its Hermitian partner (-m, -n).
    void set_coeff(int m, int n, Complex value);

    Complex& stored(int i1, int j) { return coeffs[static_cast<std::size_t>(i1) * grid.half_cols() + j]; }
    Complex stored(int i1, int j) const {
        return coeffs[static_cast<std::size_t>(i1) * grid.half_cols() + j];
    }
};

/// Calls fn(index, i1, j, m, n) for every stored half-spectrum entry.
template <typename Fn>
void for_each_mode(const Grid& grid, Fn&& fn) {
    const int cols = grid.half_cols();
    for (int i1 = 0; i1 < grid.n1(); ++i1) {
        const int m = grid.mode_m(i1);
        for (int j = 0; j < cols; ++j) {
            fn(static_cast<std::size_t>(i1) * cols + j, i1, j, m, j);
        }
    }
}

SpectralField analyze(const RealField& f);
RealField synthesize(const SpectralField& F);

/// Subtracts the grid mean.
RealField remove_mean(RealField f);
double mean(const RealField& f);

/// Inverse of -Laplacian on mean-zero fields: F(m,n) / (4 pi^2 q(m,n)).
SpectralField green_apply(const SpectralField& F);
SpectralField laplacian(const SpectralField& F);
/// Cartesian partial derivatives (multiplier 2 pi i k_x, 2 pi i k_y); Nyquist modes zeroed.
std::pair<SpectralField, SpectralField> gradient(const SpectralField& F);
/// v = perp-gradient of G omega = (d2 psi, -d1 psi).
std::pair<RealField, RealField> velocity_from_vorticity(const SpectralField& omega);

/// Grid quadrature of f * g.
double inner_product(const RealField& f, const RealField& g);

/// E = 1/2 int omega G omega.
double energy(const SpectralField& omega);
double energy(const RealField& omega);
/// int omega^2.
double enstrophy(const SpectralField& omega);
double enstrophy(const RealField& omega);
/// int |grad u|^2.
double dirichlet_integral(const SpectralField& u);
/// (int |f|^p)^(1/p), p >= 1. Evaluated pointwise on the grid without dealiasing.
double lp_norm(const RealField& f, double p);
/// int omega^m, integer m >= 1.
double casimir(const RealField& omega, int m);

/// (1/lambda1) int omega^2 - int omega G omega, nonnegative for every mean-zero field.
double energy_enstrophy_gap(const SpectralField& omega);

/// Fraction of int omega^2 carried by modes outside S(L*).
double e1_mass_fraction(const SpectralField& omega);
/// Discrete membership in the first eigenspace: mass fraction outside S(L*) <= threshold.
bool in_first_eigenspace(const SpectralField& omega, double threshold = 1e-6);

/// Throws NonZeroMean when |F(0,0)| > 1e-12 * max(1, max |F|).
void require_mean_zero(const SpectralField& F);

}  // namespace torus
