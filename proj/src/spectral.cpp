#include "torus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torus/error.hpp"
#include "torus/fft.hpp"

namespace torus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw Error(ErrorCode::ShapeMismatch, "fields live on different grids");
}

// Sum over the full spectrum of weight(m, n) * |F(m, n)|^2.
template <typename Weight>
double spectral_sum(const SpectralField& F, Weight&& weight) {
    double total = 0.0;
    for_each_mode(F.grid, [&](std::size_t idx, int, int j, int m, int n) {
        total += F.grid.column_weight(j) * weight(m, n) * std::norm(F.coeffs[idx]);
    });
    return total;
}

bool in_shortest_set(const ShortestVectorSet& s, int m, int n) {
    return std::any_of(s.vectors.begin(), s.vectors.end(),
                       [&](const DualVector& v) { return v.m == m && v.n == n; });
}

}  // namespace

Grid::Grid(LatticeBasis basis, int n1, int n2) : basis_(basis), n1_(n1), n2_(n2) {
    if (n1 < 16 || n2 < 16 || n1 % 2 != 0 || n2 % 2 != 0) {
        throw Error(ErrorCode::BadGrid, "grid sizes must be even and >= 16, got " +
                                            std::to_string(n1) + "x" + std::to_string(n2));
    }
}

RealField::RealField(Grid g, std::vector<double> values) : grid(std::move(g)), samples(std::move(values)) {
    if (samples.size() != grid.real_size()) {
        throw Error(ErrorCode::ShapeMismatch, "sample count does not match grid");
    }
}

Complex SpectralField::coeff(int m, int n) const {
    const int n1 = grid.n1();
    if (n < 0) {
        m = -m;
        n = -n;
        const int i1 = ((m % n1) + n1) % n1;
        return std::conj(stored(i1, n));
    }
    const int i1 = ((m % n1) + n1) % n1;
    return stored(i1, n);
}

void SpectralField::set_coeff(int m, int n, Complex value) {
    const int n1 = grid.n1();
    const int n2 = grid.n2();
    if (n < 0) {
        m = -m;
        n = -n;
        value = std::conj(value);
    }
    const auto wrap = [n1](int v) { return ((v % n1) + n1) % n1; };
    stored(wrap(m), n) = value;
    if (n == 0 || n == n2 / 2) stored(wrap(-m), n) = std::conj(value);
}

SpectralField analyze(const RealField& f) {
    const Grid& g = f.grid;
    SpectralField F(g);
    fft_for(g.n1(), g.n2()).forward(f.samples, F.coeffs);
    const double scale = 1.0 / static_cast<double>(g.real_size());
    for (Complex& c : F.coeffs) c *= scale;
    return F;
}

RealField synthesize(const SpectralField& F) {
    RealField f(F.grid);
    fft_for(F.grid.n1(), F.grid.n2()).inverse(F.coeffs, f.samples);
    return f;
}

double mean(const RealField& f) {
    double total = 0.0;
    for (double v : f.samples) total += v;
    return total / static_cast<double>(f.samples.size());
}

RealField remove_mean(RealField f) {
    const double mu = mean(f);
    for (double& v : f.samples) v -= mu;
    return f;
}

void require_mean_zero(const SpectralField& F) {
    double scale = 1.0;
    for (const Complex& c : F.coeffs) scale = std::max(scale, std::abs(c));
    if (std::abs(F.coeffs[0]) > 1e-12 * scale) {
        throw Error(ErrorCode::NonZeroMean, "field has a nonzero mean mode");
    }
}

SpectralField green_apply(const SpectralField& F) {
    require_mean_zero(F);
    const DualGram gram = gram_dual(F.grid.basis());
    SpectralField out(F.grid);
    for_each_mode(F.grid, [&](std::size_t idx, int, int, int m, int n) {
        if (m == 0 && n == 0) return;
        out.coeffs[idx] = F.coeffs[idx] / (kFourPiSq * gram.q(m, n));
    });
    return out;
}

SpectralField laplacian(const SpectralField& F) {
    const DualGram gram = gram_dual(F.grid.basis());
    SpectralField out(F.grid);
    for_each_mode(F.grid, [&](std::size_t idx, int, int, int m, int n) {
        out.coeffs[idx] = -kFourPiSq * gram.q(m, n) * F.coeffs[idx];
    });
    return out;
}

std::pair<SpectralField, SpectralField> gradient(const SpectralField& F) {
    const DualBasis dual = dual_basis(F.grid.basis());
    SpectralField dx(F.grid);
    SpectralField dy(F.grid);
    for_each_mode(F.grid, [&](std::size_t idx, int i1, int j, int m, int n) {
        if (F.grid.is_nyquist(i1, j)) return;
        const Vec2 k = dual.vector(m, n);
        dx.coeffs[idx] = Complex(0.0, kTwoPi * k.x) * F.coeffs[idx];
        dy.coeffs[idx] = Complex(0.0, kTwoPi * k.y) * F.coeffs[idx];
    });
    return {std::move(dx), std::move(dy)};
}

std::pair<RealField, RealField> velocity_from_vorticity(const SpectralField& omega) {
    const auto [dpsi1, dpsi2] = gradient(green_apply(omega));
    RealField v1 = synthesize(dpsi2);
    RealField v2 = synthesize(dpsi1);
    for (double& v : v2.samples) v = -v;
    return {std::move(v1), std::move(v2)};
}

double inner_product(const RealField& f, const RealField& g) {
    require_same_grid(f.grid, g.grid);
    double total = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i) total += f.samples[i] * g.samples[i];
    return total * f.grid.cell_area();
}

double energy(const SpectralField& omega) {
    require_mean_zero(omega);
    const DualGram gram = gram_dual(omega.grid.basis());
    const double sum = spectral_sum(omega, [&](int m, int n) {
        return (m == 0 && n == 0) ? 0.0 : 1.0 / (kFourPiSq * gram.q(m, n));
    });
    return 0.5 * omega.grid.basis().area() * sum;
}

double energy(const RealField& omega) { return energy(analyze(omega)); }

double enstrophy(const SpectralField& omega) {
    return omega.grid.basis().area() * spectral_sum(omega, [](int, int) { return 1.0; });
}

double enstrophy(const RealField& omega) {
    double total = 0.0;
    for (double v : omega.samples) total += v * v;
    return total * omega.grid.cell_area();
}

double dirichlet_integral(const SpectralField& u) {
    const DualGram gram = gram_dual(u.grid.basis());
    double total = 0.0;
    for_each_mode(u.grid, [&](std::size_t idx, int i1, int j, int m, int n) {
        if (u.grid.is_nyquist(i1, j)) return;
        total += u.grid.column_weight(j) * kFourPiSq * gram.q(m, n) * std::norm(u.coeffs[idx]);
    });
    return u.grid.basis().area() * total;
}

double lp_norm(const RealField& f, double p) {
    if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "L^p norm needs p >= 1");
    double total = 0.0;
    if (p == 2.0) {
        for (double v : f.samples) total += v * v;
    } else {
        for (double v : f.samples) total += std::pow(std::abs(v), p);
    }
    return std::pow(total * f.grid.cell_area(), 1.0 / p);
}

double casimir(const RealField& omega, int m) {
    if (m < 1) throw Error(ErrorCode::BadExponent, "Casimir exponent must be >= 1");
    double total = 0.0;
    for (double v : omega.samples) {
        double term = v;
        for (int i = 1; i < m; ++i) term *= v;
        total += term;
    }
    return total * omega.grid.cell_area();
}

double energy_enstrophy_gap(const SpectralField& omega) {
    require_mean_zero(omega);
    const EigenspaceInfo info = classify_eigenspace(omega.grid.basis());
    const DualGram gram = gram_dual(omega.grid.basis());
    // Per mode: |F|^2 (1/lambda1 - 1/(4 pi^2 q)) >= 0; summing the differences
    // avoids cancellation between the two integrals.
    const double sum = spectral_sum(omega, [&](int m, int n) {
        if (m == 0 && n == 0) return 0.0;
        return 1.0 / info.lambda1 - 1.0 / (kFourPiSq * gram.q(m, n));
    });
    return omega.grid.basis().area() * sum;
}

double e1_mass_fraction(const SpectralField& omega) {
    const ShortestVectorSet s = shortest_vectors(omega.grid.basis());
    double outside = 0.0;
    double total = 0.0;
    for_each_mode(omega.grid, [&](std::size_t idx, int, int j, int m, int n) {
        const double w = omega.grid.column_weight(j) * std::norm(omega.coeffs[idx]);
        total += w;
        if (!in_shortest_set(s, m, n)) outside += w;
    });
    if (total == 0.0) return 0.0;
    return outside / total;
}

bool in_first_eigenspace(const SpectralField& omega, double threshold) {
    return e1_mass_fraction(omega) <= threshold;
}

}  // namespace torus
