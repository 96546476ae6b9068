#pragma once

// Thin RAII wrapper over FFTW real-to-complex 2D transforms. Plans are created
// under a process-wide lock (the FFTW planner is not thread safe); execution
// works on plan-owned aligned buffers so one plan must not be shared between
// threads. Use `fft_for` to get the calling thread's cached plan.

#include <complex>
#include <memory>
#include <span>

namespace torus {

class FftPlan2D {
public:
    FftPlan2D(int n1, int n2);
    ~FftPlan2D();
    FftPlan2D(const FftPlan2D&) = delete;
    FftPlan2D& operator=(const FftPlan2D&) = delete;

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    std::size_t real_size() const { return static_cast<std::size_t>(n1_) * n2_; }
    std::size_t complex_size() const { return static_cast<std::size_t>(n1_) * (n2_ / 2 + 1); }

    /// Unnormalized forward transform: out = sum_j in_j exp(-2 pi i k.j / N).
    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    /// Unnormalized inverse transform; `in` is left untouched.
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

private:
    struct Impl;
    int n1_;
    int n2_;
    std::unique_ptr<Impl> impl_;
};

FftPlan2D& fft_for(int n1, int n2);

}  // namespace torus
