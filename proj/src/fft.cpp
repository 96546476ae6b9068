#include "torus/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <utility>

namespace torus {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct FftPlan2D::Impl {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

FftPlan2D::FftPlan2D(int n1, int n2) : n1_(n1), n2_(n2), impl_(std::make_unique<Impl>()) {
    std::lock_guard lock(planner_mutex());
    impl_->real = fftw_alloc_real(real_size());
    impl_->spec = fftw_alloc_complex(complex_size());
    impl_->fwd = fftw_plan_dft_r2c_2d(n1, n2, impl_->real, impl_->spec, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_c2r_2d(n1, n2, impl_->spec, impl_->real, FFTW_ESTIMATE);
}

FftPlan2D::~FftPlan2D() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->real);
    fftw_free(impl_->spec);
}

void FftPlan2D::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    std::copy(in.begin(), in.end(), impl_->real);
    fftw_execute(impl_->fwd);
    std::memcpy(static_cast<void*>(out.data()), impl_->spec, complex_size() * sizeof(fftw_complex));
}

void FftPlan2D::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    std::memcpy(impl_->spec, in.data(), complex_size() * sizeof(fftw_complex));
    fftw_execute(impl_->bwd);
    std::copy(impl_->real, impl_->real + real_size(), out.begin());
}

FftPlan2D& fft_for(int n1, int n2) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<FftPlan2D>> cache;
    auto& slot = cache[{n1, n2}];
    if (!slot) slot = std::make_unique<FftPlan2D>(n1, n2);
    return *slot;
}

}  // namespace torus
