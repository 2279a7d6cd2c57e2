#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>

#include <fftw3.h>

namespace snls::detail {

using cplx = std::complex<double>;

// Owns a forward/backward pair of unnormalized n x n FFTW plans. Planned
// with FFTW_UNALIGNED so they can be executed on any std::vector storage.
class FftPlan2d {
public:
    explicit FftPlan2d(int n) : n_(n) {
        const auto count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
        auto* scratch_in = fftw_alloc_complex(count);
        auto* scratch_out = fftw_alloc_complex(count);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft_2d(n, n, scratch_in, scratch_out, FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_2d(n, n, scratch_in, scratch_out, FFTW_BACKWARD, flags);
        fftw_free(scratch_in);
        fftw_free(scratch_out);
    }

    FftPlan2d(const FftPlan2d&) = delete;
    FftPlan2d& operator=(const FftPlan2d&) = delete;

    ~FftPlan2d() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    int size() const noexcept { return n_; }

    // out_k = sum_x in_x exp(-i k.x)
    void forward(std::span<const cplx> in, std::span<cplx> out) const {
        fftw_execute_dft(forward_, as_fftw(in), reinterpret_cast<fftw_complex*>(out.data()));
    }

    // out_x = sum_k in_k exp(+i k.x), no 1/n^2 factor
    void backward(std::span<const cplx> in, std::span<cplx> out) const {
        fftw_execute_dft(backward_, as_fftw(in), reinterpret_cast<fftw_complex*>(out.data()));
    }

private:
    // fftw_execute_dft takes a non-const input pointer but does not write to
    // it for out-of-place transforms.
    static fftw_complex* as_fftw(std::span<const cplx> s) {
        return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(s.data()));
    }

    int n_;
    fftw_plan forward_{};
    fftw_plan backward_{};
};

// The FFTW planner is not thread-safe; execution is.
inline const FftPlan2d& plan_for(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<FftPlan2d>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<FftPlan2d>(n);
    }
    return *slot;
}

} // namespace snls::detail
