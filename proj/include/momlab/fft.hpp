#pragma once

// Thin RAII layer over FFTW. Plans are created once per (size, direction)
// under a lock and executed with the new-array interface, which FFTW
// documents as thread-safe.

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace momlab::fft {

using cvec = std::vector<std::complex<double>>;

namespace detail {

enum class Kind { Forward, Backward, RealToComplex };

inline fftw_plan plan_for(Kind kind, int n)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, fftw_plan> plans;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(static_cast<int>(kind), n);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = nullptr;
    if (kind == Kind::RealToComplex) {
        std::vector<double> in(n);
        cvec out(n / 2 + 1);
        p = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), flags);
    } else {
        // complex transforms run in place, and the plan must match
        cvec buf(n);
        auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
        p = fftw_plan_dft_1d(n, ptr, ptr, kind == Kind::Forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
    }
    plans.emplace(key, p);
    return p;
}

} // namespace detail

/// In-place unnormalized DFT: X_k = sum_l x_l exp(-+ 2 pi i k l / n).
inline void transform(cvec& data, bool forward)
{
    const int n = static_cast<int>(data.size());
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(detail::plan_for(forward ? detail::Kind::Forward : detail::Kind::Backward, n), ptr, ptr);
}

/// Unnormalized forward DFT of real samples; returns bins 0..n/2.
inline cvec real_forward(std::vector<double> samples)
{
    const int n = static_cast<int>(samples.size());
    cvec out(n / 2 + 1);
    fftw_execute_dft_r2c(detail::plan_for(detail::Kind::RealToComplex, n), samples.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

} // namespace momlab::fft
