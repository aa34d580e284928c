#include "wavetwin/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace wavetwin::fft {
namespace {

// FFTW planning is not thread-safe; execution of a private plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

ComplexMap transform(const ComplexMap& x, int sign) {
    ComplexMap out(x.rows(), x.cols());
    if (x.empty()) return out;
    auto* in = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(x.data().data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data().data());
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_2d(x.rows(), x.cols(), in, dst, sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

ComplexMap forward(const ComplexMap& x) { return transform(x, FFTW_FORWARD); }

ComplexMap inverse(const ComplexMap& X) {
    ComplexMap out = transform(X, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(X.size());
    for (auto& v : out.data()) v *= scale;
    return out;
}

double bin_frequency(int k, int n) {
    int kk = k % n;
    if (kk < 0) kk += n;
    if (2 * kk >= n) kk -= n;
    return 2.0 * std::numbers::pi * kk / n;
}

}  // namespace wavetwin::fft
