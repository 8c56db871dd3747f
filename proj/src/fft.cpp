#include "fracheat/fft.hpp"

#include "fracheat/errors.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>

namespace fracheat::fft {

namespace {

std::mutex planner_mutex; // the FFTW planner is not reentrant

struct PlanDeleter {
    void operator()(fftw_plan_s *p) const {
        std::lock_guard lock(planner_mutex);
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct BufferDeleter {
    void operator()(void *p) const { fftw_free(p); }
};
template <class T> using Buffer = std::unique_ptr<T[], BufferDeleter>;

template <class T> Buffer<T> allocate(std::size_t n) {
    auto *p = static_cast<T *>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)));
    if (!p) throw std::bad_alloc();
    return Buffer<T>(p);
}

} // namespace

std::vector<std::complex<double>> forward(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) throw DomainError("fft::forward: empty input");
    auto in = allocate<double>(n);
    auto out = allocate<fftw_complex>(n / 2 + 1);
    Plan plan;
    {
        std::lock_guard lock(planner_mutex);
        plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    std::copy(x.begin(), x.end(), in.get());
    fftw_execute(plan.get());
    std::vector<std::complex<double>> c(n / 2 + 1);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = {out[k][0], out[k][1]};
    return c;
}

std::vector<double> inverse(std::span<const std::complex<double>> c, std::size_t n) {
    if (n == 0 || c.size() != n / 2 + 1) throw DomainError("fft::inverse: coefficient count must be n/2 + 1");
    auto in = allocate<fftw_complex>(c.size());
    auto out = allocate<double>(n);
    Plan plan;
    {
        std::lock_guard lock(planner_mutex);
        plan.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    for (std::size_t k = 0; k < c.size(); ++k) {
        in[k][0] = c[k].real();
        in[k][1] = c[k].imag();
    }
    fftw_execute(plan.get()); // c2r destroys its input; fine, it is a private copy
    std::vector<double> x(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = out[i] * scale;
    return x;
}

std::vector<double> circular_convolve(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("fft::circular_convolve: length mismatch");
    auto ca = forward(a);
    const auto cb = forward(b);
    for (std::size_t k = 0; k < ca.size(); ++k) ca[k] *= cb[k];
    return inverse(ca, a.size());
}

} // namespace fracheat::fft
