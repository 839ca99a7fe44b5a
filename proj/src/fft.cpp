#include "cars/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "cars/errors.hpp"

namespace cars::fft {

namespace {

// FFTW planning is not thread-safe; execution via fftw_execute_dft on caller
// buffers is.  Plans are created once per (size, sign) with
// FFTW_ESTIMATE | FFTW_UNALIGNED so they apply to any buffer.
fftw_plan plan_for(std::size_t n, int sign) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;

    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    fftw_complex* scratch = fftw_alloc_complex(n);
    if (scratch == nullptr) throw NumericsError("fft: allocation failure during planning");
    fftw_plan plan =
        fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw NumericsError("fft: planner failure");
    cache.emplace(key, plan);
    return plan;
}

void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign) {
    if (in.size() != out.size()) throw NumericsError("fft: size mismatch");
    if (in.empty()) return;
    fftw_plan plan = plan_for(in.size(), sign);
    // std::complex<double> is layout-compatible with fftw_complex.
    auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan, in_ptr, out_ptr);
}

}  // namespace

void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    execute(in, out, FFTW_FORWARD);
}

void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    execute(in, out, FFTW_BACKWARD);
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<std::complex<double>> linear_convolution(std::span<const std::complex<double>> x,
                                                     std::span<const std::complex<double>> y) {
    const std::size_t nx = x.size(), ny = y.size();
    const std::size_t len = nx + ny - 1;
    const std::size_t m = next_pow2(len);

    std::vector<std::complex<double>> a(m), b(m);
    std::copy(x.begin(), x.end(), a.begin());
    std::copy(y.begin(), y.end(), b.begin());

    forward(a, a);
    forward(b, b);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    backward(a, a);

    std::vector<std::complex<double>> out(len);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t t = 0; t < len; ++t) out[t] = a[t] * scale;
    return out;
}

std::vector<std::complex<double>> linear_correlation(std::span<const std::complex<double>> x,
                                                     std::span<const std::complex<double>> y) {
    const std::size_t nx = x.size(), ny = y.size();
    const std::size_t len = nx + ny - 1;
    const std::size_t m = next_pow2(len);

    std::vector<std::complex<double>> a(m), b(m);
    std::copy(x.begin(), x.end(), a.begin());
    std::copy(y.begin(), y.end(), b.begin());

    forward(a, a);
    forward(b, b);
    for (std::size_t i = 0; i < m; ++i) a[i] *= std::conj(b[i]);
    backward(a, a);

    // circular index m+u holds negative lags u
    std::vector<std::complex<double>> out(len);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < len; ++i) {
        const long long u = static_cast<long long>(i) - static_cast<long long>(ny - 1);
        const std::size_t idx = static_cast<std::size_t>(u >= 0 ? u : static_cast<long long>(m) + u);
        out[i] = a[idx] * scale;
    }
    return out;
}

}  // namespace cars::fft
