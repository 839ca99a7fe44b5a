#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cars::fft {

// Unnormalized complex DFTs backed by FFTW.  Plans are cached per
// (size, direction) behind a mutex; execution is safe from multiple threads
// on distinct buffers.  Forward uses exp(-i 2 pi j k / n), backward exp(+i).

void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

inline std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) {
    std::vector<std::complex<double>> out(in.size());
    forward(in, out);
    return out;
}

inline std::vector<std::complex<double>> backward(std::span<const std::complex<double>> in) {
    std::vector<std::complex<double>> out(in.size());
    backward(in, out);
    return out;
}

std::size_t next_pow2(std::size_t n);

// Linear convolution out[t] = sum_j x[j] y[t-j], t in [0, nx+ny-1).
std::vector<std::complex<double>> linear_convolution(std::span<const std::complex<double>> x,
                                                     std::span<const std::complex<double>> y);

// Linear cross-correlation r[u + ny - 1] = sum_j x[j] conj(y[j - u]) for
// lags u in [-(ny-1), nx).  r has nx+ny-1 entries.
std::vector<std::complex<double>> linear_correlation(std::span<const std::complex<double>> x,
                                                     std::span<const std::complex<double>> y);

}  // namespace cars::fft
