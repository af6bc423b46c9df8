#ifndef IKNO_FFT_HPP
#define IKNO_FFT_HPP

#include <complex>
#include <span>

#include "ikno/tensor.hpp"

// Real-input spectral transforms on the trailing `rank` axes of a tensor,
// with all leading axes treated as batch. Backed by FFTW complex-to-complex
// plans so both directions and both adjoints are exactly the linear maps
// written below.
//
// Conventions:
//   rfft_nd:  C_k = (1/N) * sum_j v_j exp(-2*pi*i <j,k>/R), stored one-sided
//             on the last transformed axis (H = floor(R_last/2) + 1 entries),
//             full on the others. N = total number of transformed points.
//   irfft_nd: v_j = Re( sum_k X_k exp(+2*pi*i <j,k>/R) ), where X is the full
//             spectrum obtained from the one-sided input by conjugate
//             mirroring of the absent entries.
//
// The 1/N forward scale makes retained low-frequency coefficients of a fixed
// band-limited field independent of the sampling resolution; the inverse
// carries the matching factor of the output point count. Round trip at equal
// sizes is the identity.
namespace ikno::fft {

// One-sided spectral shape for the given spatial sizes.
Shape half_shape(std::span<const std::size_t> sizes);

template <typename T>
Tensor<std::complex<T>> rfft_nd(const Tensor<T>& v, std::size_t rank);

template <typename T>
Tensor<T> irfft_nd(const Tensor<std::complex<T>>& spectrum,
                   std::span<const std::size_t> sizes);

// Adjoint of rfft_nd as a map R^N -> R^{2M}: given a cotangent on the
// one-sided spectrum, returns the cotangent on the real input of the stated
// spatial sizes.
template <typename T>
Tensor<T> rfft_adjoint(const Tensor<std::complex<T>>& spectrum_cotangent,
                       std::span<const std::size_t> sizes);

// Adjoint of irfft_nd: cotangent on the real output -> cotangent on the
// one-sided spectrum (conjugate contributions of mirrored entries folded in).
template <typename T>
Tensor<std::complex<T>> irfft_adjoint(const Tensor<T>& output_cotangent,
                                      std::size_t rank);

}  // namespace ikno::fft

#endif  // IKNO_FFT_HPP
