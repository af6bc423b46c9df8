#ifndef IKNO_SPECTRAL_HPP
#define IKNO_SPECTRAL_HPP

#include <complex>
#include <span>
#include <vector>

#include "ikno/activation.hpp"
#include "ikno/rng.hpp"
#include "ikno/tensor.hpp"

// Frequency-space Koopman layer. All tensors here are channel-first:
// fields [B, O, R_1, ..., R_dx], spectra [B, O, R_1, ..., floor(R_dx/2)+1].
//
// Mode retention keeps, per full axis, the M lowest non-negative and the M
// highest (negative-frequency) indices, and the first M entries of the
// one-sided last axis; the retained block is therefore resolution-independent
// with shape [2M_1, ..., 2M_{dx-1}, M_dx]. Each retained mode carries its own
// dense O x O complex block applied p times.
namespace ikno::spectral {

struct TruncationSpec {
    std::vector<std::size_t> modes;  // M_1..M_dx
    std::size_t power = 2;           // p

    void validate() const;
    // Feasibility against spatial sizes: 2*M_i <= R_i on full axes and
    // M_dx <= floor(R_dx/2)+1 on the one-sided axis.
    void validate_for(std::span<const std::size_t> spatial_sizes) const;
    // [2M_1, ..., 2M_{dx-1}, M_dx]
    Shape retained_shape() const;
};

template <typename T>
struct KoopmanLayerParams {
    Tensor<std::complex<T>> k;  // [O, O, retained...]
    Tensor<T> w_hf;             // [O, O], the 1x1 convolution
    Tensor<T> b_hf;             // [O]
    Activation gamma = Activation::Gelu;

    std::size_t observable_dim() const { return k.dim(0); }

    // K entries have real/imag parts uniform in +-1/O; w_hf fan-in uniform,
    // biases zero.
    static KoopmanLayerParams<T> init(std::size_t observable_dim, const TruncationSpec& spec,
                                      Activation gamma, Rng& rng);
    void validate(const TruncationSpec& spec) const;
};

// Pure mode selection [B, O, spectral...] -> [B, O, retained...].
template <typename T>
Tensor<std::complex<T>> truncate(const TruncationSpec& spec, const Tensor<std::complex<T>>& v);

// Per retained mode w: y[b, :, w] = K[:, :, w]^p x[b, :, w].
template <typename T>
Tensor<std::complex<T>> apply_koopman(const KoopmanLayerParams<T>& params,
                                      const TruncationSpec& spec,
                                      const Tensor<std::complex<T>>& truncated);

// Scatter retained coefficients back to their frequency positions inside a
// (possibly larger) one-sided spectral shape; all other entries zero.
template <typename T>
Tensor<std::complex<T>> embed_back(const TruncationSpec& spec,
                                   const Tensor<std::complex<T>>& truncated,
                                   std::span<const std::size_t> target_spectral_shape);

// Position-wise channel map W v + b (kernel-size-1 convolution).
template <typename T>
Tensor<T> high_freq_path(const KoopmanLayerParams<T>& params, const Tensor<T>& v);

// gamma( irfft(embed(K^p truncate(rfft(v)))) + W v + b ). `output_sizes` must
// equal the input sizes; higher-resolution inference feeds the
// higher-resolution field through the whole layer instead.
template <typename T>
Tensor<T> spectral_layer(const KoopmanLayerParams<T>& params, const TruncationSpec& spec,
                         const Tensor<T>& v, std::span<const std::size_t> output_sizes);

}  // namespace ikno::spectral

#endif  // IKNO_SPECTRAL_HPP
