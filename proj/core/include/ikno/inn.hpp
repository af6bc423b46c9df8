#ifndef IKNO_INN_HPP
#define IKNO_INN_HPP

#include <utility>
#include <vector>

#include "ikno/activation.hpp"
#include "ikno/rng.hpp"
#include "ikno/tensor.hpp"

// Invertible observable network: a stack of additive coupling blocks with
// zero-padding between stages. The forward map lifts a channel fiber of
// length n_s to an observable fiber of length O = 2*c_d; the inverse is exact
// in closed form under the same parameters. All operations act on the last
// (channel) axis of a tensor and are shared across batch and spatial
// positions.
namespace ikno::inn {

struct InnConfig {
    std::size_t depth = 2;                 // number of coupling blocks d
    std::vector<std::size_t> block_dims;   // c_1..c_d, non-decreasing
    std::vector<std::size_t> hidden_dims;  // h_1..h_d
    std::size_t input_dim = 0;             // n_s (the window size in model use)
    Activation activation = Activation::Tanh;

    void validate() const;
    std::size_t observable_dim() const { return 2 * block_dims.back(); }

    // Channel sizes entering block i (0-based) before zero-padding:
    // block 0 receives the split halves, later blocks both carry c_{i-1}.
    std::pair<std::size_t, std::size_t> block_entry_sizes(std::size_t i) const;

    // Constant block/hidden dims, the minimal-hyperparameter layout.
    static InnConfig uniform(std::size_t input_dim, std::size_t depth, std::size_t block_dim,
                             std::size_t hidden_dim, Activation act = Activation::Tanh);
};

// Three-layer MLP with a residual connection; input and output width both
// c_i, hidden width h_i.
template <typename T>
struct CouplingMlp {
    Tensor<T> w1, b1;  // [h, c], [h]
    Tensor<T> w2, b2;  // [h, h], [h]
    Tensor<T> w3, b3;  // [c, h], [c]
};

template <typename T>
struct InnParams {
    InnConfig config;
    std::vector<CouplingMlp<T>> blocks;

    // Uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) weights, zero biases.
    static InnParams<T> init(const InnConfig& cfg, Rng& rng);
};

struct PadCounts {
    std::size_t first = 0;
    std::size_t second = 0;
};

// x[..., 0:floor(m/2)] and the remainder. Requires m >= 2.
template <typename T>
std::pair<Tensor<T>, Tensor<T>> split(const Tensor<T>& x);

// Concatenation along the channel axis; merge(split(x)) == x bit-exactly.
template <typename T>
Tensor<T> merge(const Tensor<T>& a, const Tensor<T>& b);

// Tail zero-padding of both channels to width c; the returned counts make the
// inverse truncation exact and are derivable from the config alone.
template <typename T>
std::tuple<Tensor<T>, Tensor<T>, PadCounts> zero_concat(const Tensor<T>& a, const Tensor<T>& b,
                                                        std::size_t c);

template <typename T>
Tensor<T> pad_tail(const Tensor<T>& x, std::size_t count);

template <typename T>
Tensor<T> drop_tail(const Tensor<T>& x, std::size_t count);

// H(x) = W3 act(W2 act(W1 x + b1) + b2) + b3 + x, fiber-wise.
template <typename T>
Tensor<T> mlp_eval(const CouplingMlp<T>& mlp, Activation act, const Tensor<T>& x);

// (yt, yb) -> (yb, H(yb) + yt)
template <typename T>
std::pair<Tensor<T>, Tensor<T>> coupling_forward(const Tensor<T>& yt, const Tensor<T>& yb,
                                                 const CouplingMlp<T>& mlp, Activation act);

// (xt, xb) -> (xb - H(xt), xt)
template <typename T>
std::pair<Tensor<T>, Tensor<T>> coupling_inverse(const Tensor<T>& xt, const Tensor<T>& xb,
                                                 const CouplingMlp<T>& mlp, Activation act);

// Full forward map: [..., n_s] -> [..., O].
template <typename T>
Tensor<T> forward(const Tensor<T>& x, const InnParams<T>& params);

// Exact inverse: [..., O] -> [..., n_s]; inverse(forward(x)) == x up to
// floating-point rounding for any parameter values.
template <typename T>
Tensor<T> inverse(const Tensor<T>& y, const InnParams<T>& params);

}  // namespace ikno::inn

#endif  // IKNO_INN_HPP
