#ifndef IKNO_AUTODIFF_HPP
#define IKNO_AUTODIFF_HPP

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "ikno/activation.hpp"
#include "ikno/spectral.hpp"
#include "ikno/tensor.hpp"

// Reverse-mode tape over dense tensors. Ops execute eagerly; when an operand
// requires gradients, a backward closure is recorded and replayed in reverse
// on backward(). Complex tensors carry complex cotangents with the
// convention gbar = dL/d(Re) + i dL/d(Im), so the adjoint of a complex linear
// map K is conj(K)^T.
//
// Graphs are rebuilt per step (one Tape per training batch); evaluation with
// no gradient-requiring leaves records nothing and reduces to plain forward
// computation.
namespace ikno::ad {

template <typename S>
struct Slot {
    Tensor<S> value;
    Tensor<S> grad;
    bool requires_grad = false;
    bool grad_alloc = false;

    void ensure_grad() {
        if (!grad_alloc) {
            grad = Tensor<S>(value.shape());
            grad_alloc = true;
        }
    }
};

template <typename T>
struct RVar {
    std::shared_ptr<Slot<T>> s;
    const Tensor<T>& value() const { return s->value; }
    const Tensor<T>& grad() const { return s->grad; }
    bool has_grad() const { return s->grad_alloc; }
};

template <typename T>
struct CVar {
    std::shared_ptr<Slot<std::complex<T>>> s;
    const Tensor<std::complex<T>>& value() const { return s->value; }
    const Tensor<std::complex<T>>& grad() const { return s->grad; }
    bool has_grad() const { return s->grad_alloc; }
};

template <typename T>
class Tape {
public:
    RVar<T> leaf(Tensor<T> v, bool requires_grad = false);
    CVar<T> cleaf(Tensor<std::complex<T>> v, bool requires_grad = false);

    RVar<T> add(const RVar<T>& a, const RVar<T>& b);
    RVar<T> sub(const RVar<T>& a, const RVar<T>& b);
    RVar<T> activation(const RVar<T>& a, Activation act);

    // channel-axis (last axis) edits
    RVar<T> slice_last(const RVar<T>& a, std::size_t from, std::size_t to);
    RVar<T> concat_last(const RVar<T>& a, const RVar<T>& b);
    RVar<T> pad_last(const RVar<T>& a, std::size_t count);

    // position-wise linear maps
    RVar<T> fiber_linear(const RVar<T>& w, const RVar<T>& b, const RVar<T>& x);
    RVar<T> conv1x1(const RVar<T>& w, const RVar<T>& b, const RVar<T>& x);

    // [B, S..., C] <-> [B, C, S...]
    RVar<T> channel_first(const RVar<T>& a);
    RVar<T> channel_last(const RVar<T>& a);

    // spectral path
    CVar<T> rfft(const RVar<T>& a, std::size_t rank);
    RVar<T> irfft(const CVar<T>& a, Shape sizes);
    CVar<T> truncate(const CVar<T>& a, spectral::TruncationSpec spec);
    CVar<T> embed(const CVar<T>& a, spectral::TruncationSpec spec, Shape target_spectral);
    CVar<T> koopman(const CVar<T>& k, const CVar<T>& x, std::size_t power);

    // mean over (samples, steps) of ||pred - target|| / ||target||, norms over
    // the spatial fiber of each (sample, step); scalar output of shape [1].
    RVar<T> relative_l2_loss(const RVar<T>& pred, const Tensor<T>& target);

    void backward(const RVar<T>& scalar_loss);

    std::size_t recorded_ops() const { return ops_.size(); }

private:
    void record(std::function<void()> f) { ops_.push_back(std::move(f)); }
    std::vector<std::function<void()>> ops_;
};

}  // namespace ikno::ad

#endif  // IKNO_AUTODIFF_HPP
