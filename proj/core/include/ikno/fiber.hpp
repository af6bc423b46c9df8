#ifndef IKNO_FIBER_HPP
#define IKNO_FIBER_HPP

#include "ikno/parallel.hpp"
#include "ikno/tensor.hpp"

// Position-wise linear maps over channel fibers. Two layouts appear in the
// pipeline: channel-last [..., C] (observable network side) and channel-first
// [B, C, S...] (spectral side, where the map is a 1x1 convolution).
namespace ikno {

// y[p, :] = W x[p, :] + b with W [out, in], x [..., in].
template <typename T>
Tensor<T> fiber_linear(const Tensor<T>& w, const Tensor<T>& b, const Tensor<T>& x) {
    if (w.rank() != 2 || x.rank() < 1 || x.shape().back() != w.dim(1) || b.size() != w.dim(0))
        throw ShapeError("fiber_linear: W " + shape_str(w.shape()) + ", b " + shape_str(b.shape()) +
                         ", x " + shape_str(x.shape()));
    const std::size_t in = w.dim(1), out = w.dim(0);
    const std::size_t pos = x.size() / in;

    Shape out_shape = x.shape();
    out_shape.back() = out;
    Tensor<T> y(out_shape);
    const T* wd = w.data();
    const T* bd = b.data();
    parallel_for(pos, [&](std::size_t p) {
        const T* xi = x.data() + p * in;
        T* yi = y.data() + p * out;
        for (std::size_t o = 0; o < out; ++o) {
            T acc = bd[o];
            const T* wrow = wd + o * in;
            for (std::size_t i = 0; i < in; ++i) acc += wrow[i] * xi[i];
            yi[o] = acc;
        }
    });
    return y;
}

// Accumulating adjoints of fiber_linear.
template <typename T>
void fiber_linear_vjp(const Tensor<T>& w, const Tensor<T>& x, const Tensor<T>& gy, Tensor<T>* gw,
                      Tensor<T>* gb, Tensor<T>* gx) {
    const std::size_t in = w.dim(1), out = w.dim(0);
    const std::size_t pos = x.size() / in;
    const T* wd = w.data();
    if (gx) {
        parallel_for(pos, [&](std::size_t p) {
            const T* g = gy.data() + p * out;
            T* xo = gx->data() + p * in;
            for (std::size_t o = 0; o < out; ++o) {
                const T go = g[o];
                const T* wrow = wd + o * in;
                for (std::size_t i = 0; i < in; ++i) xo[i] += wrow[i] * go;
            }
        });
    }
    if (gw) {
        // one writer per (o, i) pair, summed over positions in fixed order
        parallel_for(out, [&](std::size_t o) {
            T* wrow = gw->data() + o * in;
            for (std::size_t p = 0; p < pos; ++p) {
                const T go = gy.data()[p * out + o];
                const T* xi = x.data() + p * in;
                for (std::size_t i = 0; i < in; ++i) wrow[i] += xi[i] * go;
            }
        });
    }
    if (gb) {
        for (std::size_t p = 0; p < pos; ++p) {
            const T* g = gy.data() + p * out;
            for (std::size_t o = 0; o < out; ++o) (*gb)[o] += g[o];
        }
    }
}

// y[b, o, s] = sum_i W[o, i] x[b, i, s] + bias[o]; x is [B, C, S...].
template <typename T>
Tensor<T> conv1x1(const Tensor<T>& w, const Tensor<T>& b, const Tensor<T>& x) {
    if (w.rank() != 2 || x.rank() < 3 || x.dim(1) != w.dim(1) || b.size() != w.dim(0))
        throw ShapeError("conv1x1: W " + shape_str(w.shape()) + ", x " + shape_str(x.shape()));
    const std::size_t in = w.dim(1), out = w.dim(0);
    const std::size_t batch = x.dim(0);
    const std::size_t space = x.size() / (batch * in);

    Shape out_shape = x.shape();
    out_shape[1] = out;
    Tensor<T> y(out_shape);
    parallel_for(batch * out, [&](std::size_t bo) {
        const std::size_t bb = bo / out, o = bo % out;
        T* yo = y.data() + (bb * out + o) * space;
        for (std::size_t s = 0; s < space; ++s) yo[s] = b[o];
        for (std::size_t i = 0; i < in; ++i) {
            const T wv = w[o * in + i];
            const T* xi = x.data() + (bb * in + i) * space;
            for (std::size_t s = 0; s < space; ++s) yo[s] += wv * xi[s];
        }
    });
    return y;
}

template <typename T>
void conv1x1_vjp(const Tensor<T>& w, const Tensor<T>& x, const Tensor<T>& gy, Tensor<T>* gw,
                 Tensor<T>* gb, Tensor<T>* gx) {
    const std::size_t in = w.dim(1), out = w.dim(0);
    const std::size_t batch = x.dim(0);
    const std::size_t space = x.size() / (batch * in);
    if (gx) {
        parallel_for(batch * in, [&](std::size_t bi) {
            const std::size_t bb = bi / in, i = bi % in;
            T* xo = gx->data() + (bb * in + i) * space;
            for (std::size_t o = 0; o < out; ++o) {
                const T wv = w[o * in + i];
                const T* g = gy.data() + (bb * out + o) * space;
                for (std::size_t s = 0; s < space; ++s) xo[s] += wv * g[s];
            }
        });
    }
    if (gw) {
        parallel_for(out, [&](std::size_t o) {
            for (std::size_t i = 0; i < in; ++i) {
                T acc{};
                for (std::size_t bb = 0; bb < batch; ++bb) {
                    const T* g = gy.data() + (bb * out + o) * space;
                    const T* xi = x.data() + (bb * in + i) * space;
                    for (std::size_t s = 0; s < space; ++s) acc += g[s] * xi[s];
                }
                (*gw)[o * in + i] += acc;
            }
        });
    }
    if (gb) {
        for (std::size_t o = 0; o < out; ++o) {
            T acc{};
            for (std::size_t bb = 0; bb < batch; ++bb) {
                const T* g = gy.data() + (bb * out + o) * space;
                for (std::size_t s = 0; s < space; ++s) acc += g[s];
            }
            (*gb)[o] += acc;
        }
    }
}

}  // namespace ikno

#endif  // IKNO_FIBER_HPP
