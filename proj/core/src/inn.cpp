#include "ikno/inn.hpp"

#include <cmath>

#include "ikno/errors.hpp"
#include "ikno/fiber.hpp"
#include "ikno/parallel.hpp"

namespace ikno::inn {

void InnConfig::validate() const {
    if (depth < 1) throw ConfigError("inn: depth must be >= 1");
    if (input_dim < 2) throw ConfigError("inn: input_dim must be >= 2 (split needs two channels)");
    if (block_dims.size() != depth || hidden_dims.size() != depth)
        throw ConfigError("inn: need one block_dim and hidden_dim per block");
    const std::size_t half_up = (input_dim + 1) / 2;
    if (block_dims.front() < half_up)
        throw ConfigError("inn: c_1 = " + std::to_string(block_dims.front()) +
                          " must be >= ceil(n_s/2) = " + std::to_string(half_up));
    for (std::size_t i = 1; i < depth; ++i)
        if (block_dims[i] < block_dims[i - 1])
            throw ConfigError("inn: block dims must be non-decreasing");
    for (std::size_t i = 0; i < depth; ++i)
        if (block_dims[i] < 1 || hidden_dims[i] < 1)
            throw ConfigError("inn: block and hidden dims must be positive");
}

std::pair<std::size_t, std::size_t> InnConfig::block_entry_sizes(std::size_t i) const {
    if (i == 0) return {input_dim / 2, input_dim - input_dim / 2};
    return {block_dims[i - 1], block_dims[i - 1]};
}

InnConfig InnConfig::uniform(std::size_t input_dim, std::size_t depth, std::size_t block_dim,
                             std::size_t hidden_dim, Activation act) {
    InnConfig cfg;
    cfg.depth = depth;
    cfg.input_dim = input_dim;
    cfg.block_dims.assign(depth, block_dim);
    cfg.hidden_dims.assign(depth, hidden_dim);
    cfg.activation = act;
    cfg.validate();
    return cfg;
}

namespace {

template <typename T>
Tensor<T> uniform_weights(Rng& rng, std::size_t out, std::size_t in) {
    Tensor<T> w({out, in});
    const double bound = std::sqrt(1.0 / static_cast<double>(in));
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = static_cast<T>(rng.uniform(-bound, bound));
    return w;
}

template <typename T>
void check_last_dim(const Tensor<T>& x, std::size_t want, const char* what) {
    if (x.rank() < 1 || x.shape().back() != want)
        throw ShapeError(std::string(what) + ": expected channel width " + std::to_string(want) +
                         ", got " + shape_str(x.shape()));
}

}  // namespace

template <typename T>
InnParams<T> InnParams<T>::init(const InnConfig& cfg, Rng& rng) {
    cfg.validate();
    InnParams<T> p;
    p.config = cfg;
    p.blocks.reserve(cfg.depth);
    for (std::size_t i = 0; i < cfg.depth; ++i) {
        const std::size_t c = cfg.block_dims[i], h = cfg.hidden_dims[i];
        CouplingMlp<T> m;
        m.w1 = uniform_weights<T>(rng, h, c);
        m.b1 = Tensor<T>({h});
        m.w2 = uniform_weights<T>(rng, h, h);
        m.b2 = Tensor<T>({h});
        m.w3 = uniform_weights<T>(rng, c, h);
        m.b3 = Tensor<T>({c});
        p.blocks.push_back(std::move(m));
    }
    return p;
}

template <typename T>
std::pair<Tensor<T>, Tensor<T>> split(const Tensor<T>& x) {
    if (x.rank() < 1 || x.shape().back() < 2)
        throw ShapeError("split: channel width must be >= 2, got " + shape_str(x.shape()));
    const std::size_t m = x.shape().back();
    const std::size_t m1 = m / 2, m2 = m - m1;
    const std::size_t fibers = x.size() / m;

    Shape s1 = x.shape(), s2 = x.shape();
    s1.back() = m1;
    s2.back() = m2;
    Tensor<T> a(s1), b(s2);
    for (std::size_t f = 0; f < fibers; ++f) {
        const T* src = x.data() + f * m;
        std::copy_n(src, m1, a.data() + f * m1);
        std::copy_n(src + m1, m2, b.data() + f * m2);
    }
    return {std::move(a), std::move(b)};
}

template <typename T>
Tensor<T> merge(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.rank() != b.rank() ||
        !std::equal(a.shape().begin(), a.shape().end() - 1, b.shape().begin()))
        throw ShapeError("merge: leading shapes differ, " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
    const std::size_t ca = a.shape().back(), cb = b.shape().back();
    Shape s = a.shape();
    s.back() = ca + cb;
    Tensor<T> y(s);
    const std::size_t fibers = y.size() / (ca + cb);
    for (std::size_t f = 0; f < fibers; ++f) {
        std::copy_n(a.data() + f * ca, ca, y.data() + f * (ca + cb));
        std::copy_n(b.data() + f * cb, cb, y.data() + f * (ca + cb) + ca);
    }
    return y;
}

template <typename T>
Tensor<T> pad_tail(const Tensor<T>& x, std::size_t count) {
    if (count == 0) return x;
    const std::size_t c = x.shape().back();
    Shape s = x.shape();
    s.back() = c + count;
    Tensor<T> y(s);
    const std::size_t fibers = x.size() / c;
    for (std::size_t f = 0; f < fibers; ++f)
        std::copy_n(x.data() + f * c, c, y.data() + f * (c + count));
    return y;
}

template <typename T>
Tensor<T> drop_tail(const Tensor<T>& x, std::size_t count) {
    if (count == 0) return x;
    const std::size_t c = x.shape().back();
    if (c <= count) throw ShapeError("drop_tail: cannot remove all channels");
    Shape s = x.shape();
    s.back() = c - count;
    Tensor<T> y(s);
    const std::size_t fibers = y.size() / (c - count);
    for (std::size_t f = 0; f < fibers; ++f)
        std::copy_n(x.data() + f * c, c - count, y.data() + f * (c - count));
    return y;
}

template <typename T>
std::tuple<Tensor<T>, Tensor<T>, PadCounts> zero_concat(const Tensor<T>& a, const Tensor<T>& b,
                                                        std::size_t c) {
    const std::size_t ca = a.shape().back(), cb = b.shape().back();
    if (c < ca || c < cb)
        throw ShapeError("zero_concat: target width " + std::to_string(c) +
                         " smaller than inputs (" + std::to_string(ca) + ", " +
                         std::to_string(cb) + ")");
    PadCounts pads{c - ca, c - cb};
    return {pad_tail(a, pads.first), pad_tail(b, pads.second), pads};
}

template <typename T>
Tensor<T> mlp_eval(const CouplingMlp<T>& mlp, Activation act, const Tensor<T>& x) {
    check_last_dim(x, mlp.w1.dim(1), "mlp_eval");
    const std::size_t c = mlp.w1.dim(1), h = mlp.w1.dim(0);
    const std::size_t fibers = x.size() / c;

    Tensor<T> y = x;  // residual term
    const T* w1 = mlp.w1.data();
    const T* w2 = mlp.w2.data();
    const T* w3 = mlp.w3.data();
    parallel_for(fibers, [&](std::size_t f) {
        const T* xi = x.data() + f * c;
        T* yo = y.data() + f * c;
        std::vector<T> t1(h), t2(h);
        for (std::size_t o = 0; o < h; ++o) {
            T acc = mlp.b1[o];
            const T* row = w1 + o * c;
            for (std::size_t i = 0; i < c; ++i) acc += row[i] * xi[i];
            t1[o] = activate(act, acc);
        }
        for (std::size_t o = 0; o < h; ++o) {
            T acc = mlp.b2[o];
            const T* row = w2 + o * h;
            for (std::size_t i = 0; i < h; ++i) acc += row[i] * t1[i];
            t2[o] = activate(act, acc);
        }
        for (std::size_t o = 0; o < c; ++o) {
            T acc = mlp.b3[o];
            const T* row = w3 + o * h;
            for (std::size_t i = 0; i < h; ++i) acc += row[i] * t2[i];
            yo[o] += acc;
        }
    });
    return y;
}

template <typename T>
std::pair<Tensor<T>, Tensor<T>> coupling_forward(const Tensor<T>& yt, const Tensor<T>& yb,
                                                 const CouplingMlp<T>& mlp, Activation act) {
    check_same_shape(yt, yb, "coupling_forward");
    check_last_dim(yt, mlp.w1.dim(1), "coupling_forward");
    Tensor<T> second = mlp_eval(mlp, act, yb);  // H(yb), residual included
    for (std::size_t i = 0; i < second.size(); ++i) second[i] += yt[i];
    return {yb, std::move(second)};
}

template <typename T>
std::pair<Tensor<T>, Tensor<T>> coupling_inverse(const Tensor<T>& xt, const Tensor<T>& xb,
                                                 const CouplingMlp<T>& mlp, Activation act) {
    check_same_shape(xt, xb, "coupling_inverse");
    check_last_dim(xt, mlp.w1.dim(1), "coupling_inverse");
    Tensor<T> h = mlp_eval(mlp, act, xt);
    Tensor<T> first(xb.shape());
    for (std::size_t i = 0; i < first.size(); ++i) first[i] = xb[i] - h[i];
    return {std::move(first), xt};
}

template <typename T>
Tensor<T> forward(const Tensor<T>& x, const InnParams<T>& params) {
    const InnConfig& cfg = params.config;
    check_last_dim(x, cfg.input_dim, "inn forward");
    auto [a, b] = split(x);
    for (std::size_t i = 0; i < cfg.depth; ++i) {
        auto [pa, pb, pads] = zero_concat(a, b, cfg.block_dims[i]);
        auto [na, nb] = coupling_forward(pa, pb, params.blocks[i], cfg.activation);
        a = std::move(na);
        b = std::move(nb);
    }
    return merge(a, b);
}

template <typename T>
Tensor<T> inverse(const Tensor<T>& y, const InnParams<T>& params) {
    const InnConfig& cfg = params.config;
    check_last_dim(y, cfg.observable_dim(), "inn inverse");
    auto [a, b] = split(y);  // both halves have width c_d
    for (std::size_t i = cfg.depth; i-- > 0;) {
        auto [ya, yb] = coupling_inverse(a, b, params.blocks[i], cfg.activation);
        const auto entry = cfg.block_entry_sizes(i);
        a = drop_tail(ya, cfg.block_dims[i] - entry.first);
        b = drop_tail(yb, cfg.block_dims[i] - entry.second);
    }
    return merge(a, b);
}

#define IKNO_INN_INSTANTIATE(T)                                                                   \
    template struct InnParams<T>;                                                                 \
    template std::pair<Tensor<T>, Tensor<T>> split<T>(const Tensor<T>&);                          \
    template Tensor<T> merge<T>(const Tensor<T>&, const Tensor<T>&);                              \
    template Tensor<T> pad_tail<T>(const Tensor<T>&, std::size_t);                                \
    template Tensor<T> drop_tail<T>(const Tensor<T>&, std::size_t);                               \
    template std::tuple<Tensor<T>, Tensor<T>, PadCounts> zero_concat<T>(                          \
        const Tensor<T>&, const Tensor<T>&, std::size_t);                                         \
    template Tensor<T> mlp_eval<T>(const CouplingMlp<T>&, Activation, const Tensor<T>&);          \
    template std::pair<Tensor<T>, Tensor<T>> coupling_forward<T>(                                 \
        const Tensor<T>&, const Tensor<T>&, const CouplingMlp<T>&, Activation);                   \
    template std::pair<Tensor<T>, Tensor<T>> coupling_inverse<T>(                                 \
        const Tensor<T>&, const Tensor<T>&, const CouplingMlp<T>&, Activation);                   \
    template Tensor<T> forward<T>(const Tensor<T>&, const InnParams<T>&);                         \
    template Tensor<T> inverse<T>(const Tensor<T>&, const InnParams<T>&);

IKNO_INN_INSTANTIATE(float)
IKNO_INN_INSTANTIATE(double)

#undef IKNO_INN_INSTANTIATE

}  // namespace ikno::inn
