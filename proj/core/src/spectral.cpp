#include "ikno/spectral.hpp"

#include <cmath>

#include "ikno/errors.hpp"
#include "ikno/fft.hpp"
#include "ikno/fiber.hpp"
#include "ikno/parallel.hpp"

namespace ikno::spectral {

void TruncationSpec::validate() const {
    if (modes.empty()) throw ConfigError("truncation: at least one spatial axis required");
    for (std::size_t m : modes)
        if (m < 1) throw ConfigError("truncation: retained modes must be >= 1 per axis");
    if (power < 1) throw ConfigError("truncation: power p must be >= 1");
}

void TruncationSpec::validate_for(std::span<const std::size_t> spatial_sizes) const {
    validate();
    if (spatial_sizes.size() != modes.size())
        throw ConfigError("truncation: " + std::to_string(modes.size()) + " mode counts for " +
                          std::to_string(spatial_sizes.size()) + " spatial axes");
    for (std::size_t a = 0; a + 1 < modes.size(); ++a)
        if (2 * modes[a] > spatial_sizes[a])
            throw ConfigError("truncation: axis " + std::to_string(a) + " needs resolution >= " +
                              std::to_string(2 * modes[a]) + ", got " +
                              std::to_string(spatial_sizes[a]));
    const std::size_t half = spatial_sizes.back() / 2 + 1;
    if (modes.back() > half)
        throw ConfigError("truncation: last axis keeps " + std::to_string(modes.back()) +
                          " one-sided modes but only " + std::to_string(half) + " exist");
}

Shape TruncationSpec::retained_shape() const {
    Shape r(modes.size());
    for (std::size_t a = 0; a + 1 < modes.size(); ++a) r[a] = 2 * modes[a];
    r.back() = modes.back();
    return r;
}

template <typename T>
KoopmanLayerParams<T> KoopmanLayerParams<T>::init(std::size_t observable_dim,
                                                  const TruncationSpec& spec, Activation gamma,
                                                  Rng& rng) {
    spec.validate();
    KoopmanLayerParams<T> p;
    Shape k_shape{observable_dim, observable_dim};
    const Shape retained = spec.retained_shape();
    k_shape.insert(k_shape.end(), retained.begin(), retained.end());
    p.k = Tensor<std::complex<T>>(k_shape);
    const double bound = 1.0 / static_cast<double>(observable_dim);
    for (std::size_t i = 0; i < p.k.size(); ++i)
        p.k[i] = std::complex<T>(static_cast<T>(rng.uniform(-bound, bound)),
                                 static_cast<T>(rng.uniform(-bound, bound)));
    p.w_hf = Tensor<T>({observable_dim, observable_dim});
    const double wb = std::sqrt(1.0 / static_cast<double>(observable_dim));
    for (std::size_t i = 0; i < p.w_hf.size(); ++i)
        p.w_hf[i] = static_cast<T>(rng.uniform(-wb, wb));
    p.b_hf = Tensor<T>({observable_dim});
    p.gamma = gamma;
    return p;
}

template <typename T>
void KoopmanLayerParams<T>::validate(const TruncationSpec& spec) const {
    const Shape retained = spec.retained_shape();
    if (k.rank() != 2 + retained.size() || k.dim(0) != k.dim(1))
        throw ConfigError("koopman params: K must be [O, O, retained modes...]");
    for (std::size_t a = 0; a < retained.size(); ++a)
        if (k.dim(2 + a) != retained[a])
            throw ConfigError("koopman params: K mode axis " + std::to_string(a) +
                              " has " + std::to_string(k.dim(2 + a)) + " entries, expected " +
                              std::to_string(retained[a]));
    const std::size_t o = k.dim(0);
    if (w_hf.rank() != 2 || w_hf.dim(0) != o || w_hf.dim(1) != o || b_hf.size() != o)
        throw ConfigError("koopman params: 1x1 convolution must be [O, O] with bias [O]");
    if (!k.all_finite() || !w_hf.all_finite() || !b_hf.all_finite())
        throw NumericError("koopman params contain non-finite values");
}

namespace {

// Per retained axis, the source index in the spectral cube for each retained
// index: full axes keep [0, M) and [R-M, R), the one-sided axis keeps [0, M).
std::vector<std::vector<std::size_t>> retained_source_indices(
    const TruncationSpec& spec, std::span<const std::size_t> spectral_sizes) {
    const std::size_t dx = spec.modes.size();
    std::vector<std::vector<std::size_t>> map(dx);
    for (std::size_t a = 0; a < dx; ++a) {
        const std::size_t m = spec.modes[a];
        if (a + 1 < dx) {
            const std::size_t r = spectral_sizes[a];
            if (2 * m > r)
                throw ShapeError("truncate: axis " + std::to_string(a) + " has " +
                                 std::to_string(r) + " modes, need >= " + std::to_string(2 * m));
            map[a].resize(2 * m);
            for (std::size_t t = 0; t < m; ++t) map[a][t] = t;
            for (std::size_t t = m; t < 2 * m; ++t) map[a][t] = r - 2 * m + t;
        } else {
            if (m > spectral_sizes[a])
                throw ShapeError("truncate: one-sided axis has " +
                                 std::to_string(spectral_sizes[a]) + " modes, need >= " +
                                 std::to_string(m));
            map[a].resize(m);
            for (std::size_t t = 0; t < m; ++t) map[a][t] = t;
        }
    }
    return map;
}

}  // namespace

template <typename T>
Tensor<std::complex<T>> truncate(const TruncationSpec& spec, const Tensor<std::complex<T>>& v) {
    spec.validate();
    const std::size_t dx = spec.modes.size();
    if (v.rank() != dx + 2)
        throw ShapeError("truncate: expected [B, O, spectral...], got " + shape_str(v.shape()));
    const std::span<const std::size_t> spectral(v.shape().data() + 2, dx);
    const auto src_map = retained_source_indices(spec, spectral);

    const Shape retained = spec.retained_shape();
    Shape out_shape{v.dim(0), v.dim(1)};
    out_shape.insert(out_shape.end(), retained.begin(), retained.end());
    Tensor<std::complex<T>> out(out_shape);

    const std::size_t lead = v.dim(0) * v.dim(1);
    const std::size_t in_n = numel(spectral);
    const std::size_t out_n = numel(retained);
    const auto in_strides = strides_of(spectral);

    for (std::size_t l = 0; l < lead; ++l) {
        std::vector<std::size_t> idx(dx, 0);
        for (std::size_t o = 0; o < out_n; ++o) {
            std::size_t src = 0;
            for (std::size_t a = 0; a < dx; ++a) src += src_map[a][idx[a]] * in_strides[a];
            out[l * out_n + o] = v[l * in_n + src];
            for (std::size_t a = dx; a-- > 0;) {
                if (++idx[a] < retained[a]) break;
                idx[a] = 0;
            }
        }
    }
    return out;
}

template <typename T>
Tensor<std::complex<T>> embed_back(const TruncationSpec& spec,
                                   const Tensor<std::complex<T>>& truncated,
                                   std::span<const std::size_t> target_spectral_shape) {
    spec.validate();
    const std::size_t dx = spec.modes.size();
    const Shape retained = spec.retained_shape();
    if (truncated.rank() != dx + 2)
        throw ShapeError("embed_back: expected [B, O, retained...], got " +
                         shape_str(truncated.shape()));
    for (std::size_t a = 0; a < dx; ++a)
        if (truncated.dim(2 + a) != retained[a])
            throw ShapeError("embed_back: retained axis " + std::to_string(a) + " has " +
                             std::to_string(truncated.dim(2 + a)) + " entries, expected " +
                             std::to_string(retained[a]));
    if (target_spectral_shape.size() != dx)
        throw ShapeError("embed_back: target rank mismatch");
    for (std::size_t a = 0; a + 1 < dx; ++a)
        if (target_spectral_shape[a] < 2 * spec.modes[a])
            throw ShapeError("embed_back: target axis " + std::to_string(a) +
                             " too small for retained modes");
    if (target_spectral_shape.back() < spec.modes.back())
        throw ShapeError("embed_back: target one-sided axis too small for retained modes");

    const auto src_map = retained_source_indices(spec, target_spectral_shape);

    Shape out_shape{truncated.dim(0), truncated.dim(1)};
    out_shape.insert(out_shape.end(), target_spectral_shape.begin(), target_spectral_shape.end());
    Tensor<std::complex<T>> out(out_shape);

    const std::size_t lead = truncated.dim(0) * truncated.dim(1);
    const std::size_t in_n = numel(retained);
    const std::size_t out_n = numel(target_spectral_shape);
    const auto out_strides = strides_of(target_spectral_shape);

    for (std::size_t l = 0; l < lead; ++l) {
        std::vector<std::size_t> idx(dx, 0);
        for (std::size_t i = 0; i < in_n; ++i) {
            std::size_t dst = 0;
            for (std::size_t a = 0; a < dx; ++a) dst += src_map[a][idx[a]] * out_strides[a];
            out[l * out_n + dst] = truncated[l * in_n + i];
            for (std::size_t a = dx; a-- > 0;) {
                if (++idx[a] < retained[a]) break;
                idx[a] = 0;
            }
        }
    }
    return out;
}

template <typename T>
Tensor<std::complex<T>> apply_koopman(const KoopmanLayerParams<T>& params,
                                      const TruncationSpec& spec,
                                      const Tensor<std::complex<T>>& truncated) {
    params.validate(spec);
    const std::size_t o_dim = params.k.dim(0);
    const Shape retained = spec.retained_shape();
    if (truncated.rank() != 2 + retained.size() || truncated.dim(1) != o_dim)
        throw ShapeError("apply_koopman: expected [B, " + std::to_string(o_dim) +
                         ", retained...], got " + shape_str(truncated.shape()));
    for (std::size_t a = 0; a < retained.size(); ++a)
        if (truncated.dim(2 + a) != retained[a])
            throw ShapeError("apply_koopman: retained shape mismatch at axis " +
                             std::to_string(a));

    const std::size_t modes = numel(retained);
    const std::size_t batch = truncated.dim(0);

    Tensor<std::complex<T>> cur = truncated;
    Tensor<std::complex<T>> next(truncated.shape());
    for (std::size_t step = 0; step < spec.power; ++step) {
        parallel_for(batch * o_dim, [&](std::size_t bo) {
            const std::size_t b = bo / o_dim, o1 = bo % o_dim;
            std::complex<T>* dst = next.data() + (b * o_dim + o1) * modes;
            for (std::size_t m = 0; m < modes; ++m) dst[m] = std::complex<T>(0, 0);
            for (std::size_t o2 = 0; o2 < o_dim; ++o2) {
                const std::complex<T>* krow = params.k.data() + (o1 * o_dim + o2) * modes;
                const std::complex<T>* src = cur.data() + (b * o_dim + o2) * modes;
                for (std::size_t m = 0; m < modes; ++m) dst[m] += krow[m] * src[m];
            }
        });
        std::swap(cur, next);
    }
    return cur;
}

template <typename T>
Tensor<T> high_freq_path(const KoopmanLayerParams<T>& params, const Tensor<T>& v) {
    if (v.rank() < 3 || v.dim(1) != params.k.dim(0))
        throw ShapeError("high_freq_path: expected [B, " + std::to_string(params.k.dim(0)) +
                         ", space...], got " + shape_str(v.shape()));
    return conv1x1(params.w_hf, params.b_hf, v);
}

template <typename T>
Tensor<T> spectral_layer(const KoopmanLayerParams<T>& params, const TruncationSpec& spec,
                         const Tensor<T>& v, std::span<const std::size_t> output_sizes) {
    const std::size_t dx = spec.modes.size();
    if (v.rank() != dx + 2)
        throw ShapeError("spectral_layer: expected [B, O, space...], got " + shape_str(v.shape()));
    const std::span<const std::size_t> in_sizes(v.shape().data() + 2, dx);
    for (std::size_t a = 0; a < dx; ++a)
        if (output_sizes[a] != in_sizes[a])
            throw ShapeError(
                "spectral_layer: the spectral and position-wise paths must share one "
                "resolution; feed the higher-resolution field through the whole layer instead");
    spec.validate_for(in_sizes);

    auto spectrum = fft::rfft_nd(v, dx);
    auto coeffs = truncate(spec, spectrum);
    auto evolved = apply_koopman(params, spec, coeffs);
    const Shape target = fft::half_shape(output_sizes);
    auto embedded = embed_back(spec, evolved, target);
    Tensor<T> low = fft::irfft_nd(embedded, output_sizes);

    Tensor<T> out = high_freq_path(params, v);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = activate(params.gamma, out[i] + low[i]);
    return out;
}

#define IKNO_SPECTRAL_INSTANTIATE(T)                                                              \
    template struct KoopmanLayerParams<T>;                                                        \
    template Tensor<std::complex<T>> truncate<T>(const TruncationSpec&,                           \
                                                 const Tensor<std::complex<T>>&);                 \
    template Tensor<std::complex<T>> embed_back<T>(const TruncationSpec&,                         \
                                                   const Tensor<std::complex<T>>&,                \
                                                   std::span<const std::size_t>);                 \
    template Tensor<std::complex<T>> apply_koopman<T>(const KoopmanLayerParams<T>&,               \
                                                      const TruncationSpec&,                      \
                                                      const Tensor<std::complex<T>>&);            \
    template Tensor<T> high_freq_path<T>(const KoopmanLayerParams<T>&, const Tensor<T>&);         \
    template Tensor<T> spectral_layer<T>(const KoopmanLayerParams<T>&, const TruncationSpec&,     \
                                         const Tensor<T>&, std::span<const std::size_t>);

IKNO_SPECTRAL_INSTANTIATE(float)
IKNO_SPECTRAL_INSTANTIATE(double)

#undef IKNO_SPECTRAL_INSTANTIATE

}  // namespace ikno::spectral
