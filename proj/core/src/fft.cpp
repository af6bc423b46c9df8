#include "ikno/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "ikno/errors.hpp"
#include "ikno/parallel.hpp"

namespace ikno::fft {

namespace {

// Plan cache for single out-of-place c2c transforms, keyed by precision,
// dims and direction. Plans are created with FFTW_ESTIMATE (deterministic
// plan choice run-to-run) and FFTW_UNALIGNED (safe new-array execution on
// std::vector storage). The planner is serialized; execution is not.
struct PlanKey {
    bool f32;
    int sign;
    std::vector<int> dims;
    auto operator<=>(const PlanKey&) const = default;
};

std::mutex g_planner_mutex;
std::map<PlanKey, fftw_plan> g_plans_d;
std::map<PlanKey, fftwf_plan> g_plans_f;

fftw_plan plan_d(const std::vector<int>& dims, int sign, fftw_complex* in, fftw_complex* out) {
    std::lock_guard lock(g_planner_mutex);
    const PlanKey key{false, sign, dims};
    auto it = g_plans_d.find(key);
    if (it != g_plans_d.end()) return it->second;
    fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), in, out, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericError("fftw failed to create plan");
    g_plans_d.emplace(key, p);
    return p;
}

fftwf_plan plan_f(const std::vector<int>& dims, int sign, fftwf_complex* in, fftwf_complex* out) {
    std::lock_guard lock(g_planner_mutex);
    const PlanKey key{true, sign, dims};
    auto it = g_plans_f.find(key);
    if (it != g_plans_f.end()) return it->second;
    fftwf_plan p = fftwf_plan_dft(static_cast<int>(dims.size()), dims.data(), in, out, sign,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericError("fftwf failed to create plan");
    g_plans_f.emplace(key, p);
    return p;
}

template <typename T>
void c2c_batch(std::complex<T>* in, std::complex<T>* out, std::size_t batch,
               const std::vector<int>& dims, int sign) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    if constexpr (std::is_same_v<T, double>) {
        fftw_plan p = plan_d(dims, sign, reinterpret_cast<fftw_complex*>(in),
                             reinterpret_cast<fftw_complex*>(out));
        parallel_for(batch, [&](std::size_t b) {
            fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in + b * n),
                             reinterpret_cast<fftw_complex*>(out + b * n));
        });
    } else {
        fftwf_plan p = plan_f(dims, sign, reinterpret_cast<fftwf_complex*>(in),
                              reinterpret_cast<fftwf_complex*>(out));
        parallel_for(batch, [&](std::size_t b) {
            fftwf_execute_dft(p, reinterpret_cast<fftwf_complex*>(in + b * n),
                              reinterpret_cast<fftwf_complex*>(out + b * n));
        });
    }
}

struct Layout {
    std::size_t batch = 1;           // product of leading axes
    std::vector<std::size_t> sizes;  // transformed axes
    std::vector<int> dims_int;
    std::size_t n = 1;  // product of sizes
};

Layout split_layout(std::span<const std::size_t> shape, std::size_t rank, const char* what) {
    if (rank == 0 || shape.size() < rank + 1)
        throw ShapeError(std::string(what) + ": tensor rank " + std::to_string(shape.size()) +
                         " too small for " + std::to_string(rank) + " transformed axes");
    Layout lay;
    for (std::size_t i = 0; i + rank < shape.size(); ++i) lay.batch *= shape[i];
    for (std::size_t i = shape.size() - rank; i < shape.size(); ++i) {
        if (shape[i] < 2)
            throw ShapeError(std::string(what) + ": transformed axis of size " +
                             std::to_string(shape[i]) + " (need >= 2)");
        lay.sizes.push_back(shape[i]);
        lay.dims_int.push_back(static_cast<int>(shape[i]));
        lay.n *= shape[i];
    }
    return lay;
}

// Odometer over a multi-index; returns false after the last index.
inline bool advance(std::vector<std::size_t>& idx, std::span<const std::size_t> dims) {
    for (std::size_t a = dims.size(); a-- > 0;) {
        if (++idx[a] < dims[a]) return true;
        idx[a] = 0;
    }
    return false;
}

}  // namespace

Shape half_shape(std::span<const std::size_t> sizes) {
    if (sizes.empty()) throw ShapeError("half_shape: no spatial sizes");
    Shape h(sizes.begin(), sizes.end());
    h.back() = h.back() / 2 + 1;
    return h;
}

template <typename T>
Tensor<std::complex<T>> rfft_nd(const Tensor<T>& v, std::size_t rank) {
    const Layout lay = split_layout(v.shape(), rank, "rfft_nd");
    const Shape half = half_shape(lay.sizes);
    const std::size_t half_n = numel(half);

    std::vector<std::complex<T>> in(lay.batch * lay.n), out(lay.batch * lay.n);
    for (std::size_t i = 0; i < v.size(); ++i) in[i] = std::complex<T>(v[i], T(0));
    c2c_batch<T>(in.data(), out.data(), lay.batch, lay.dims_int, FFTW_FORWARD);

    Shape out_shape(v.shape().begin(), v.shape().end() - rank);
    out_shape.insert(out_shape.end(), half.begin(), half.end());
    Tensor<std::complex<T>> result(out_shape);

    const T scale = T(1) / static_cast<T>(lay.n);
    const std::size_t h_last = half.back();
    const std::size_t f_last = lay.sizes.back();
    const std::size_t rows = half_n / h_last;  // multi-index count over non-last axes
    for (std::size_t b = 0; b < lay.batch; ++b) {
        std::vector<std::size_t> idx(rank - 1, 0);
        for (std::size_t r = 0; r < rows; ++r) {
            std::size_t src_row = 0, dst_row = 0;
            for (std::size_t a = 0; a + 1 < rank; ++a) {
                src_row = src_row * lay.sizes[a] + idx[a];
                dst_row = dst_row * half[a] + idx[a];
            }
            const std::complex<T>* src = out.data() + b * lay.n + src_row * f_last;
            std::complex<T>* dst = result.data() + b * half_n + dst_row * h_last;
            for (std::size_t k = 0; k < h_last; ++k) dst[k] = src[k] * scale;
            if (rank > 1) advance(idx, std::span(lay.sizes).first(rank - 1));
        }
    }
    return result;
}

namespace {

// Expand a one-sided spectrum to the full cube by conjugate mirroring of the
// absent last-axis entries; stored entries are taken verbatim.
template <typename T>
void hermitian_extend(const std::complex<T>* half_data, std::complex<T>* full,
                      std::span<const std::size_t> sizes, const Shape& half) {
    const std::size_t rank = sizes.size();
    const std::size_t h_last = half.back();
    const std::size_t f_last = sizes.back();
    const auto full_strides = strides_of(sizes);
    const auto half_strides = strides_of(half);

    std::vector<std::size_t> idx(rank, 0);
    do {
        std::size_t dst = 0;
        for (std::size_t a = 0; a < rank; ++a) dst += idx[a] * full_strides[a];
        if (idx.back() < h_last) {
            std::size_t src = 0;
            for (std::size_t a = 0; a < rank; ++a) src += idx[a] * half_strides[a];
            full[dst] = half_data[src];
        } else {
            std::size_t src = 0;
            for (std::size_t a = 0; a < rank; ++a) {
                const std::size_t m = (sizes[a] - idx[a]) % sizes[a];
                src += m * half_strides[a];
            }
            full[dst] = std::conj(half_data[src]);
        }
    } while (advance(idx, sizes));
    (void)f_last;
}

// Adjoint of hermitian_extend: fold the full-cube cotangent back onto the
// one-sided layout (mirrored entries contribute their conjugates).
template <typename T>
void hermitian_fold(const std::complex<T>* full, std::complex<T>* half_data,
                    std::span<const std::size_t> sizes, const Shape& half) {
    const std::size_t rank = sizes.size();
    const std::size_t h_last = half.back();
    const auto full_strides = strides_of(sizes);
    const auto half_strides = strides_of(half);

    std::vector<std::size_t> idx(rank, 0);
    do {
        std::size_t src = 0;
        for (std::size_t a = 0; a < rank; ++a) src += idx[a] * full_strides[a];
        if (idx.back() < h_last) {
            std::size_t dst = 0;
            for (std::size_t a = 0; a < rank; ++a) dst += idx[a] * half_strides[a];
            half_data[dst] += full[src];
        } else {
            std::size_t dst = 0;
            for (std::size_t a = 0; a < rank; ++a) {
                const std::size_t m = (sizes[a] - idx[a]) % sizes[a];
                dst += m * half_strides[a];
            }
            half_data[dst] += std::conj(full[src]);
        }
    } while (advance(idx, sizes));
}

void check_half_compatible(std::span<const std::size_t> spectral, std::span<const std::size_t> sizes,
                           const char* what) {
    if (spectral.size() != sizes.size())
        throw ShapeError(std::string(what) + ": spectral rank " + std::to_string(spectral.size()) +
                         " vs spatial rank " + std::to_string(sizes.size()));
    for (std::size_t a = 0; a + 1 < sizes.size(); ++a)
        if (spectral[a] != sizes[a])
            throw ShapeError(std::string(what) + ": full axis " + std::to_string(a) + " has " +
                             std::to_string(spectral[a]) + " modes, expected " +
                             std::to_string(sizes[a]));
    if (spectral.back() != sizes.back() / 2 + 1)
        throw ShapeError(std::string(what) + ": one-sided axis has " +
                         std::to_string(spectral.back()) + " modes, expected " +
                         std::to_string(sizes.back() / 2 + 1));
}

}  // namespace

template <typename T>
Tensor<T> irfft_nd(const Tensor<std::complex<T>>& spectrum, std::span<const std::size_t> sizes) {
    const std::size_t rank = sizes.size();
    if (rank == 0 || spectrum.rank() < rank + 1)
        throw ShapeError("irfft_nd: bad rank");
    const std::span<const std::size_t> spec_tail(spectrum.shape().data() + spectrum.rank() - rank,
                                                 rank);
    check_half_compatible(spec_tail, sizes, "irfft_nd");

    std::size_t batch = 1;
    for (std::size_t i = 0; i + rank < spectrum.rank(); ++i) batch *= spectrum.dim(i);
    const Shape half(spec_tail.begin(), spec_tail.end());
    const std::size_t half_n = numel(half);
    std::size_t n = 1;
    std::vector<int> dims_int;
    for (std::size_t d : sizes) {
        n *= d;
        dims_int.push_back(static_cast<int>(d));
    }

    std::vector<std::complex<T>> full(batch * n), out(batch * n);
    for (std::size_t b = 0; b < batch; ++b)
        hermitian_extend<T>(spectrum.data() + b * half_n, full.data() + b * n, sizes, half);
    c2c_batch<T>(full.data(), out.data(), batch, dims_int, FFTW_BACKWARD);

    Shape out_shape(spectrum.shape().begin(), spectrum.shape().end() - rank);
    out_shape.insert(out_shape.end(), sizes.begin(), sizes.end());
    Tensor<T> result(out_shape);
    for (std::size_t i = 0; i < result.size(); ++i) result[i] = out[i].real();
    return result;
}

template <typename T>
Tensor<T> rfft_adjoint(const Tensor<std::complex<T>>& spectrum_cotangent,
                       std::span<const std::size_t> sizes) {
    const std::size_t rank = sizes.size();
    const std::span<const std::size_t> spec_tail(
        spectrum_cotangent.shape().data() + spectrum_cotangent.rank() - rank, rank);
    check_half_compatible(spec_tail, sizes, "rfft_adjoint");

    std::size_t batch = 1;
    for (std::size_t i = 0; i + rank < spectrum_cotangent.rank(); ++i)
        batch *= spectrum_cotangent.dim(i);
    const Shape half(spec_tail.begin(), spec_tail.end());
    const std::size_t half_n = numel(half);
    std::size_t n = 1;
    std::vector<int> dims_int;
    for (std::size_t d : sizes) {
        n *= d;
        dims_int.push_back(static_cast<int>(d));
    }

    // Scatter the one-sided cotangent into the full cube (no mirroring: the
    // forward transform simply discarded those entries), then one backward
    // transform and the 1/N forward scale.
    std::vector<std::complex<T>> full(batch * n), out(batch * n);
    const auto full_strides = strides_of(sizes);
    const auto half_strides = strides_of(half);
    for (std::size_t b = 0; b < batch; ++b) {
        std::vector<std::size_t> idx(rank, 0);
        do {
            std::size_t src = 0, dst = 0;
            for (std::size_t a = 0; a < rank; ++a) {
                src += idx[a] * half_strides[a];
                dst += idx[a] * full_strides[a];
            }
            full[b * n + dst] = spectrum_cotangent[b * half_n + src];
        } while (advance(idx, half));
    }
    c2c_batch<T>(full.data(), out.data(), batch, dims_int, FFTW_BACKWARD);

    Shape out_shape(spectrum_cotangent.shape().begin(), spectrum_cotangent.shape().end() - rank);
    out_shape.insert(out_shape.end(), sizes.begin(), sizes.end());
    Tensor<T> result(out_shape);
    const T scale = T(1) / static_cast<T>(n);
    for (std::size_t i = 0; i < result.size(); ++i) result[i] = out[i].real() * scale;
    return result;
}

template <typename T>
Tensor<std::complex<T>> irfft_adjoint(const Tensor<T>& output_cotangent, std::size_t rank) {
    const Layout lay = split_layout(output_cotangent.shape(), rank, "irfft_adjoint");
    const Shape half = half_shape(lay.sizes);
    const std::size_t half_n = numel(half);

    std::vector<std::complex<T>> in(lay.batch * lay.n), out(lay.batch * lay.n);
    for (std::size_t i = 0; i < output_cotangent.size(); ++i)
        in[i] = std::complex<T>(output_cotangent[i], T(0));
    c2c_batch<T>(in.data(), out.data(), lay.batch, lay.dims_int, FFTW_FORWARD);

    Shape out_shape(output_cotangent.shape().begin(), output_cotangent.shape().end() - rank);
    out_shape.insert(out_shape.end(), half.begin(), half.end());
    Tensor<std::complex<T>> result(out_shape);
    for (std::size_t b = 0; b < lay.batch; ++b)
        hermitian_fold<T>(out.data() + b * lay.n, result.data() + b * half_n,
                          std::span<const std::size_t>(lay.sizes), half);
    return result;
}

template Tensor<std::complex<float>> rfft_nd<float>(const Tensor<float>&, std::size_t);
template Tensor<std::complex<double>> rfft_nd<double>(const Tensor<double>&, std::size_t);
template Tensor<float> irfft_nd<float>(const Tensor<std::complex<float>>&,
                                       std::span<const std::size_t>);
template Tensor<double> irfft_nd<double>(const Tensor<std::complex<double>>&,
                                         std::span<const std::size_t>);
template Tensor<float> rfft_adjoint<float>(const Tensor<std::complex<float>>&,
                                           std::span<const std::size_t>);
template Tensor<double> rfft_adjoint<double>(const Tensor<std::complex<double>>&,
                                             std::span<const std::size_t>);
template Tensor<std::complex<float>> irfft_adjoint<float>(const Tensor<float>&, std::size_t);
template Tensor<std::complex<double>> irfft_adjoint<double>(const Tensor<double>&, std::size_t);

}  // namespace ikno::fft
