#ifndef IKNO_TENSOR_HPP
#define IKNO_TENSOR_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ikno/errors.hpp"

namespace ikno {

using Shape = std::vector<std::size_t>;

inline std::size_t numel(std::span<const std::size_t> shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

inline std::string shape_str(std::span<const std::size_t> shape) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
    os << "]";
    return os.str();
}

// Dense row-major N-D array. T is float, double, or std::complex of either.
// Deliberately minimal: shape bookkeeping plus flat storage; numeric kernels
// index the flat buffer directly.
template <typename T>
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(Shape shape) : shape_(std::move(shape)), data_(numel(shape_), T{}) {}

    Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != numel(shape_))
            throw ShapeError("tensor data size " + std::to_string(data_.size()) +
                             " does not match shape " + shape_str(shape_));
    }

    static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }

    static Tensor full(Shape shape, T value) {
        Tensor t(std::move(shape));
        std::fill(t.data_.begin(), t.data_.end(), value);
        return t;
    }

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    std::size_t dim(std::size_t i) const { return shape_.at(i); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::vector<T>& storage() { return data_; }
    const std::vector<T>& storage() const { return data_; }

    T& operator[](std::size_t flat) { return data_[flat]; }
    const T& operator[](std::size_t flat) const { return data_[flat]; }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    // Size-preserving shape change.
    Tensor reshaped(Shape shape) const {
        if (numel(shape) != data_.size())
            throw ShapeError("reshape " + shape_str(shape_) + " -> " + shape_str(shape) +
                             " changes element count");
        Tensor t;
        t.shape_ = std::move(shape);
        t.data_ = data_;
        return t;
    }

    bool all_finite() const {
        for (const T& v : data_) {
            if constexpr (std::is_floating_point_v<T>) {
                if (!std::isfinite(v)) return false;
            } else {
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
            }
        }
        return true;
    }

private:
    Shape shape_;
    std::vector<T> data_;
};

// Row-major strides for a shape.
inline std::vector<std::size_t> strides_of(std::span<const std::size_t> shape) {
    std::vector<std::size_t> s(shape.size(), 1);
    for (std::size_t i = shape.size(); i-- > 1;) s[i - 1] = s[i] * shape[i];
    return s;
}

template <typename T>
void check_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(what) + ": shape mismatch " + shape_str(a.shape()) +
                         " vs " + shape_str(b.shape()));
}

}  // namespace ikno

#endif  // IKNO_TENSOR_HPP
