#ifndef IKNO_ACTIVATION_HPP
#define IKNO_ACTIVATION_HPP

#include <cmath>
#include <string>

#include "ikno/errors.hpp"

namespace ikno {

enum class Activation { Identity, Tanh, Gelu };

inline Activation activation_from_string(const std::string& s) {
    if (s == "identity") return Activation::Identity;
    if (s == "tanh") return Activation::Tanh;
    if (s == "gelu") return Activation::Gelu;
    throw ConfigError("unknown activation: " + s + " (expected identity|tanh|gelu)");
}

inline std::string to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Tanh: return "tanh";
        case Activation::Gelu: return "gelu";
    }
    return "?";
}

template <typename T>
inline T activate(Activation a, T x) {
    switch (a) {
        case Activation::Identity: return x;
        case Activation::Tanh: return std::tanh(x);
        case Activation::Gelu:
            // exact (erf) form
            return T(0.5) * x * (T(1) + std::erf(x * T(M_SQRT1_2)));
    }
    return x;
}

template <typename T>
inline T activate_grad(Activation a, T x) {
    switch (a) {
        case Activation::Identity: return T(1);
        case Activation::Tanh: {
            const T t = std::tanh(x);
            return T(1) - t * t;
        }
        case Activation::Gelu: {
            const T phi = std::exp(T(-0.5) * x * x) * T(0.3989422804014326779);  // 1/sqrt(2*pi)
            const T cdf = T(0.5) * (T(1) + std::erf(x * T(M_SQRT1_2)));
            return cdf + x * phi;
        }
    }
    return T(1);
}

}  // namespace ikno

#endif  // IKNO_ACTIVATION_HPP
