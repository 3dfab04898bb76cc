#pragma once

#include <complex>
#include <cstdint>
#include <type_traits>

namespace chebfd {

using Index = std::int64_t;
using Complex = std::complex<double>;

enum class ScalarKind : std::uint32_t { real64 = 0, complex128 = 1 };

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    using Real = double;
    static constexpr ScalarKind kind = ScalarKind::real64;
    static double conj(double x) { return x; }
    static double real(double x) { return x; }
    // flops per addition / multiplication (performance-model convention)
    static constexpr int flops_add = 1;
    static constexpr int flops_mul = 1;
    static constexpr int data_bytes = 8;
};

template <>
struct ScalarTraits<Complex> {
    using Real = double;
    static constexpr ScalarKind kind = ScalarKind::complex128;
    static Complex conj(const Complex& x) { return std::conj(x); }
    static double real(const Complex& x) { return x.real(); }
    static constexpr int flops_add = 2;
    static constexpr int flops_mul = 6;
    static constexpr int data_bytes = 16;
};

template <class S>
inline constexpr bool is_supported_scalar =
    std::is_same_v<S, double> || std::is_same_v<S, Complex>;

}  // namespace chebfd
