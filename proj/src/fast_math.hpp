#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace momentnet::detail {

// exp(x) - 1 for x <= 0, accurate to a few ulp. Branch-free and free of library
// calls so loops over hidden units auto-vectorize.
//
// x = n ln2 + r with |r| <= ln2/2, then expm1(x) = (2^n - 1) + 2^n expm1(r),
// where expm1(r) is a degree-13 Taylor polynomial. Both terms are free of
// cancellation, including n = 0.
inline double expm1_nonpositive(double x) noexcept {
    constexpr double kLog2e = 1.4426950408889634;
    constexpr double kLn2Hi = 6.93147180369123816490e-01;
    constexpr double kLn2Lo = 1.90821492927058770002e-10;
    // Adding 1.5 * 2^52 rounds to the nearest integer and leaves it in the low mantissa bits.
    constexpr double kShift = 0x1.8p52;
    x = x < -708.0 ? -708.0 : x;

    const double shifted = x * kLog2e + kShift;
    const double n = shifted - kShift;
    const double r = (x - n * kLn2Hi) - n * kLn2Lo;
    double q = 1.0 / 6227020800.0;  // 1/13!
    q = q * r + 1.0 / 479001600.0;
    q = q * r + 1.0 / 39916800.0;
    q = q * r + 1.0 / 3628800.0;
    q = q * r + 1.0 / 362880.0;
    q = q * r + 1.0 / 40320.0;
    q = q * r + 1.0 / 5040.0;
    q = q * r + 1.0 / 720.0;
    q = q * r + 1.0 / 120.0;
    q = q * r + 1.0 / 24.0;
    q = q * r + 1.0 / 6.0;
    q = q * r + 0.5;
    q = q * r * r + r;
    const double scale = std::bit_cast<double>((std::bit_cast<std::uint64_t>(shifted) + 1023) << 52);
    return (scale - 1.0) + scale * q;
}

// tanh(z) = -expm1(-2|z|) / (2 + expm1(-2|z|)), with the sign of z.
inline double tanh(double z) noexcept {
    const double em1 = expm1_nonpositive(-2.0 * std::abs(z));
    return std::copysign(-em1 / (2.0 + em1), z);
}

}  // namespace momentnet::detail
