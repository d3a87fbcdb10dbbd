#pragma once

// Exact dyadic rationals (numerator / 2^exponent) and their two-row
// automatic presentation.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "autorand/error.hpp"

namespace autorand {

using BigInt = mpz_class;

class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long value);  // NOLINT(google-explicit-constructor)
    Dyadic(BigInt numerator, std::uint64_t exponent);

    /// value = a / 2^b, reduced.
    static Dyadic fraction(long a, std::uint64_t b) { return Dyadic(BigInt(a), b); }

    /// Parses "num/2^exp" or a plain integer.
    static Dyadic parse(std::string_view text);

    const BigInt& numerator() const { return num_; }
    std::uint64_t exponent() const { return exp_; }

    int sign() const { return sgn(num_); }
    bool is_zero() const { return num_ == 0; }

    Dyadic operator-() const;
    friend Dyadic operator+(const Dyadic& x, const Dyadic& y);
    friend Dyadic operator-(const Dyadic& x, const Dyadic& y);
    Dyadic& operator+=(const Dyadic& y) { return *this = *this + y; }
    Dyadic& operator-=(const Dyadic& y) { return *this = *this - y; }

    friend bool operator==(const Dyadic& x, const Dyadic& y) {
        return x.exp_ == y.exp_ && x.num_ == y.num_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y);

    /// "num/2^exp", e.g. "81/2^4"; integers print as "n/2^0".
    std::string to_string() const;

    /// Nearest double, for diagnostics only.
    double to_double() const;

private:
    void normalize();

    BigInt num_ = 0;
    std::uint64_t exp_ = 0;
};

/// x * 2^k.
Dyadic scale_pow2(const Dyadic& x, std::int64_t k);

/// Multiplication by a constant fixed at construction time of the caller.
/// Martingale steps only ever use this form.
Dyadic scale_const(const Dyadic& x, const Dyadic& c);

/// General product of two dyadics. Not automatic; test utility only.
Dyadic multiply_unrestricted(const Dyadic& x, const Dyadic& y);

std::strong_ordering compare(const Dyadic& x, const Dyadic& y);

/// 2^k for k >= 0, or 1/2^-k for k < 0.
Dyadic pow2(std::int64_t k);

// ---------------------------------------------------------------------------
// Two-row presentation.
//
//   top:    a0 a1 ... an        integer bits, least significant first
//   bottom: s a-1 a-2 ... am    sign bit, then fractional bits
//
// Canonical form: top has no trailing zeros beyond position 0 ("0" for an
// integer part of zero), the fractional bits have no trailing zeros, and
// zero always carries s = 0.
struct TwoRowCode {
    std::string top;
    std::string bottom;

    friend bool operator==(const TwoRowCode&, const TwoRowCode&) = default;

    /// "top|bottom".
    std::string to_string() const { return top + "|" + bottom; }
    static TwoRowCode parse(std::string_view text);
};

TwoRowCode encode_tworow(const Dyadic& x);
Dyadic decode_tworow(const TwoRowCode& code);

/// Throws MalformedCode when the code is not canonical.
void validate_tworow(const TwoRowCode& code);

struct TwoRowSum {
    TwoRowCode code;
    /// Largest carry/borrow value held by any lane during the pass.
    int max_carry = 0;
    /// Number of columns consumed.
    std::size_t columns = 0;
};

/// Streaming addition: one pass over the aligned columns from the least
/// significant fractional bit to the most significant integer bit, keeping
/// only per-lane carry bits and a three-valued magnitude comparison.
TwoRowSum tworow_add_traced(const TwoRowCode& a, const TwoRowCode& b);
TwoRowCode tworow_add(const TwoRowCode& a, const TwoRowCode& b);

/// value == 0
bool rel_z(const TwoRowCode& c);
/// value > 0
bool rel_p(const TwoRowCode& c);
/// value(a) < value(b)
bool rel_l(const TwoRowCode& a, const TwoRowCode& b);

}  // namespace autorand
