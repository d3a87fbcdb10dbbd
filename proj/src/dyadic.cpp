#include "autorand/dyadic.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

namespace autorand {

Dyadic::Dyadic(long value) : num_(value), exp_(0) {}

Dyadic::Dyadic(BigInt numerator, std::uint64_t exponent)
    : num_(std::move(numerator)), exp_(exponent) {
    normalize();
}

void Dyadic::normalize() {
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    if (exp_ == 0) return;
    const std::uint64_t zeros = mpz_scan1(num_.get_mpz_t(), 0);
    const std::uint64_t shift = std::min(zeros, exp_);
    if (shift > 0) {
        mpz_fdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), shift);
        exp_ -= shift;
    }
}

Dyadic Dyadic::parse(std::string_view text) {
    auto fail = [&] { throw ParseError("malformed dyadic '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    const auto slash = text.find('/');
    const std::string num_text(text.substr(0, slash));
    BigInt num;
    if (num_text.empty() || num.set_str(num_text, 10) != 0) fail();
    if (slash == std::string_view::npos) return Dyadic(num, 0);
    auto rest = text.substr(slash + 1);
    if (!rest.starts_with("2^")) fail();
    rest.remove_prefix(2);
    std::uint64_t exp = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exp);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) fail();
    return Dyadic(num, exp);
}

Dyadic Dyadic::operator-() const {
    Dyadic r = *this;
    r.num_ = -r.num_;
    return r;
}

namespace {

// Brings both numerators to the common exponent max(ex, ey).
std::pair<BigInt, BigInt> aligned(const Dyadic& x, const Dyadic& y) {
    BigInt a = x.numerator();
    BigInt b = y.numerator();
    if (x.exponent() < y.exponent()) {
        mpz_mul_2exp(a.get_mpz_t(), a.get_mpz_t(), y.exponent() - x.exponent());
    } else if (y.exponent() < x.exponent()) {
        mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), x.exponent() - y.exponent());
    }
    return {std::move(a), std::move(b)};
}

}  // namespace

Dyadic operator+(const Dyadic& x, const Dyadic& y) {
    auto [a, b] = aligned(x, y);
    return Dyadic(a + b, std::max(x.exp_, y.exp_));
}

Dyadic operator-(const Dyadic& x, const Dyadic& y) {
    auto [a, b] = aligned(x, y);
    return Dyadic(a - b, std::max(x.exp_, y.exp_));
}

std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y) {
    auto [a, b] = aligned(x, y);
    const int c = cmp(a, b);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::strong_ordering compare(const Dyadic& x, const Dyadic& y) { return x <=> y; }

std::string Dyadic::to_string() const {
    return num_.get_str() + "/2^" + std::to_string(exp_);
}

double Dyadic::to_double() const {
    mpf_class f(num_, std::max<mp_bitcnt_t>(64, mpz_sizeinbase(num_.get_mpz_t(), 2)));
    mpf_div_2exp(f.get_mpf_t(), f.get_mpf_t(), exp_);
    return f.get_d();
}

Dyadic scale_pow2(const Dyadic& x, std::int64_t k) {
    if (x.is_zero() || k == 0) return x;
    if (k < 0) return Dyadic(x.numerator(), x.exponent() + static_cast<std::uint64_t>(-k));
    const auto up = static_cast<std::uint64_t>(k);
    if (up <= x.exponent()) return Dyadic(x.numerator(), x.exponent() - up);
    BigInt n = x.numerator();
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), up - x.exponent());
    return Dyadic(std::move(n), 0);
}

Dyadic scale_const(const Dyadic& x, const Dyadic& c) {
    return Dyadic(x.numerator() * c.numerator(), x.exponent() + c.exponent());
}

Dyadic multiply_unrestricted(const Dyadic& x, const Dyadic& y) {
    return Dyadic(x.numerator() * y.numerator(), x.exponent() + y.exponent());
}

Dyadic pow2(std::int64_t k) { return scale_pow2(Dyadic(1), k); }

// ---------------------------------------------------------------------------

TwoRowCode TwoRowCode::parse(std::string_view text) {
    const auto bar = text.find('|');
    if (bar == std::string_view::npos) {
        throw MalformedCode("two-row code needs a '|' separator: " + std::string(text));
    }
    TwoRowCode code{std::string(text.substr(0, bar)), std::string(text.substr(bar + 1))};
    validate_tworow(code);
    return code;
}

void validate_tworow(const TwoRowCode& code) {
    auto bits_only = [](const std::string& s) {
        return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
    };
    if (code.top.empty() || code.bottom.empty()) throw MalformedCode("empty row in two-row code");
    if (!bits_only(code.top) || !bits_only(code.bottom)) {
        throw MalformedCode("two-row code rows must be bit strings");
    }
    if (code.top.size() > 1 && code.top.back() == '0') {
        throw MalformedCode("trailing zero padding in integer row: " + code.to_string());
    }
    if (code.bottom.size() > 1 && code.bottom.back() == '0') {
        throw MalformedCode("trailing zero padding in fraction row: " + code.to_string());
    }
    const bool zero = code.top == "0" && code.bottom.size() == 1;
    if (zero && code.bottom[0] == '1') throw MalformedCode("negative zero is not canonical");
}

TwoRowCode encode_tworow(const Dyadic& x) {
    BigInt mag = abs(x.numerator());
    const std::uint64_t e = x.exponent();
    TwoRowCode code;
    code.bottom.push_back(x.sign() < 0 ? '1' : '0');
    for (std::uint64_t j = 1; j <= e; ++j) {
        code.bottom.push_back(mpz_tstbit(mag.get_mpz_t(), e - j) ? '1' : '0');
    }
    BigInt whole;
    mpz_fdiv_q_2exp(whole.get_mpz_t(), mag.get_mpz_t(), e);
    if (whole == 0) {
        code.top = "0";
    } else {
        const std::size_t bits = mpz_sizeinbase(whole.get_mpz_t(), 2);
        for (std::size_t i = 0; i < bits; ++i) {
            code.top.push_back(mpz_tstbit(whole.get_mpz_t(), i) ? '1' : '0');
        }
    }
    return code;
}

Dyadic decode_tworow(const TwoRowCode& code) {
    validate_tworow(code);
    const std::uint64_t e = code.bottom.size() - 1;
    BigInt num = 0;
    for (std::size_t i = 0; i < code.top.size(); ++i) {
        if (code.top[i] == '1') mpz_setbit(num.get_mpz_t(), i + e);
    }
    for (std::uint64_t j = 1; j <= e; ++j) {
        if (code.bottom[j] == '1') mpz_setbit(num.get_mpz_t(), e - j);
    }
    if (code.bottom[0] == '1') num = -num;
    return Dyadic(std::move(num), e);
}

namespace {

struct Columns {
    std::size_t frac = 0;   // fractional columns
    std::size_t whole = 0;  // integer columns
};

// Bit of the code at binary position p (negative = fractional).
int bit_at(const TwoRowCode& c, std::int64_t p) {
    if (p >= 0) {
        const auto i = static_cast<std::size_t>(p);
        return i < c.top.size() && c.top[i] == '1';
    }
    const auto j = static_cast<std::size_t>(-p);
    return j < c.bottom.size() && c.bottom[j] == '1';
}

TwoRowCode code_from_bits(const std::vector<int>& bits, std::size_t frac, bool negative) {
    // bits[i] holds position i - frac.
    TwoRowCode out;
    std::size_t last_frac = 0;  // one past the last nonzero fractional index
    for (std::size_t j = 1; j <= frac; ++j) {
        if (bits[frac - j]) last_frac = j;
    }
    std::size_t top_len = 1;
    for (std::size_t i = frac; i < bits.size(); ++i) {
        if (bits[i]) top_len = i - frac + 1;
    }
    for (std::size_t i = 0; i < top_len; ++i) {
        const std::size_t at = frac + i;
        out.top.push_back(at < bits.size() && bits[at] ? '1' : '0');
    }
    const bool zero = std::none_of(bits.begin(), bits.end(), [](int b) { return b != 0; });
    out.bottom.push_back(negative && !zero ? '1' : '0');
    for (std::size_t j = 1; j <= last_frac; ++j) out.bottom.push_back(bits[frac - j] ? '1' : '0');
    return out;
}

}  // namespace

TwoRowSum tworow_add_traced(const TwoRowCode& a, const TwoRowCode& b) {
    validate_tworow(a);
    validate_tworow(b);
    Columns cols;
    cols.frac = std::max(a.bottom.size(), b.bottom.size()) - 1;
    cols.whole = std::max(a.top.size(), b.top.size()) + 1;

    const bool neg_a = a.bottom[0] == '1';
    const bool neg_b = b.bottom[0] == '1';
    const std::size_t total = cols.frac + cols.whole;

    TwoRowSum out;
    out.columns = total;
    std::vector<int> sum(total), diff_ab(total), diff_ba(total);
    int carry = 0, borrow_ab = 0, borrow_ba = 0;
    int order = 0;  // sign of |a| - |b| over the columns read so far
    for (std::size_t i = 0; i < total; ++i) {
        const std::int64_t p = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(cols.frac);
        const int x = bit_at(a, p);
        const int y = bit_at(b, p);
        if (neg_a == neg_b) {
            const int s = x + y + carry;
            sum[i] = s & 1;
            carry = s >> 1;
        } else {
            int d = x - y - borrow_ab;
            borrow_ab = d < 0;
            diff_ab[i] = d & 1;
            d = y - x - borrow_ba;
            borrow_ba = d < 0;
            diff_ba[i] = d & 1;
            if (x != y) order = x > y ? 1 : -1;
        }
        out.max_carry = std::max({out.max_carry, carry, borrow_ab, borrow_ba});
    }
    if (neg_a == neg_b) {
        out.code = code_from_bits(sum, cols.frac, neg_a);
    } else if (order >= 0) {
        out.code = code_from_bits(diff_ab, cols.frac, neg_a);
    } else {
        out.code = code_from_bits(diff_ba, cols.frac, neg_b);
    }
    return out;
}

TwoRowCode tworow_add(const TwoRowCode& a, const TwoRowCode& b) {
    return tworow_add_traced(a, b).code;
}

bool rel_z(const TwoRowCode& c) {
    validate_tworow(c);
    const bool whole_zero = std::all_of(c.top.begin(), c.top.end(), [](char x) { return x == '0'; });
    const bool frac_zero =
        std::all_of(c.bottom.begin() + 1, c.bottom.end(), [](char x) { return x == '0'; });
    return whole_zero && frac_zero;
}

bool rel_p(const TwoRowCode& c) { return !rel_z(c) && c.bottom[0] == '0'; }

bool rel_l(const TwoRowCode& a, const TwoRowCode& b) {
    validate_tworow(a);
    validate_tworow(b);
    const std::size_t frac = std::max(a.bottom.size(), b.bottom.size()) - 1;
    const std::size_t whole = std::max(a.top.size(), b.top.size());
    int order = 0;  // sign of |a| - |b|
    for (std::size_t i = 0; i < frac + whole; ++i) {
        const std::int64_t p = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(frac);
        const int x = bit_at(a, p);
        const int y = bit_at(b, p);
        if (x != y) order = x > y ? 1 : -1;
    }
    const bool neg_a = a.bottom[0] == '1';
    const bool neg_b = b.bottom[0] == '1';
    if (neg_a != neg_b) return neg_a;
    return neg_a ? order > 0 : order < 0;
}

}  // namespace autorand
