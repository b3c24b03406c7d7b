#include "dyadic/bigint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace dyadic {

BigInt::BigInt(std::int64_t value) {
    negative_ = value < 0;
    std::uint64_t mag = negative_ ? (~static_cast<std::uint64_t>(value) + 1) : static_cast<std::uint64_t>(value);
    while (mag != 0) {
        limbs_.push_back(static_cast<std::uint32_t>(mag & 0xffffffffu));
        mag >>= 32;
    }
}

BigInt BigInt::from_limbs(std::vector<std::uint32_t> limbs, bool negative) {
    BigInt out;
    out.limbs_ = std::move(limbs);
    out.negative_ = negative;
    out.trim();
    return out;
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) negative_ = false;
}

int BigInt::compare_magnitude(const BigInt& a, const BigInt& b) {
    if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
}

std::vector<std::uint32_t> BigInt::add_magnitude(const std::vector<std::uint32_t>& a,
                                                 const std::vector<std::uint32_t>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    std::vector<std::uint32_t> out(big.size() + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < big.size(); ++i) {
        std::uint64_t sum = carry + big[i] + (i < small.size() ? small[i] : 0u);
        out[i] = static_cast<std::uint32_t>(sum);
        carry = sum >> 32;
    }
    out[big.size()] = static_cast<std::uint32_t>(carry);
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<std::uint32_t> BigInt::sub_magnitude(const std::vector<std::uint32_t>& a,
                                                 const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out(a.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t diff = static_cast<std::int64_t>(a[i]) - (i < b.size() ? b[i] : 0) - borrow;
        borrow = diff < 0;
        if (diff < 0) diff += (std::int64_t{1} << 32);
        out[i] = static_cast<std::uint32_t>(diff);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

BigInt BigInt::operator-() const {
    BigInt out = *this;
    if (!out.is_zero()) out.negative_ = !out.negative_;
    return out;
}

BigInt BigInt::abs() const {
    BigInt out = *this;
    out.negative_ = false;
    return out;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    BigInt out;
    if (a.negative_ == b.negative_) {
        out.limbs_ = BigInt::add_magnitude(a.limbs_, b.limbs_);
        out.negative_ = a.negative_;
    } else {
        int cmp = BigInt::compare_magnitude(a, b);
        if (cmp == 0) return BigInt{};
        const BigInt& big = cmp > 0 ? a : b;
        const BigInt& small = cmp > 0 ? b : a;
        out.limbs_ = BigInt::sub_magnitude(big.limbs_, small.limbs_);
        out.negative_ = big.negative_;
    }
    out.trim();
    return out;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt{};
    BigInt out;
    out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        const std::uint64_t ai = a.limbs_[i];
        for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
            std::uint64_t cur = out.limbs_[i + j] + ai * b.limbs_[j] + carry;
            out.limbs_[i + j] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        std::size_t pos = i + b.limbs_.size();
        while (carry != 0) {
            std::uint64_t cur = out.limbs_[pos] + carry;
            out.limbs_[pos] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
            ++pos;
        }
    }
    out.negative_ = a.negative_ != b.negative_;
    out.trim();
    return out;
}

BigInt BigInt::pow(unsigned exponent) const {
    BigInt result(1);
    BigInt base = *this;
    while (exponent != 0) {
        if (exponent & 1u) result *= base;
        exponent >>= 1;
        if (exponent != 0) base *= base;
    }
    return result;
}

bool operator==(const BigInt& a, const BigInt& b) {
    return a.negative_ == b.negative_ && a.limbs_ == b.limbs_;
}

std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
    if (a.negative_ != b.negative_) return a.negative_ ? std::strong_ordering::less : std::strong_ordering::greater;
    int cmp = BigInt::compare_magnitude(a, b);
    if (a.negative_) cmp = -cmp;
    if (cmp < 0) return std::strong_ordering::less;
    if (cmp > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string BigInt::to_decimal() const {
    if (is_zero()) return "0";
    std::vector<std::uint32_t> work = limbs_;
    std::string digits;
    while (!work.empty()) {
        std::uint64_t rem = 0;
        for (std::size_t i = work.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | work[i];
            work[i] = static_cast<std::uint32_t>(cur / 1000000000u);
            rem = cur % 1000000000u;
        }
        while (!work.empty() && work.back() == 0) work.pop_back();
        for (int d = 0; d < 9; ++d) {
            digits.push_back(static_cast<char>('0' + rem % 10));
            rem /= 10;
        }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    if (negative_) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

BigInt BigInt::from_decimal(std::string_view text) {
    bool neg = false;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        neg = text[pos] == '-';
        ++pos;
    }
    if (pos == text.size()) throw std::invalid_argument("empty integer literal");
    BigInt out;
    while (pos < text.size()) {
        const std::size_t take = std::min<std::size_t>(9, text.size() - pos);
        std::uint32_t chunk = 0;
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < take; ++i) {
            const char c = text[pos + i];
            if (c < '0' || c > '9') throw std::invalid_argument("bad digit in integer literal");
            chunk = chunk * 10 + static_cast<std::uint32_t>(c - '0');
            scale *= 10;
        }
        out = out * BigInt(scale) + BigInt(static_cast<std::int64_t>(chunk));
        pos += take;
    }
    if (neg) return -out;
    return out;
}

std::size_t BigInt::bit_length() const {
    if (limbs_.empty()) return 0;
    return (limbs_.size() - 1) * 32 + (32u - static_cast<unsigned>(std::countl_zero(limbs_.back())));
}

namespace {

// top three limbs as a long double in [1, 2^96), plus the dropped bit offset
long double leading_mantissa(const BigInt& v, std::size_t& dropped_bits) {
    const std::size_t n = v.limb_count();
    const std::size_t start = n > 3 ? n - 3 : 0;
    long double mag = 0.0L;
    for (std::size_t i = n; i-- > start;) {
        mag = mag * 4294967296.0L + static_cast<long double>(v.limb(i));
    }
    dropped_bits = start * 32;
    return mag;
}

}  // namespace

long double BigInt::to_long_double() const {
    if (is_zero()) return 0.0L;
    std::size_t dropped = 0;
    long double mag = leading_mantissa(*this, dropped);
    mag = std::ldexp(mag, static_cast<int>(dropped));
    return negative_ ? -mag : mag;
}

long double BigInt::log2() const {
    if (is_zero()) throw std::domain_error("log2 of zero");
    std::size_t dropped = 0;
    const long double mag = leading_mantissa(*this, dropped);
    return std::log2(mag) + static_cast<long double>(dropped);
}

namespace {

using Limbs = std::vector<std::uint32_t>;

int limbs_compare(const Limbs& a, const Limbs& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

void limbs_sub_inplace(Limbs& a, const Limbs& b) {  // requires a >= b
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t diff = static_cast<std::int64_t>(a[i]) - (i < b.size() ? b[i] : 0) - borrow;
        borrow = diff < 0;
        if (diff < 0) diff += (std::int64_t{1} << 32);
        a[i] = static_cast<std::uint32_t>(diff);
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::size_t limbs_trailing_zero_bits(const Limbs& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0) return i * 32 + static_cast<std::size_t>(std::countr_zero(v[i]));
    }
    return 0;
}

void limbs_shift_right(Limbs& v, std::size_t bits) {
    const std::size_t whole = bits / 32, part = bits % 32;
    if (whole >= v.size()) {
        v.clear();
        return;
    }
    if (whole > 0) v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(whole));
    if (part > 0) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::uint32_t high = i + 1 < v.size() ? v[i + 1] : 0;
            v[i] = static_cast<std::uint32_t>((v[i] >> part) | (static_cast<std::uint64_t>(high) << (32 - part)));
        }
    }
    while (!v.empty() && v.back() == 0) v.pop_back();
}

void limbs_shift_left(Limbs& v, std::size_t bits) {
    if (v.empty()) return;
    const std::size_t whole = bits / 32, part = bits % 32;
    if (part > 0) {
        std::uint32_t carry = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::uint64_t cur = (static_cast<std::uint64_t>(v[i]) << part) | carry;
            v[i] = static_cast<std::uint32_t>(cur);
            carry = static_cast<std::uint32_t>(cur >> 32);
        }
        if (carry != 0) v.push_back(carry);
    }
    v.insert(v.begin(), whole, 0u);
}

Limbs copy_limbs(const BigInt& v) {
    Limbs out(v.limb_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = v.limb(i);
    return out;
}

}  // namespace

BigInt gcd(const BigInt& a, const BigInt& b) {
    Limbs x = copy_limbs(a);
    Limbs y = copy_limbs(b);
    if (x.empty()) return b.abs();
    if (y.empty()) return a.abs();
    const std::size_t tx = limbs_trailing_zero_bits(x);
    const std::size_t ty = limbs_trailing_zero_bits(y);
    const std::size_t shift = std::min(tx, ty);
    limbs_shift_right(x, tx);
    limbs_shift_right(y, ty);
    while (!y.empty()) {
        if (limbs_compare(x, y) > 0) std::swap(x, y);
        limbs_sub_inplace(y, x);
        if (!y.empty()) limbs_shift_right(y, limbs_trailing_zero_bits(y));
    }
    limbs_shift_left(x, shift);
    return BigInt::from_limbs(std::move(x), false);
}

std::pair<BigInt, BigInt> divmod(const BigInt& value, const BigInt& divisor) {
    if (divisor.is_zero()) throw std::domain_error("division by zero");
    Limbs num = copy_limbs(value);
    Limbs den = copy_limbs(divisor);
    if (limbs_compare(num, den) < 0) return {BigInt{}, value};
    const std::size_t shift = value.bit_length() - divisor.bit_length();
    Limbs d = den;
    limbs_shift_left(d, shift);
    Limbs quotient(shift / 32 + 1, 0u);
    for (std::size_t i = shift + 1; i-- > 0;) {
        if (limbs_compare(num, d) >= 0) {
            limbs_sub_inplace(num, d);
            quotient[i / 32] |= (1u << (i % 32));
        }
        limbs_shift_right(d, 1);
    }
    BigInt q = BigInt::from_limbs(std::move(quotient), value.is_negative() != divisor.is_negative());
    BigInt r = BigInt::from_limbs(std::move(num), value.is_negative());
    return {q, r};
}

BigInt pow2(unsigned exponent) { return BigInt(2).pow(exponent); }

Rational::Rational(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) throw std::invalid_argument("zero denominator");
    reduce();
}

void Rational::reduce() {
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    const BigInt g = gcd(num_, den_);
    if (g > BigInt(1)) {
        num_ = divmod(num_, g).first;
        den_ = divmod(den_, g).first;
    }
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("division by zero rational");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::operator-() const {
    Rational out = *this;
    out.num_ = -out.num_;
    return out;
}

bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return (a.num_ * b.den_) <=> (b.num_ * a.den_);
}

std::string Rational::to_string() const {
    if (den_ == BigInt(1)) return num_.to_decimal();
    return num_.to_decimal() + "/" + den_.to_decimal();
}

Rational Rational::parse(std::string_view text) {
    const std::size_t slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(BigInt::from_decimal(text), BigInt(1));
    return Rational(BigInt::from_decimal(text.substr(0, slash)), BigInt::from_decimal(text.substr(slash + 1)));
}

long double Rational::to_long_double() const {
    if (num_.is_zero()) return 0.0L;
    std::size_t dropped_n = 0, dropped_d = 0;
    const long double mn = leading_mantissa(num_, dropped_n);
    const long double md = leading_mantissa(den_, dropped_d);
    const long double mag =
        std::ldexp(mn / md, static_cast<int>(dropped_n) - static_cast<int>(dropped_d));
    return num_.is_negative() ? -mag : mag;
}

}  // namespace dyadic
