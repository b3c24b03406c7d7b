#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dyadic {

/// Signed arbitrary-precision integer, little-endian base-2^32 limbs.
/// Counting sequences here double in bit length per step (the k = 16 cap
/// needs ~57k bits), so schoolbook arithmetic is plenty.
class BigInt {
  public:
    BigInt() = default;
    BigInt(std::int64_t value);

    static BigInt from_decimal(std::string_view text);  // throws std::invalid_argument
    static BigInt from_limbs(std::vector<std::uint32_t> limbs, bool negative);

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return negative_; }
    int sign() const { return is_zero() ? 0 : (negative_ ? -1 : 1); }

    std::size_t limb_count() const { return limbs_.size(); }
    std::uint32_t limb(std::size_t i) const { return limbs_[i]; }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    BigInt pow(unsigned exponent) const;

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b);

    std::string to_decimal() const;

    /// Bits in the magnitude; 0 for zero.
    std::size_t bit_length() const;

    /// Nearest long double; +-inf past the exponent range (~2^16384).
    long double to_long_double() const;

    /// log2 of the magnitude (requires nonzero); exact to long double precision.
    long double log2() const;

  private:
    static int compare_magnitude(const BigInt& a, const BigInt& b);
    static std::vector<std::uint32_t> add_magnitude(const std::vector<std::uint32_t>& a,
                                                    const std::vector<std::uint32_t>& b);
    // requires |a| >= |b|
    static std::vector<std::uint32_t> sub_magnitude(const std::vector<std::uint32_t>& a,
                                                    const std::vector<std::uint32_t>& b);
    void trim();

    bool negative_ = false;
    std::vector<std::uint32_t> limbs_;  // empty means zero
};

/// Division-free binary gcd of the magnitudes.
BigInt gcd(const BigInt& a, const BigInt& b);

/// Quotient truncated toward zero, remainder with the sign of `value`.
std::pair<BigInt, BigInt> divmod(const BigInt& value, const BigInt& divisor);

BigInt pow2(unsigned exponent);

/// Exact rational, stored in lowest terms with positive denominator.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t value) : num_(value), den_(1) {}
    Rational(BigInt numerator, BigInt denominator);  // throws on zero denominator

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b);
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// "p/q", or just "p" when q == 1.
    std::string to_string() const;
    static Rational parse(std::string_view text);

    /// Overflow-safe even when both parts exceed the long double range.
    long double to_long_double() const;

  private:
    void reduce();
    BigInt num_;
    BigInt den_;
};

}  // namespace dyadic
