#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dyadic/bigint.hpp"
#include "dyadic/rng.hpp"

using dyadic::BigInt;
using dyadic::Rational;

TEST_CASE("small arithmetic agrees with int64") {
    dyadic::SplitMix64 rng(42);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::int64_t a = static_cast<std::int64_t>(rng.next() % 2000001) - 1000000;
        const std::int64_t b = static_cast<std::int64_t>(rng.next() % 2000001) - 1000000;
        CHECK(BigInt(a) + BigInt(b) == BigInt(a + b));
        CHECK(BigInt(a) - BigInt(b) == BigInt(a - b));
        CHECK(BigInt(a) * BigInt(b) == BigInt(a * b));
        CHECK((BigInt(a) < BigInt(b)) == (a < b));
    }
}

TEST_CASE("decimal round trip on large powers") {
    const BigInt big = BigInt(1000000007).pow(13);
    CHECK(BigInt::from_decimal(big.to_decimal()) == big);
    CHECK(BigInt::from_decimal("-123456789012345678901234567890").to_decimal() ==
          "-123456789012345678901234567890");
    CHECK(BigInt(0).to_decimal() == "0");
    CHECK_THROWS(BigInt::from_decimal("12x"));
}

TEST_CASE("divmod and gcd") {
    const BigInt a = BigInt::from_decimal("123456789123456789123456789123456789");
    const BigInt b = BigInt::from_decimal("987654321987");
    const auto [q, r] = dyadic::divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r < b);
    CHECK(r.sign() >= 0);

    const BigInt g = dyadic::gcd(BigInt(2 * 3 * 5 * 7 * 11) * BigInt(1000003), BigInt(3 * 7) * BigInt(1000003));
    CHECK(g == BigInt(21) * BigInt(1000003));
    CHECK(dyadic::gcd(BigInt(0), BigInt(-12)) == BigInt(12));
}

TEST_CASE("divmod matches int64 semantics on random pairs") {
    dyadic::SplitMix64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const std::int64_t a = static_cast<std::int64_t>(rng.next() % 2000000001) - 1000000000;
        const std::int64_t b = static_cast<std::int64_t>(rng.next() % 999983) + 1;
        const auto [q, r] = dyadic::divmod(BigInt(a), BigInt(b));
        CHECK(q == BigInt(a / b));
        CHECK(r == BigInt(a % b));
    }
}

TEST_CASE("bit length and log2") {
    CHECK(BigInt(0).bit_length() == 0);
    CHECK(BigInt(1).bit_length() == 1);
    CHECK(dyadic::pow2(100).bit_length() == 101);
    CHECK(std::abs(static_cast<double>(dyadic::pow2(1000).log2() - 1000.0L)) < 1e-12);
    const BigInt v = BigInt::from_decimal("1000000000000000000000000000000");
    CHECK(std::abs(static_cast<double>(v.log2()) - 30.0 * std::log2(10.0)) < 1e-12);
}

TEST_CASE("rationals reduce and compare exactly") {
    const Rational half(BigInt(2), BigInt(4));
    CHECK(half.to_string() == "1/2");
    CHECK(half == Rational(1, 2));
    CHECK(Rational(49, 82) < Rational(6724, 11047));  // f_4 < f_5
    CHECK(Rational(-3, -6) == half);
    CHECK((Rational(1, 3) + Rational(1, 6)).to_string() == "1/2");
    CHECK((Rational(1, 3) - Rational(1, 2)).to_string() == "-1/6");
    CHECK((Rational(3, 4) * Rational(2, 3)).to_string() == "1/2");
    CHECK((Rational(1, 2) / Rational(1, 8)).to_string() == "4");
    CHECK(Rational::parse("49/82") == Rational(49, 82));
    CHECK_THROWS(Rational(BigInt(1), BigInt(0)));
}

TEST_CASE("rational to long double survives huge parts") {
    // both parts far beyond the long double exponent range
    const BigInt n = dyadic::pow2(40000) * BigInt(3);
    const BigInt d = dyadic::pow2(40001);
    const Rational r(n, d);
    CHECK(static_cast<double>(r.to_long_double()) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(static_cast<double>(Rational(1, 3).to_long_double()) == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("uniform draws are in range and unbiased enough") {
    dyadic::SplitMix64 rng(123);
    std::uint64_t counts[7] = {0};
    for (int i = 0; i < 70000; ++i) ++counts[rng.uniform(7)];
    for (std::uint64_t c : counts) {
        CHECK(c > 9000);
        CHECK(c < 11000);
    }
}
