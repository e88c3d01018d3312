#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace pamap {

// Universal exact scalar. mpq_class keeps gcd(num,den)=1 and den>0 after
// every canonicalize(); all constructors below canonicalize.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat(const BigInt& num, const BigInt& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Always "p/q" with q >= 1, integers as "p/1". This is the wire format for
// plmap files and reports; parse_rational inverts it exactly.
std::string rat_str(const Rational& q);

// Accepts "p/q", plain integers, and decimal strings ("0.125" -> 1/8).
// Throws ParseError on anything else.
Rational parse_rational(const std::string& s);

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational rat_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rat_max(const Rational& a, const Rational& b) { return a > b ? a : b; }

// floor(num/den) as a BigInt, exact.
BigInt rat_floor(const Rational& q);

// FNV-1a over a byte string; used for content hashes of serialized values.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace pamap
