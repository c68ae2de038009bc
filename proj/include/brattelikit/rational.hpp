#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace brattelikit {

// Exact arithmetic scalar. GMP keeps the §-series and cone products exact at
// the depths the certificates need.
using Rational = mpq_class;
using BigInt = mpz_class;

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

// "p/q" or "p"; throws on malformed input.
Rational rational_from_string(const std::string& s);
std::string rational_to_string(const Rational& q);

std::vector<double> to_double_vec(const std::vector<Rational>& v);

// Conversion shims so geometry code can be written once for both scalar modes.
template <class S>
S scalar_from_rational(const Rational& q);
template <>
inline double scalar_from_rational<double>(const Rational& q) { return q.get_d(); }
template <>
inline Rational scalar_from_rational<Rational>(const Rational& q) { return q; }

template <class S>
S scalar_from_ll(long long v);
template <>
inline double scalar_from_ll<double>(long long v) { return static_cast<double>(v); }
template <>
inline Rational scalar_from_ll<Rational>(long long v) { return Rational(static_cast<long>(v)); }

}  // namespace brattelikit
