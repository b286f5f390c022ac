#pragma once

#include <gmpxx.h>

#include <string>

namespace treecross {

/// Exact fraction. Values built from a numerator/denominator pair need
/// canonicalize() before comparison.
using Rational = mpq_class;
using BigInt = mpz_class;

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace treecross
