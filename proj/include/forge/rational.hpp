#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

using Rational = mpq_class;
using Vec = std::vector<Rational>;

/// Parses "3", "-7/2", "0.25", "1e-3" or "2.5E2" into an exact rational.
/// Decimal inputs are converted exactly (0.3 becomes 3/10).
Rational parse_rational(std::string_view text);

/// Canonical text form: "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& value);
std::string to_string(const Vec& values, std::string_view sep = ", ");

double to_double(const Rational& value);

Rational dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const Rational& s);
Vec zeros(std::size_t n);
Vec unit(std::size_t n, std::size_t i);

// Lexicographic order on equal-length vectors.
bool lex_less(const Vec& a, const Vec& b);

Rational norm_l1(const Vec& v);
Rational norm_linf(const Vec& v);

}  // namespace forge
