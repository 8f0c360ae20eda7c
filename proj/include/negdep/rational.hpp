#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace negdep {

using Rat = mpq_class;
using Int = mpz_class;

// Parses "p/q" or "p" (optionally signed) into a canonical rational.
// Rejects empty strings, missing parts, zero denominators and any float
// syntax; weights and field values in all external interfaces are rational
// strings, never binary floating point.
Rat parse_rational(const std::string& text);

std::string format_rational(const Rat& q);

Int binomial(int n, int k);

// Least common multiple of all weight denominators; 1 for an empty list.
Int common_denominator(const std::vector<Rat>& values);

// values scaled by common_denominator(values): exact integer weights.
std::vector<Int> cleared_integers(const std::vector<Rat>& values);

}  // namespace negdep
