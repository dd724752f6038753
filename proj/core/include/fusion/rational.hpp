#pragma once

#include <gmpxx.h>

#include <string>

namespace fusion {

// Exact rational scalar.  mpq_class keeps values in lowest terms with a
// positive denominator, which is exactly the canonical form we serialize.
using Rat = mpq_class;
using Int = mpz_class;

// Parses "p/q" or "p" (optional leading minus on p).  Throws UsageError on
// anything else, including q == 0.
Rat rat_from_string(const std::string& s);

// Canonical serialization: "p/q", or "p" when the denominator is 1.
std::string rat_to_string(const Rat& r);

// Generalized binomial coefficient: n may be any integer, m >= 0.
Rat binomial(long n, unsigned long m);

// base^e for integer e (negative allowed; base must be nonzero then).
Rat rat_pow(const Rat& base, long e);

}  // namespace fusion
