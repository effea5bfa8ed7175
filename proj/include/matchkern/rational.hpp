#pragma once

#include <gmpxx.h>

#include <string>

namespace matchkern {

using Int = mpz_class;
using Rat = mpq_class;

Int factorial(int m);

// num/den reduced to lowest terms, den > 0.
Rat make_rat(const Int& num, const Int& den);

double to_double(const Rat& q);

// Natural log of a positive big integer, safe for values beyond double range.
double log_of(const Int& v);

// "num/den", or just "num" when the denominator is 1.
std::string rat_string(const Rat& q);

}  // namespace matchkern
