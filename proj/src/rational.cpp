#include "matchkern/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace matchkern {

Int factorial(int m) {
    if (m < 0) throw std::invalid_argument("factorial of negative value");
    Int r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(m));
    return r;
}

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

double to_double(const Rat& q) { return q.get_d(); }

double log_of(const Int& v) {
    if (v <= 0) throw std::invalid_argument("log of non-positive integer");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

std::string rat_string(const Rat& q) { return q.get_str(); }

}  // namespace matchkern
