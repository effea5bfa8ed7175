#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "matchkern/partition.hpp"
#include "matchkern/rational.hpp"

namespace matchkern {

enum class Basis { Monomial, PowerSum };

// Expansion of a degree-n symmetric function over a partition-indexed basis.
// No explicit zero entries are stored.
struct BasisExpansion {
    Basis basis = Basis::Monomial;
    std::map<Partition, Rat> coeffs;

    std::string debug_json() const;  // {"a.b.c": "num/den", ...}
};

// Coefficients c_{rho,kappa} of the zonal polynomial C_rho in the monomial
// basis, normalized so that c_{rho,rho} = 1. Computed by descending-lex
// dynamic programming over the classical recurrence
//   c_{rho,kappa} = sum_{kappa < mu <= rho} [(kappa_r+t)-(kappa_l-t)]
//                   / (f_rho - f_kappa) * c_{rho,mu},
// where mu is kappa with t moved from a later part l to an earlier part r
// and re-sorted, and f_kappa = sum_i kappa_i (kappa_i - i). Contributions of
// repeated mu accumulate. An empty (zero) right-hand side yields a zero
// coefficient without division; otherwise a vanishing denominator is an error.
BasisExpansion zonal_monomial_coeffs(const Partition& rho);

// Monomial -> power-sum transition rows T_{kappa,mu}, built from the
// augmented-monomial recursion with all intermediate expansions cached under
// canonical keys. Readers run concurrently; insertion is serialized and
// first-wins, so duplicated concurrent computation stays idempotent.
class TransitionCache {
public:
    using PowerSumRow = std::map<Partition, Int>;  // expansion of augmented m~_kappa

    // T_{kappa,.}: augmented row divided by prod_j t_j!.
    BasisExpansion row(const Partition& kappa) const;

    std::shared_ptr<const PowerSumRow> augmented_row(const Partition& kappa) const;

private:
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<Partition, std::shared_ptr<const PowerSumRow>> cache_;
};

// b_mu = sum_kappa c_kappa T_{kappa,mu}, exact.
BasisExpansion to_power_sum(const BasisExpansion& monomial, const TransitionCache& transitions);

}  // namespace matchkern
