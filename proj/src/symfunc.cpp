#include "matchkern/symfunc.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace matchkern {

std::string BasisExpansion::debug_json() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [key, value] : coeffs) {
        if (!first) out += ", ";
        first = false;
        out += "\"" + key.to_string() + "\": \"" + rat_string(value) + "\"";
    }
    out += "}";
    return out;
}

namespace {

long f_value(const Partition& p) {
    long f = 0;
    for (int i = 0; i < p.length(); ++i)
        f += static_cast<long>(p[i]) * (p[i] - (i + 1));
    return f;
}

}  // namespace

BasisExpansion zonal_monomial_coeffs(const Partition& rho) {
    if (rho.sum() < 1) throw std::invalid_argument("zonal_monomial_coeffs: n >= 1 required");
    BasisExpansion out{Basis::Monomial, {}};
    out.coeffs.emplace(rho, Rat(1));
    long f_rho = f_value(rho);

    // Partitions of n strictly below rho, visited in descending lex order.
    auto all = enumerate_partitions(rho.sum());
    for (const auto& kappa : all) {
        if (!(kappa < rho)) continue;
        Rat rhs = 0;
        std::vector<int> mu(kappa.parts());
        for (int l = 1; l < kappa.length(); ++l) {
            for (int t = 1; t <= kappa[l]; ++t) {
                for (int r = 0; r < l; ++r) {
                    mu.assign(kappa.parts().begin(), kappa.parts().end());
                    mu[static_cast<std::size_t>(r)] += t;
                    mu[static_cast<std::size_t>(l)] -= t;
                    Partition sorted = Partition::from_unsorted(mu);
                    if (!(kappa < sorted) || rho < sorted) continue;
                    auto it = out.coeffs.find(sorted);
                    if (it == out.coeffs.end()) continue;
                    int numerator = (kappa[r] + t) - (kappa[l] - t);
                    rhs += Rat(numerator) * it->second;
                }
            }
        }
        if (rhs == 0) continue;  // dominance-incomparable kappa; coefficient vanishes
        long denom = f_rho - f_value(kappa);
        if (denom == 0)
            throw std::logic_error("zonal coefficient recurrence: vanishing denominator");
        out.coeffs.emplace(kappa, rhs / Rat(denom));
    }
    return out;
}

std::shared_ptr<const TransitionCache::PowerSumRow> TransitionCache::augmented_row(
    const Partition& kappa) const {
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(kappa);
        if (it != cache_.end()) return it->second;
    }
    PowerSumRow result;
    int r = kappa.length();
    if (r == 1) {
        result.emplace(kappa, Int(1));
    } else if (r == 2) {
        result.emplace(kappa, Int(1));
        result.emplace(Partition({kappa[0] + kappa[1]}), Int(-1));
    } else {
        std::vector<int> head(kappa.parts().begin(), kappa.parts().end() - 1);
        int last = kappa[r - 1];
        // p_{kappa_r} * m~_{head}
        auto head_row = augmented_row(Partition(head));
        for (const auto& [key, value] : *head_row) {
            std::vector<int> shifted(key.parts());
            shifted.push_back(last);
            result[Partition::from_unsorted(std::move(shifted))] += value;
        }
        // minus m~ with kappa_r merged into each earlier part
        for (int i = 0; i < r - 1; ++i) {
            std::vector<int> merged(head);
            merged[static_cast<std::size_t>(i)] += last;
            auto merged_row = augmented_row(Partition::from_unsorted(std::move(merged)));
            for (const auto& [key, value] : *merged_row) result[key] -= value;
        }
        for (auto it = result.begin(); it != result.end();) {
            if (it->second == 0)
                it = result.erase(it);
            else
                ++it;
        }
    }
    auto shared = std::make_shared<const PowerSumRow>(std::move(result));
    {
        std::unique_lock lock(mutex_);
        auto [it, inserted] = cache_.emplace(kappa, shared);
        return it->second;  // first insertion wins
    }
}

BasisExpansion TransitionCache::row(const Partition& kappa) const {
    auto augmented = augmented_row(kappa);
    Int mult_factorials = 1;
    for (int k = 1; k <= (kappa.empty() ? 0 : kappa[0]); ++k)
        mult_factorials *= factorial(kappa.multiplicity(k));
    BasisExpansion out{Basis::PowerSum, {}};
    for (const auto& [key, value] : *augmented)
        out.coeffs.emplace(key, make_rat(value, mult_factorials));
    return out;
}

BasisExpansion to_power_sum(const BasisExpansion& monomial, const TransitionCache& transitions) {
    if (monomial.basis != Basis::Monomial)
        throw std::invalid_argument("to_power_sum expects a monomial-basis expansion");
    BasisExpansion out{Basis::PowerSum, {}};
    for (const auto& [kappa, c] : monomial.coeffs) {
        auto row = transitions.augmented_row(kappa);
        Int mult_factorials = 1;
        for (int k = 1; k <= (kappa.empty() ? 0 : kappa[0]); ++k)
            mult_factorials *= factorial(kappa.multiplicity(k));
        Rat scale = c / Rat(mult_factorials);
        for (const auto& [mu, t] : *row) {
            Rat& slot = out.coeffs[mu];
            slot += scale * Rat(t);
        }
    }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();) {
        if (it->second == 0)
            it = out.coeffs.erase(it);
        else
            ++it;
    }
    return out;
}

}  // namespace matchkern
