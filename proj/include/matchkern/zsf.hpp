#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "matchkern/matching.hpp"
#include "matchkern/partition.hpp"
#include "matchkern/rational.hpp"
#include "matchkern/sym_group.hpp"
#include "matchkern/symfunc.hpp"

namespace matchkern {

enum class ZsfBackendKind { ZonalPolynomial, ExplicitFormula, CharacterAveraging };

const char* backend_name(ZsfBackendKind kind);

// Zonal spherical function values phi_rho(mu) for the pair (S_{2n}, H_n),
// exact rationals, via one of three interchangeable backends. All backends
// share one insert-once cache keyed by (rho, mu); duplicated concurrent
// computation of the same entry is permitted and idempotent.
class ZsfProvider {
public:
    // Guards: the slow baselines refuse n above their limit.
    static constexpr int kExplicitLimit = 7;
    static constexpr int kAveragingLimit = 6;

    explicit ZsfProvider(ZsfBackendKind kind,
                         std::shared_ptr<CharacterTable> characters = nullptr);

    ZsfBackendKind kind() const { return kind_; }

    Rat value(const Partition& rho, const Partition& mu);

    // All p(n) values phi_rho(.); for the zonal-polynomial backend this is
    // one coefficient DP plus one basis change in total.
    std::map<Partition, Rat> table(const Partition& rho);

    // Direct backend entry points (used by cross-backend tests); these also
    // go through the shared cache when called via value()/table().
    std::map<Partition, Rat> zonal_polynomial_table(const Partition& rho);
    std::map<Partition, Rat> explicit_formula_table(const Partition& rho);
    Rat averaging_value(const Partition& rho, const Partition& mu);
    // Same sum evaluated at a caller-chosen representative with
    // d(sigma * x0, x0) = mu; exercises the class-function property.
    Rat averaging_value_at(const Partition& rho, const Permutation& sigma);

    const CharacterTable& characters() const { return *characters_; }

private:
    struct PairKey {
        Partition rho, mu;
        bool operator==(const PairKey&) const = default;
    };
    struct PairKeyHash {
        std::size_t operator()(const PairKey& k) const {
            return hash_value(k.rho) * 0x100000001b3ull + hash_value(k.mu);
        }
    };

    using SphereBuckets = std::map<Partition, std::vector<Matching>>;

    std::shared_ptr<const SphereBuckets> sphere_buckets(int n);
    std::shared_ptr<const std::vector<Permutation>> hyperoctahedral(int n);
    void store_table(const Partition& rho, const std::map<Partition, Rat>& table);

    ZsfBackendKind kind_;
    std::shared_ptr<CharacterTable> characters_;
    TransitionCache transitions_;

    std::shared_mutex cache_mutex_;
    std::unordered_map<PairKey, Rat, PairKeyHash> cache_;

    std::shared_mutex aux_mutex_;
    std::unordered_map<int, std::shared_ptr<const SphereBuckets>> buckets_;
    std::unordered_map<int, std::shared_ptr<const std::vector<Permutation>>> hyperoctahedral_;
};

// Permutation sigma with generalized_distance(sigma * x0, x0) = mu, built
// from canonical cycles on consecutive base pairs.
Permutation representative_permutation(const Partition& mu);

}  // namespace matchkern
