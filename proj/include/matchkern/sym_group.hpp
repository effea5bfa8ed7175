#pragma once

#include <shared_mutex>
#include <unordered_map>

#include "matchkern/partition.hpp"
#include "matchkern/rational.hpp"

namespace matchkern {

struct CharacterKey {
    Partition shape;
    Partition class_type;
    bool operator==(const CharacterKey&) const = default;
};

struct CharacterKeyHash {
    std::size_t operator()(const CharacterKey& k) const {
        return hash_value(k.shape) * 0x9e3779b97f4a7c15ull + hash_value(k.class_type);
    }
};

// Symmetric-group character machinery. Character values are memoized on
// (remaining shape, remaining class type); readers run concurrently, writes
// are insert-if-absent under an exclusive lock.
class CharacterTable {
public:
    // Hook length formula: d = m! / prod of hook lengths.
    Int dimension(const Partition& shape) const;

    // Murnaghan-Nakayama border-strip recursion.
    Int character(const Partition& shape, const Partition& class_type) const;

    // Laplacian eigenvalue of the all-transpositions Cayley graph of S_{2n}:
    //   lambda = |W|/d * (d - chi((2,1,...,1))),  |W| = n(2n-1).
    // Uses only border strips of size 2 plus dimension calls.
    Rat laplacian_eigenvalue(const Partition& rho) const;

private:
    Int character_rec(const Partition& shape, const Partition& class_type) const;

    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<CharacterKey, Int, CharacterKeyHash> cache_;
};

}  // namespace matchkern
