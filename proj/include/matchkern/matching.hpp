#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "matchkern/partition.hpp"
#include "matchkern/rational.hpp"

namespace matchkern {

// Permutation of {1..m}; image(i) is stored 0-based internally.
class Permutation {
public:
    explicit Permutation(std::vector<int> images);  // images[i-1] = image of i
    static Permutation identity(int m);

    int degree() const { return static_cast<int>(images_.size()); }
    int image(int i) const { return images_[static_cast<std::size_t>(i - 1)]; }

    Permutation compose(const Permutation& other) const;  // this after other
    Permutation inverse() const;
    Partition cycle_type() const;

    bool operator==(const Permutation&) const = default;

private:
    std::vector<int> images_;
};

// Perfect matching of {1..2n}, canonical form: smaller element first within
// each pair, pairs sorted by first element. 1-indexed throughout.
class Matching {
public:
    Matching() = default;
    static Matching from_pairs(std::vector<std::pair<int, int>> pairs);

    int size() const { return static_cast<int>(pairs_.size()); }  // n
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    // partner(i) for 1 <= i <= 2n
    int partner(int i) const;
    bool contains(int a, int b) const;

    bool operator==(const Matching&) const = default;
    bool operator<(const Matching& o) const { return pairs_ < o.pairs_; }

private:
    std::vector<std::pair<int, int>> pairs_;
};

std::size_t hash_value(const Matching& m);

// x0 = {{1,2},{3,4},...,{2n-1,2n}}
Matching base_point(int n);

Matching act(const Permutation& sigma, const Matching& x);

// Partition of n formed by half-lengths of the alternating cycles of the
// multigraph x (union) y. Complete invariant under simultaneous relabeling.
Partition generalized_distance(const Matching& x, const Matching& y);

// |A_mu| = n! * prod_k 2^{t_k(k-1)} / (t_k! k^{t_k}), t_k = multiplicity of k.
Int sphere_size(const Partition& mu);

// All matchings one transposition away; n(n-1) of them for n >= 2.
std::vector<Matching> neighbors(const Matching& x);

// All of X_n in canonical order; (2n-1)!! entries.
std::vector<Matching> enumerate_matchings(int n);

Int matching_count(int n);  // (2n)!/(2^n n!)

struct QuotientDistance {
    int value = 0;
    bool exact = true;  // false: `value` is only a lower bound
};

// Exact shortest-path distance in the quotient Cayley graph via BFS when
// n <= exact_limit; otherwise the differing-pairs lower bound ceil(k/2).
QuotientDistance quotient_distance(const Matching& x, const Matching& y, int exact_limit = 6);

// Uniform over X_n; deterministic for a fixed seed.
Matching random_matching(int n, std::uint64_t seed);

Permutation random_permutation(int m, std::uint64_t seed);

// Deterministic 64-bit generator used for all randomized sampling: splitmix64
// seeding feeding bounded draws (platform-independent, unlike <random>
// distributions).
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    // Uniform in [0, bound)
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

}  // namespace matchkern

template <>
struct std::hash<matchkern::Matching> {
    std::size_t operator()(const matchkern::Matching& m) const {
        return matchkern::hash_value(m);
    }
};
