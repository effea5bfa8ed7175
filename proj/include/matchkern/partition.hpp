#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace matchkern {

// Integer partition stored non-increasing; the canonical key for
// representations, generalized distances and truncation sets.
class Partition {
public:
    Partition() = default;
    // `parts` must already be non-increasing with all entries >= 1.
    explicit Partition(std::vector<int> parts);
    // Sorts descending and drops zeros.
    static Partition from_unsorted(std::vector<int> parts);

    int sum() const { return sum_; }
    int length() const { return static_cast<int>(parts_.size()); }
    bool empty() const { return parts_.empty(); }
    int operator[](int i) const { return parts_[static_cast<std::size_t>(i)]; }
    int part_or_zero(int i) const;
    const std::vector<int>& parts() const { return parts_; }

    Partition conjugate() const;
    Partition doubled() const;
    int multiplicity(int k) const;

    // Lexicographic; missing trailing parts compare as 0.
    std::strong_ordering operator<=>(const Partition& o) const;
    bool operator==(const Partition& o) const { return parts_ == o.parts_; }

    std::string to_string() const;  // "3.1.1"; "-" for the empty partition

private:
    std::vector<int> parts_;
    int sum_ = 0;
};

// -1 / 0 / +1; throws std::invalid_argument when the sums differ.
int lex_compare(const Partition& a, const Partition& b);

// All partitions of n in strictly descending lexicographic order; size p(n).
std::vector<Partition> enumerate_partitions(int n);

enum class TruncationHeuristic { MaxPart, Length, MinPart };

// The `size` partitions of n ranked best-first by the heuristic, ties broken
// by descending lexicographic order. MaxPart (largest rho_1 first) is the
// default; Length and MinPart are alternative proxies for low eigenvalues.
std::vector<Partition> select_truncation(
    int n, int size, TruncationHeuristic h = TruncationHeuristic::MaxPart);

std::size_t hash_value(const Partition& p);

}  // namespace matchkern

template <>
struct std::hash<matchkern::Partition> {
    std::size_t operator()(const matchkern::Partition& p) const {
        return matchkern::hash_value(p);
    }
};
