#include "matchkern/sym_group.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace matchkern {

namespace {

// Removals of a border strip of `size` cells from `shape`. A strip is fixed
// by its top row i and bottom row j: rows i..j-1 shrink to shape[r+1]-1 and
// row j keeps shape[i] + (j-i) - size cells. Calls fn(rest, height = j - i).
template <typename F>
void for_each_border_strip(const Partition& shape, int size, F&& fn) {
    int len = shape.length();
    for (int i = 0; i < len; ++i) {
        for (int j = i; j < len; ++j) {
            int keep = shape[i] + (j - i) - size;
            if (keep < 0) continue;
            if (keep >= shape[j]) continue;  // row j must lose at least one cell
            if (keep < shape.part_or_zero(j + 1)) continue;
            std::vector<int> rest(shape.parts());
            for (int r = i; r < j; ++r) rest[static_cast<std::size_t>(r)] = shape[r + 1] - 1;
            rest[static_cast<std::size_t>(j)] = keep;
            while (!rest.empty() && rest.back() == 0) rest.pop_back();
            fn(Partition(std::move(rest)), j - i);
        }
    }
}

Partition drop_first(const Partition& p) {
    return Partition(std::vector<int>(p.parts().begin() + 1, p.parts().end()));
}

}  // namespace

Int CharacterTable::dimension(const Partition& shape) const {
    int m = shape.sum();
    Partition conj = shape.conjugate();
    Int hooks = 1;
    for (int i = 0; i < shape.length(); ++i)
        for (int j = 0; j < shape[i]; ++j)
            hooks *= shape[i] - (j + 1) + conj[j] - (i + 1) + 1;
    Int num = factorial(m);
    if (num % hooks != 0) throw std::logic_error("hook length product does not divide m!");
    return num / hooks;
}

Int CharacterTable::character(const Partition& shape, const Partition& class_type) const {
    if (shape.sum() != class_type.sum())
        throw std::invalid_argument("character: shape and class type must partition the same m");
    return character_rec(shape, class_type);
}

Int CharacterTable::character_rec(const Partition& shape, const Partition& class_type) const {
    if (class_type.empty()) return 1;
    CharacterKey key{shape, class_type};
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    Partition rest_class = drop_first(class_type);
    Int sum = 0;
    for_each_border_strip(shape, class_type[0], [&](Partition rest, int height) {
        Int term = character_rec(rest, rest_class);
        if (height % 2 != 0) term = -term;
        sum += term;
    });
    {
        std::unique_lock lock(mutex_);
        cache_.emplace(std::move(key), sum);
    }
    return sum;
}

Rat CharacterTable::laplacian_eigenvalue(const Partition& rho) const {
    int m = rho.sum();
    if (m < 2 || m % 2 != 0)
        throw std::invalid_argument("laplacian_eigenvalue: partition of an even 2n >= 2 required");
    Int dim = dimension(rho);
    Int chi_transposition = 0;
    for_each_border_strip(rho, 2, [&](Partition rest, int height) {
        Int term = dimension(rest);
        if (height % 2 != 0) term = -term;
        chi_transposition += term;
    });
    int n = m / 2;
    Int transpositions = Int(n) * (2 * n - 1);
    return make_rat(transpositions * (dim - chi_transposition), dim);
}

}  // namespace matchkern
