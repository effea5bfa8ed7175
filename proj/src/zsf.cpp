#include "matchkern/zsf.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace matchkern {

const char* backend_name(ZsfBackendKind kind) {
    switch (kind) {
        case ZsfBackendKind::ZonalPolynomial: return "zp";
        case ZsfBackendKind::ExplicitFormula: return "explicit";
        case ZsfBackendKind::CharacterAveraging: return "avg";
    }
    return "?";
}

ZsfProvider::ZsfProvider(ZsfBackendKind kind, std::shared_ptr<CharacterTable> characters)
    : kind_(kind),
      characters_(characters ? std::move(characters) : std::make_shared<CharacterTable>()) {}

Rat ZsfProvider::value(const Partition& rho, const Partition& mu) {
    if (rho.sum() != mu.sum())
        throw std::invalid_argument("zsf: rho and mu must partition the same n");
    PairKey key{rho, mu};
    {
        std::shared_lock lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    if (kind_ == ZsfBackendKind::CharacterAveraging) {
        Rat v = averaging_value(rho, mu);
        std::unique_lock lock(cache_mutex_);
        auto [it, inserted] = cache_.emplace(std::move(key), std::move(v));
        return it->second;
    }
    // Table-at-a-time backends: one miss fills the whole rho row.
    auto tab = table(rho);
    return tab.at(mu);
}

std::map<Partition, Rat> ZsfProvider::table(const Partition& rho) {
    // Serve from cache when the full row is present.
    {
        std::shared_lock lock(cache_mutex_);
        std::map<Partition, Rat> out;
        bool complete = true;
        for (const auto& mu : enumerate_partitions(rho.sum())) {
            auto it = cache_.find(PairKey{rho, mu});
            if (it == cache_.end()) {
                complete = false;
                break;
            }
            out.emplace(mu, it->second);
        }
        if (complete) return out;
    }
    std::map<Partition, Rat> out;
    switch (kind_) {
        case ZsfBackendKind::ZonalPolynomial:
            out = zonal_polynomial_table(rho);
            break;
        case ZsfBackendKind::ExplicitFormula:
            out = explicit_formula_table(rho);
            break;
        case ZsfBackendKind::CharacterAveraging:
            for (const auto& mu : enumerate_partitions(rho.sum()))
                out.emplace(mu, averaging_value(rho, mu));
            break;
    }
    store_table(rho, out);
    return out;
}

void ZsfProvider::store_table(const Partition& rho, const std::map<Partition, Rat>& table) {
    std::unique_lock lock(cache_mutex_);
    for (const auto& [mu, v] : table) cache_.emplace(PairKey{rho, mu}, v);
}

std::map<Partition, Rat> ZsfProvider::zonal_polynomial_table(const Partition& rho) {
    int n = rho.sum();
    BasisExpansion b = to_power_sum(zonal_monomial_coeffs(rho), transitions_);
    Partition ones(std::vector<int>(static_cast<std::size_t>(n), 1));
    auto it1 = b.coeffs.find(ones);
    if (it1 == b.coeffs.end() || it1->second == 0)
        throw std::logic_error("zonal polynomial has vanishing coefficient at p_(1,...,1)");
    Rat b1 = it1->second;
    std::map<Partition, Rat> out;
    for (const auto& mu : enumerate_partitions(n)) {
        auto it = b.coeffs.find(mu);
        if (it == b.coeffs.end()) {
            out.emplace(mu, Rat(0));
            continue;
        }
        out.emplace(mu, it->second / (b1 * Rat(sphere_size(mu))));
    }
    return out;
}

std::shared_ptr<const ZsfProvider::SphereBuckets> ZsfProvider::sphere_buckets(int n) {
    {
        std::shared_lock lock(aux_mutex_);
        auto it = buckets_.find(n);
        if (it != buckets_.end()) return it->second;
    }
    auto buckets = std::make_shared<SphereBuckets>();
    Matching x0 = base_point(n);
    for (auto& x : enumerate_matchings(n)) {
        Partition mu = generalized_distance(x, x0);
        (*buckets)[mu].push_back(std::move(x));
    }
    std::unique_lock lock(aux_mutex_);
    auto [it, inserted] = buckets_.emplace(n, std::move(buckets));
    return it->second;
}

std::shared_ptr<const std::vector<Permutation>> ZsfProvider::hyperoctahedral(int n) {
    {
        std::shared_lock lock(aux_mutex_);
        auto it = hyperoctahedral_.find(n);
        if (it != hyperoctahedral_.end()) return it->second;
    }
    auto group = std::make_shared<std::vector<Permutation>>();
    std::vector<int> pair_order(static_cast<std::size_t>(n));
    std::iota(pair_order.begin(), pair_order.end(), 1);
    do {
        for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
            std::vector<int> img(static_cast<std::size_t>(2 * n));
            for (int i = 0; i < n; ++i) {
                int target = pair_order[static_cast<std::size_t>(i)];
                int lo = 2 * target - 1, hi = 2 * target;
                if (mask >> i & 1) std::swap(lo, hi);
                img[static_cast<std::size_t>(2 * i)] = lo;
                img[static_cast<std::size_t>(2 * i + 1)] = hi;
            }
            group->push_back(Permutation(std::move(img)));
        }
    } while (std::next_permutation(pair_order.begin(), pair_order.end()));
    std::unique_lock lock(aux_mutex_);
    auto [it, inserted] = hyperoctahedral_.emplace(n, std::move(group));
    return it->second;
}

namespace {

// x0-good tableau of shape 2*rho: row i holds the consecutive values
// offset_i+1 .. offset_i+2*rho_i, so every base pair sits in one row in
// adjacent columns. Odd columns (1-indexed 1,3,5,...) of column length
// rho'_j may be permuted by the restricted column stabilizer C'_t.
struct GoodTableau {
    std::vector<long> row_offset;            // per row
    std::vector<std::vector<int>> columns;   // odd columns: list of rows
    Partition shape2;
};

GoodTableau make_good_tableau(const Partition& rho) {
    GoodTableau t;
    t.shape2 = rho.doubled();
    long off = 0;
    for (int i = 0; i < t.shape2.length(); ++i) {
        t.row_offset.push_back(off);
        off += t.shape2[i];
    }
    Partition conj = rho.conjugate();
    for (int j = 0; j < conj.length(); ++j) {
        std::vector<int> rows;
        for (int i = 0; i < conj[j]; ++i) rows.push_back(i);
        t.columns.push_back(std::move(rows));
    }
    return t;
}

int permutation_sign(const std::vector<int>& perm) {
    int inv = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

}  // namespace

std::map<Partition, Rat> ZsfProvider::explicit_formula_table(const Partition& rho) {
    int n = rho.sum();
    if (n > kExplicitLimit)
        throw std::domain_error("explicit-formula backend limited to n <= " +
                                std::to_string(kExplicitLimit));
    auto buckets = sphere_buckets(n);
    GoodTableau tab = make_good_tableau(rho);

    std::map<Partition, Int> accum;
    for (const auto& [mu, xs] : *buckets) accum.emplace(mu, Int(0));

    // One permutation choice per odd column; element -> row map per choice.
    std::vector<std::vector<int>> col_perm;
    for (const auto& rows : tab.columns) {
        std::vector<int> idx(rows.size());
        std::iota(idx.begin(), idx.end(), 0);
        col_perm.push_back(std::move(idx));
    }
    std::vector<int> row_of(static_cast<std::size_t>(2 * n));

    auto scan = [&]() {
        int sign = 1;
        for (const auto& perm : col_perm) sign *= permutation_sign(perm);
        for (std::size_t j = 0; j < tab.columns.size(); ++j) {
            const auto& rows = tab.columns[j];
            const auto& perm = col_perm[j];
            for (std::size_t k = 0; k < rows.size(); ++k) {
                // value originally in row rows[perm[k]] moves to row rows[k]
                long value = tab.row_offset[static_cast<std::size_t>(rows[perm[k]])] +
                             (2 * static_cast<long>(j) + 1);
                row_of[static_cast<std::size_t>(value - 1)] = rows[k];
                // even-column neighbour stays put
                long even_value = tab.row_offset[static_cast<std::size_t>(rows[k])] +
                                  (2 * static_cast<long>(j) + 2);
                row_of[static_cast<std::size_t>(even_value - 1)] = rows[k];
            }
        }
        for (auto& [mu, xs] : *buckets) {
            long covered = 0;
            for (const auto& x : xs) {
                bool ok = true;
                for (const auto& [a, b] : x.pairs()) {
                    if (row_of[static_cast<std::size_t>(a - 1)] !=
                        row_of[static_cast<std::size_t>(b - 1)]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) ++covered;
            }
            accum.at(mu) += sign * covered;
        }
    };

    // Odometer over per-column permutations.
    std::size_t ncols = col_perm.size();
    while (true) {
        scan();
        std::size_t c = 0;
        for (; c < ncols; ++c) {
            if (std::next_permutation(col_perm[c].begin(), col_perm[c].end())) break;
            // wrapped back to identity, carry on to the next column
        }
        if (c == ncols) break;
    }

    std::map<Partition, Rat> out;
    for (const auto& [mu, a] : accum)
        out.emplace(mu, make_rat(a, Int(static_cast<long>(buckets->at(mu).size()))));
    return out;
}

Permutation representative_permutation(const Partition& mu) {
    int n = mu.sum();
    // Canonical matching at distance mu: block of size k on consecutive base
    // pairs, linked as (c+2,c+3),(c+4,c+5),...,(c+2k,c+1).
    std::vector<std::pair<int, int>> pairs;
    int offset = 0;
    for (int bi = 0; bi < mu.length(); ++bi) {
        int k = mu[bi];
        for (int j = 1; j < k; ++j) pairs.emplace_back(offset + 2 * j, offset + 2 * j + 1);
        pairs.emplace_back(offset + 2 * k, offset + 1);
        offset += 2 * k;
    }
    Matching y = Matching::from_pairs(std::move(pairs));
    std::vector<int> img(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        img[static_cast<std::size_t>(2 * j)] = y.pairs()[static_cast<std::size_t>(j)].first;
        img[static_cast<std::size_t>(2 * j + 1)] = y.pairs()[static_cast<std::size_t>(j)].second;
    }
    return Permutation(std::move(img));
}

Rat ZsfProvider::averaging_value(const Partition& rho, const Partition& mu) {
    return averaging_value_at(rho, representative_permutation(mu));
}

Rat ZsfProvider::averaging_value_at(const Partition& rho, const Permutation& sigma) {
    int n = rho.sum();
    if (n > kAveragingLimit)
        throw std::domain_error("character-averaging backend limited to n <= " +
                                std::to_string(kAveragingLimit));
    if (sigma.degree() != 2 * n) throw std::invalid_argument("sigma must act on 2n points");
    auto group = hyperoctahedral(n);
    Partition shape = rho.doubled();
    Int sum = 0;
    for (const auto& pi : *group)
        sum += characters_->character(shape, pi.compose(sigma).cycle_type());
    Int order = factorial(n);
    mpz_mul_2exp(order.get_mpz_t(), order.get_mpz_t(), static_cast<unsigned long>(n));
    return make_rat(sum, order);
}

}  // namespace matchkern
