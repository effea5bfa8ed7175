#include "matchkern/matching.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace matchkern {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
        if (v < 1 || v > static_cast<int>(images_.size()) || seen[static_cast<std::size_t>(v - 1)])
            throw std::invalid_argument("not a permutation");
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
}

Permutation Permutation::identity(int m) {
    std::vector<int> img(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) img[static_cast<std::size_t>(i)] = i + 1;
    return Permutation(std::move(img));
}

Permutation Permutation::compose(const Permutation& other) const {
    if (degree() != other.degree()) throw std::invalid_argument("degree mismatch");
    std::vector<int> img(images_.size());
    for (int i = 1; i <= degree(); ++i)
        img[static_cast<std::size_t>(i - 1)] = image(other.image(i));
    return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
    std::vector<int> img(images_.size());
    for (int i = 1; i <= degree(); ++i) img[static_cast<std::size_t>(image(i) - 1)] = i;
    return Permutation(std::move(img));
}

Partition Permutation::cycle_type() const {
    std::vector<bool> seen(images_.size(), false);
    std::vector<int> lengths;
    for (int i = 1; i <= degree(); ++i) {
        if (seen[static_cast<std::size_t>(i - 1)]) continue;
        int len = 0, j = i;
        do {
            seen[static_cast<std::size_t>(j - 1)] = true;
            j = image(j);
            ++len;
        } while (j != i);
        lengths.push_back(len);
    }
    return Partition::from_unsorted(std::move(lengths));
}

Matching Matching::from_pairs(std::vector<std::pair<int, int>> pairs) {
    Matching m;
    int n2 = static_cast<int>(pairs.size()) * 2;
    std::vector<bool> seen(static_cast<std::size_t>(n2), false);
    for (auto& [a, b] : pairs) {
        if (a > b) std::swap(a, b);
        if (a < 1 || b > n2 || a == b) throw std::invalid_argument("invalid matching pair");
        for (int v : {a, b}) {
            if (seen[static_cast<std::size_t>(v - 1)])
                throw std::invalid_argument("element repeated in matching");
            seen[static_cast<std::size_t>(v - 1)] = true;
        }
    }
    std::sort(pairs.begin(), pairs.end());
    m.pairs_ = std::move(pairs);
    return m;
}

int Matching::partner(int i) const {
    for (const auto& [a, b] : pairs_) {
        if (a == i) return b;
        if (b == i) return a;
    }
    throw std::out_of_range("element not in matching");
}

bool Matching::contains(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(pairs_.begin(), pairs_.end(), std::make_pair(a, b));
}

std::size_t hash_value(const Matching& m) {
    std::size_t h = 0xcbf29ce484222325ull;
    for (const auto& [a, b] : m.pairs()) {
        h = h * 0x100000001b3ull ^ static_cast<std::size_t>(a);
        h = h * 0x100000001b3ull ^ static_cast<std::size_t>(b);
    }
    return h;
}

Matching base_point(int n) {
    if (n < 1) throw std::invalid_argument("base_point: n >= 1 required");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) pairs.emplace_back(2 * i - 1, 2 * i);
    return Matching::from_pairs(std::move(pairs));
}

Matching act(const Permutation& sigma, const Matching& x) {
    if (sigma.degree() != 2 * x.size())
        throw std::invalid_argument("act: permutation degree must be 2n");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(x.pairs().size());
    for (const auto& [a, b] : x.pairs()) pairs.emplace_back(sigma.image(a), sigma.image(b));
    return Matching::from_pairs(std::move(pairs));
}

Partition generalized_distance(const Matching& x, const Matching& y) {
    if (x.size() != y.size()) throw std::invalid_argument("generalized_distance: size mismatch");
    int n2 = 2 * x.size();
    std::vector<int> px(static_cast<std::size_t>(n2) + 1), py(px);
    for (const auto& [a, b] : x.pairs()) px[static_cast<std::size_t>(a)] = b, px[static_cast<std::size_t>(b)] = a;
    for (const auto& [a, b] : y.pairs()) py[static_cast<std::size_t>(a)] = b, py[static_cast<std::size_t>(b)] = a;
    std::vector<bool> seen(static_cast<std::size_t>(n2) + 1, false);
    std::vector<int> halves;
    for (int start = 1; start <= n2; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        int count = 0, v = start;
        // alternate x-edges and y-edges until the cycle closes
        do {
            seen[static_cast<std::size_t>(v)] = true;
            int w = px[static_cast<std::size_t>(v)];
            seen[static_cast<std::size_t>(w)] = true;
            v = py[static_cast<std::size_t>(w)];
            ++count;
        } while (v != start);
        halves.push_back(count);
    }
    return Partition::from_unsorted(std::move(halves));
}

Int sphere_size(const Partition& mu) {
    int n = mu.sum();
    Int num = factorial(n);
    Int den = 1;
    unsigned long twos = 0;
    for (int k = 1; k <= (mu.empty() ? 0 : mu[0]); ++k) {
        int t = mu.multiplicity(k);
        if (t == 0) continue;
        twos += static_cast<unsigned long>(t) * static_cast<unsigned long>(k - 1);
        den *= factorial(t);
        Int kp;
        mpz_ui_pow_ui(kp.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(t));
        den *= kp;
    }
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), twos);
    if (num % den != 0) throw std::logic_error("sphere size is not an integer");
    return num / den;
}

std::vector<Matching> neighbors(const Matching& x) {
    std::vector<Matching> out;
    int n = x.size();
    if (n < 2) return out;
    const auto& ps = x.pairs();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            auto [a, b] = ps[static_cast<std::size_t>(i)];
            auto [c, d] = ps[static_cast<std::size_t>(j)];
            for (int variant = 0; variant < 2; ++variant) {
                std::vector<std::pair<int, int>> pairs(ps);
                if (variant == 0) {
                    pairs[static_cast<std::size_t>(i)] = {a, c};
                    pairs[static_cast<std::size_t>(j)] = {b, d};
                } else {
                    pairs[static_cast<std::size_t>(i)] = {a, d};
                    pairs[static_cast<std::size_t>(j)] = {b, c};
                }
                out.push_back(Matching::from_pairs(std::move(pairs)));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

void enumerate_rec(int n2, std::vector<bool>& used, std::vector<std::pair<int, int>>& cur,
                   std::vector<Matching>& out) {
    int first = 0;
    for (int i = 1; i <= n2; ++i) {
        if (!used[static_cast<std::size_t>(i - 1)]) {
            first = i;
            break;
        }
    }
    if (first == 0) {
        out.push_back(Matching::from_pairs(cur));
        return;
    }
    used[static_cast<std::size_t>(first - 1)] = true;
    for (int j = first + 1; j <= n2; ++j) {
        if (used[static_cast<std::size_t>(j - 1)]) continue;
        used[static_cast<std::size_t>(j - 1)] = true;
        cur.emplace_back(first, j);
        enumerate_rec(n2, used, cur, out);
        cur.pop_back();
        used[static_cast<std::size_t>(j - 1)] = false;
    }
    used[static_cast<std::size_t>(first - 1)] = false;
}

}  // namespace

std::vector<Matching> enumerate_matchings(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_matchings: n >= 1 required");
    std::vector<Matching> out;
    std::vector<bool> used(static_cast<std::size_t>(2 * n), false);
    std::vector<std::pair<int, int>> cur;
    enumerate_rec(2 * n, used, cur, out);
    return out;
}

Int matching_count(int n) {
    Int num = factorial(2 * n);
    Int den = factorial(n);
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(n));
    return num / den;
}

QuotientDistance quotient_distance(const Matching& x, const Matching& y, int exact_limit) {
    if (x.size() != y.size()) throw std::invalid_argument("quotient_distance: size mismatch");
    if (x == y) return {0, true};
    if (x.size() <= exact_limit) {
        std::unordered_map<Matching, int> dist;
        std::deque<Matching> queue;
        dist.emplace(x, 0);
        queue.push_back(x);
        while (!queue.empty()) {
            Matching cur = std::move(queue.front());
            queue.pop_front();
            int d = dist.at(cur);
            for (auto& nb : neighbors(cur)) {
                if (dist.count(nb)) continue;
                if (nb == y) return {d + 1, true};
                dist.emplace(nb, d + 1);
                queue.push_back(std::move(nb));
            }
        }
        throw std::logic_error("quotient graph is connected; BFS must reach y");
    }
    int differing = 0;
    for (const auto& [a, b] : x.pairs())
        if (!y.contains(a, b)) ++differing;
    return {(differing + 1) / 2, false};
}

Rng::Rng(std::uint64_t seed) : state_(seed) {}

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

Matching random_matching(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_matching: n >= 1 required");
    Rng rng(seed);
    std::vector<int> elems(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i) elems[static_cast<std::size_t>(i)] = i + 1;
    for (int i = 2 * n - 1; i > 0; --i)
        std::swap(elems[static_cast<std::size_t>(i)],
                  elems[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        pairs.emplace_back(elems[static_cast<std::size_t>(2 * i)],
                           elems[static_cast<std::size_t>(2 * i + 1)]);
    return Matching::from_pairs(std::move(pairs));
}

Permutation random_permutation(int m, std::uint64_t seed) {
    Rng rng(seed ^ 0xa5a5a5a5a5a5a5a5ull);
    std::vector<int> img(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) img[static_cast<std::size_t>(i)] = i + 1;
    for (int i = m - 1; i > 0; --i)
        std::swap(img[static_cast<std::size_t>(i)],
                  img[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    return Permutation(std::move(img));
}

}  // namespace matchkern
