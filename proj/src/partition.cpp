#include "matchkern/partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace matchkern {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 1) throw std::invalid_argument("partition part must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw std::invalid_argument("partition parts must be non-increasing");
        sum_ += parts_[i];
    }
}

Partition Partition::from_unsorted(std::vector<int> parts) {
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    return Partition(std::move(parts));
}

int Partition::part_or_zero(int i) const {
    return i >= 0 && i < length() ? parts_[static_cast<std::size_t>(i)] : 0;
}

Partition Partition::conjugate() const {
    std::vector<int> out;
    if (!parts_.empty()) {
        out.resize(static_cast<std::size_t>(parts_[0]));
        for (int j = 0; j < parts_[0]; ++j) {
            int count = 0;
            for (int p : parts_)
                if (p >= j + 1) ++count;
            out[static_cast<std::size_t>(j)] = count;
        }
    }
    return Partition(std::move(out));
}

Partition Partition::doubled() const {
    std::vector<int> out(parts_);
    for (int& p : out) p *= 2;
    return Partition(std::move(out));
}

int Partition::multiplicity(int k) const {
    return static_cast<int>(std::count(parts_.begin(), parts_.end(), k));
}

std::strong_ordering Partition::operator<=>(const Partition& o) const {
    int len = std::max(length(), o.length());
    for (int i = 0; i < len; ++i) {
        int a = part_or_zero(i), b = o.part_or_zero(i);
        if (a != b) return a <=> b;
    }
    return std::strong_ordering::equal;
}

std::string Partition::to_string() const {
    if (parts_.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(parts_[i]);
    }
    return s;
}

int lex_compare(const Partition& a, const Partition& b) {
    if (a.sum() != b.sum())
        throw std::invalid_argument("lex_compare requires partitions of the same integer");
    auto c = a <=> b;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

namespace {

void enumerate_rec(int remaining, int max_part, std::vector<int>& cur,
                   std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(Partition(cur));
        return;
    }
    for (int k = std::min(remaining, max_part); k >= 1; --k) {
        cur.push_back(k);
        enumerate_rec(remaining - k, k, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int n) {
    if (n < 0) throw std::invalid_argument("enumerate_partitions: n must be non-negative");
    std::vector<Partition> out;
    std::vector<int> cur;
    enumerate_rec(n, n, cur, out);
    if (n == 0) out = {Partition()};
    return out;
}

std::vector<Partition> select_truncation(int n, int size, TruncationHeuristic h) {
    auto all = enumerate_partitions(n);
    if (size < 1 || size > static_cast<int>(all.size()))
        throw std::invalid_argument("select_truncation: size out of range");
    auto key = [h](const Partition& p) {
        switch (h) {
            case TruncationHeuristic::MaxPart: return -p.part_or_zero(0);
            case TruncationHeuristic::Length: return p.length();
            case TruncationHeuristic::MinPart: return -p.part_or_zero(p.length() - 1);
        }
        return 0;
    };
    std::stable_sort(all.begin(), all.end(), [&](const Partition& a, const Partition& b) {
        int ka = key(a), kb = key(b);
        if (ka != kb) return ka < kb;
        return a > b;  // descending lex tie-break
    });
    all.resize(static_cast<std::size_t>(size));
    return all;
}

std::size_t hash_value(const Partition& p) {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (int v : p.parts()) h = h * 0x100000001b3ull ^ static_cast<std::size_t>(v);
    return h;
}

}  // namespace matchkern
