#include "qgauss/combinatorics.hpp"

#include <algorithm>
#include <stdexcept>

namespace qgauss {

int inversions(std::span<const int> perm) {
    const int m = static_cast<int>(perm.size());
    std::vector<bool> seen(static_cast<std::size_t>(m) + 1, false);
    for (int v : perm) {
        if (v < 1 || v > m || seen[static_cast<std::size_t>(v)])
            throw std::invalid_argument("inversions: input is not a permutation of 1..m");
        seen[static_cast<std::size_t>(v)] = true;
    }
    int count = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++count;
    return count;
}

PairPartition::PairPartition(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    const int n = static_cast<int>(2 * pairs_.size());
    std::vector<bool> covered(static_cast<std::size_t>(n) + 1, false);
    for (auto& [a, b] : pairs_) {
        if (a >= b) throw std::invalid_argument("PairPartition: pair must be ordered (a < b)");
        if (a < 1 || b > n) throw std::invalid_argument("PairPartition: element out of range");
        if (covered[static_cast<std::size_t>(a)] || covered[static_cast<std::size_t>(b)])
            throw std::invalid_argument("PairPartition: element covered twice");
        covered[static_cast<std::size_t>(a)] = covered[static_cast<std::size_t>(b)] = true;
    }
    std::sort(pairs_.begin(), pairs_.end());
}

PairPartition PairPartition::reflected() const {
    const int n = ground_size();
    std::vector<Pair> out;
    out.reserve(pairs_.size());
    for (auto [a, b] : pairs_) out.emplace_back(n + 1 - b, n + 1 - a);
    return PairPartition(std::move(out));
}

int crossings(const PairPartition& p) {
    // O(b^2) scan over block pairs; blocks are sorted by first element, so
    // (a,b) before (c,d) gives a < c and the crossing test is c < b < d.
    const auto& blocks = p.pairs();
    int count = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (std::size_t j = i + 1; j < blocks.size(); ++j)
            if (blocks[j].first < blocks[i].second && blocks[i].second < blocks[j].second) ++count;
    return count;
}

std::uint64_t double_factorial_odd(int n) {
    if (n < -1) throw std::invalid_argument("double_factorial_odd: n must be >= -1");
    std::uint64_t acc = 1;
    for (int k = n; k > 1; k -= 2) acc *= static_cast<std::uint64_t>(k);
    return acc;
}

namespace {

void enumerate(std::vector<int>& free_elems, std::vector<PairPartition::Pair>& acc,
               const std::function<void(const PairPartition&)>& visit) {
    if (free_elems.empty()) {
        visit(PairPartition(acc));
        return;
    }
    // Pair the smallest free element with each larger partner in turn.
    const int a = free_elems.front();
    for (std::size_t t = 1; t < free_elems.size(); ++t) {
        const int b = free_elems[t];
        std::vector<int> rest;
        rest.reserve(free_elems.size() - 2);
        for (std::size_t s = 1; s < free_elems.size(); ++s)
            if (s != t) rest.push_back(free_elems[s]);
        acc.emplace_back(a, b);
        enumerate(rest, acc, visit);
        acc.pop_back();
    }
}

}  // namespace

void for_each_pair_partition(int n, const std::function<void(const PairPartition&)>& visit) {
    if (n < 0 || n % 2 != 0)
        throw std::invalid_argument("for_each_pair_partition: n must be even and nonnegative");
    std::vector<int> elems(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) elems[static_cast<std::size_t>(i)] = i + 1;
    std::vector<PairPartition::Pair> acc;
    acc.reserve(static_cast<std::size_t>(n) / 2);
    enumerate(elems, acc, visit);
}

void for_each_pair_partition_with_first_partner(
    int n, int partner, const std::function<void(const PairPartition&)>& visit) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("for_each_pair_partition_with_first_partner: n must be even and >= 2");
    if (partner < 2 || partner > n)
        throw std::invalid_argument("for_each_pair_partition_with_first_partner: partner out of range");
    std::vector<int> rest;
    rest.reserve(static_cast<std::size_t>(n) - 2);
    for (int i = 2; i <= n; ++i)
        if (i != partner) rest.push_back(i);
    std::vector<PairPartition::Pair> acc;
    acc.reserve(static_cast<std::size_t>(n) / 2);
    acc.emplace_back(1, partner);
    enumerate(rest, acc, visit);
}

}  // namespace qgauss
