#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace qgauss {

/// Number of inversions #{(i,j) : i < j, perm(i) > perm(j)}.
/// perm must be a permutation of {1,..,m}; anything else is rejected.
int inversions(std::span<const int> perm);

/// A pair partition (perfect matching) of {1,..,n}: disjoint pairs (a,b)
/// with a < b covering every element once, sorted by first element.
class PairPartition {
public:
    using Pair = std::pair<int, int>;

    explicit PairPartition(std::vector<Pair> pairs);

    const std::vector<Pair>& pairs() const { return pairs_; }
    int ground_size() const { return static_cast<int>(2 * pairs_.size()); }

    /// Image under i -> n+1-i, re-canonicalized.
    PairPartition reflected() const;

    bool operator==(const PairPartition&) const = default;

private:
    std::vector<Pair> pairs_;
};

/// Number of crossing block pairs ((a,b),(c,d)) with a < c < b < d.
int crossings(const PairPartition& p);

/// (n-1)!! with (-1)!! = 1; the size of P_2(n) for even n.
std::uint64_t double_factorial_odd(int n);

/// Streams every pair partition of {1,..,n} exactly once, in the canonical
/// order: the smallest unmatched element is paired with each larger partner
/// in increasing order, recursively. Rejects odd n. n = 0 yields the empty
/// partition once.
void for_each_pair_partition(int n, const std::function<void(const PairPartition&)>& visit);

/// Sub-stream restricted to partitions pairing element 1 with `partner`
/// (2 <= partner <= n). The full stream is the in-order concatenation of
/// these sub-streams, so callers can fold them independently and reduce.
void for_each_pair_partition_with_first_partner(
    int n, int partner, const std::function<void(const PairPartition&)>& visit);

}  // namespace qgauss
