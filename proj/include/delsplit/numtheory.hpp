// Exact-integer kernels: 2-adic valuation, binary digits, k-oddoid
// arithmetic, and the constructive splits used by the winning strategies.
//
// A positive integer is k-oddoid when its remainder modulo k(k-1) lies in
// [1, k-1] and k-evenoid otherwise; for k = 2 these are the odd and even
// numbers. All functions throw Error(DomainError) outside their domain.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "delsplit/game.hpp"

namespace delsplit::nt {

/// Ordered list of positive parts produced by a split.
using SplitParts = std::vector<Heap>;

/// Exponent of the largest power of two dividing z (z >= 1).
unsigned v2(Heap z);

/// k-th binary digit of z counted from the least significant bit, k >= 1.
unsigned digit(Heap z, unsigned k);

/// v2((x OR y) + 1); the Sprague-Grundy value of Delete Nim <x,y>.
unsigned or_plus_one_valuation(Heap x, Heap y) noexcept;

bool is_k_oddoid(Heap z, unsigned k);
inline bool is_k_evenoid(Heap z, unsigned k) { return !is_k_oddoid(z, k); }

/// Smallest s with k^s > z, together with k^s. The power saturates at
/// UINT64_MAX, which is still strictly greater than every representable heap
/// that could be compared against it in practice.
struct PowerAbove {
        unsigned exponent;
        Heap value;
};
PowerAbove smallest_power_above(Heap z, unsigned k);

/// (z - 2^j, 2^j): two parts of equal valuation j. Requires j < v2(z).
std::pair<Heap, Heap> split_equal_valuation(Heap z, unsigned j);

/// k parts in [1, k-1] summing to x, for k <= x <= k(k-1). With x = kp + q,
/// emits q copies of p+1 then k-q copies of p (k copies of p if p = k-1).
SplitParts split_small(Heap x, unsigned k);

/// k k-oddoid parts, each < k^(s-1), summing to the k-evenoid y, k <= y < k^s.
SplitParts split_evenoid_bounded(Heap y, unsigned k, unsigned s);

/// k parts summing to z >= k whose smallest k-1 parts are at most k-1.
///   z k-oddoid:  1, ..., 1, z-(k-1)
///   z k-evenoid: beta_1, ..., beta_{k-1}, alpha*k(k-1) + beta_k   (all k-oddoid)
/// where z = alpha*k(k-1) + beta with k <= beta <= k(k-1).
SplitParts split_keep_tail(Heap z, unsigned k);

} // namespace delsplit::nt
