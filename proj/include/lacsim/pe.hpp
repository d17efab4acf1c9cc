#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lacsim/numeric.hpp"

namespace lacsim::pe {

// Lanes a processing element multiplies per cycle.
inline constexpr int kMaxLanes = 16;
// Exponent buckets: products of two magnitudes in [0,15] span 2^0..2^30;
// bucket 31 exists structurally but is never populated by the decoder.
inline constexpr int kBuckets = 32;
// Accumulator is dimensioned to 48 signed bits.
inline constexpr int kAccumulatorBits = 48;

// One lane's inputs for a cycle. An absent slot makes the pair ineffectual.
struct TermPair {
    std::optional<Term> a;
    std::optional<Term> w;
};

// A product of two signed powers of two: (-1)^negative * 2^exponent.
struct LaneProduct {
    uint8_t exponent = 0;  // 0..30
    bool negative = false;
};

using LaneProducts = std::vector<std::optional<LaneProduct>>;

// Step 1: per lane, exponent = sum of magnitudes, sign = XOR of term signs.
// Absent pairs propagate as absent. Throws on magnitudes > 15.
LaneProducts compute_lane_products(std::span<const TermPair> pairs);

// Step 2: signed one-hot expansion, +1 or -1 at index `exponent`.
// Throws if the exponent cannot come from 16-bit operands (exp == 31).
std::array<int8_t, kBuckets> decode_one_hot(const LaneProduct& p);

// Signed counts of lane products per power of two. Each bucket stays in
// [-kMaxLanes, kMaxLanes] and fits 6-bit two's complement.
struct Histogram {
    std::array<int8_t, kBuckets> buckets{};

    bool operator==(const Histogram&) const = default;
};

// Step 3: sum decoded one-hot vectors into the 32 buckets.
Histogram build_histogram(std::span<const std::array<int8_t, kBuckets>> decoded);

// Same result without materializing the one-hot vectors; equivalence with
// the decoder route is asserted in tests.
Histogram build_histogram(const LaneProducts& products);

// Step 4 output: six signed values, one per concatenation group.
using GroupValues = std::array<int64_t, 6>;

// Step 4: concatenate the buckets N^j with j mod 6 == i into group value i,
// stacking fields bottom-up and borrowing 1 from the upper field whenever
// the bits below have their sign bit set. Group i equals
// sum over (j mod 6 == i) of bucket[j] * 2^(j-i).
GroupValues concat_bucket_groups(const Histogram& h);

// Step 5: psum = sum of group_i << i.
int64_t reduce_group_values(const GroupValues& groups);

// Step 6 state. add() checks the 48-bit dimensioning and throws on
// overflow, which would indicate a scheduling bug upstream.
struct Accumulator {
    int64_t value = 0;

    void add(int64_t psum);
};

struct GroupResult {
    int64_t value = 0;
    uint64_t cycles = 0;
};

// Runs the full per-cycle pipeline over one group: lane i serializes the
// cross product terms(acts[i]) x terms(wgts[i]) in lexicographic order,
// one pair per lane per cycle. Cycle count is the largest per-lane cross
// product, 0 when every lane is empty. acts and wgts must have equal size
// <= kMaxLanes.
uint64_t process_group(std::span<const TermList> acts, std::span<const TermList> wgts,
                       Accumulator& acc);

GroupResult process_group(std::span<const TermList> acts, std::span<const TermList> wgts);

}  // namespace lacsim::pe
