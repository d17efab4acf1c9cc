#include "lacsim/pe.hpp"

#include <stdexcept>
#include <string>

namespace lacsim::pe {

namespace {

constexpr int64_t kAccumulatorLimit = int64_t{1} << (kAccumulatorBits - 1);

void check_magnitude(const Term& t) {
    if (t.magnitude > 15) {
        throw std::invalid_argument("pe: term magnitude " + std::to_string(t.magnitude) +
                                    " exceeds 15");
    }
}

}  // namespace

LaneProducts compute_lane_products(std::span<const TermPair> pairs) {
    LaneProducts out;
    out.reserve(pairs.size());
    for (const TermPair& p : pairs) {
        if (!p.a || !p.w) {
            out.push_back(std::nullopt);
            continue;
        }
        check_magnitude(*p.a);
        check_magnitude(*p.w);
        out.push_back(LaneProduct{static_cast<uint8_t>(p.a->magnitude + p.w->magnitude),
                                  p.a->negative != p.w->negative});
    }
    return out;
}

std::array<int8_t, kBuckets> decode_one_hot(const LaneProduct& p) {
    if (p.exponent >= kBuckets - 1) {
        throw std::logic_error("pe: exponent " + std::to_string(p.exponent) +
                               " unreachable for 16-bit operands");
    }
    std::array<int8_t, kBuckets> one_hot{};
    one_hot[p.exponent] = p.negative ? -1 : 1;
    return one_hot;
}

Histogram build_histogram(std::span<const std::array<int8_t, kBuckets>> decoded) {
    Histogram h;
    for (const auto& vec : decoded) {
        for (int j = 0; j < kBuckets; ++j) {
            h.buckets[j] = static_cast<int8_t>(h.buckets[j] + vec[j]);
        }
    }
    return h;
}

Histogram build_histogram(const LaneProducts& products) {
    Histogram h;
    for (const auto& p : products) {
        if (!p) continue;
        if (p->exponent >= kBuckets - 1) {
            throw std::logic_error("pe: exponent " + std::to_string(p->exponent) +
                                   " unreachable for 16-bit operands");
        }
        h.buckets[p->exponent] =
            static_cast<int8_t>(h.buckets[p->exponent] + (p->negative ? -1 : 1));
    }
    return h;
}

GroupValues concat_bucket_groups(const Histogram& h) {
    GroupValues groups{};
    for (int i = 0; i < 6; ++i) {
        // Stack fields bottom-up: start from bucket i, then i+6, i+12, ...
        int64_t stacked = 0;   // signed value of the bits accumulated so far
        int width = 0;         // bit width of the stack
        for (int j = i; j < kBuckets; j += 6) {
            int field = h.buckets[j];
            if (field < -kMaxLanes || field > kMaxLanes) {
                throw std::invalid_argument("pe: bucket count " + std::to_string(field) +
                                            " outside [-16,16]");
            }
            if (width == 0) {
                stacked = field;
            } else {
                // Appending below a new upper field: borrow 1 from it when
                // the sign bit of the lower bits is set, then concatenate
                // the raw bit patterns.
                if (stacked < 0) field -= 1;
                const int64_t lower_bits = stacked & ((int64_t{1} << width) - 1);
                stacked = (static_cast<int64_t>(field) << width) | lower_bits;
            }
            width += 6;
        }
        groups[i] = stacked;
    }
    return groups;
}

int64_t reduce_group_values(const GroupValues& groups) {
    int64_t psum = 0;
    for (int i = 0; i < 6; ++i) {
        psum += groups[i] << i;
    }
    return psum;
}

void Accumulator::add(int64_t psum) {
    const int64_t next = value + psum;
    if (next >= kAccumulatorLimit || next < -kAccumulatorLimit) {
        throw std::logic_error("pe: accumulator overflow beyond " +
                               std::to_string(kAccumulatorBits) + " bits");
    }
    value = next;
}

uint64_t process_group(std::span<const TermList> acts, std::span<const TermList> wgts,
                       Accumulator& acc) {
    if (acts.size() != wgts.size() || acts.size() > static_cast<size_t>(kMaxLanes)) {
        throw std::invalid_argument("pe: lane count mismatch or more than 16 lanes");
    }
    const size_t lanes = acts.size();
    uint64_t cycles = 0;
    std::vector<uint64_t> lane_pairs(lanes);
    for (size_t l = 0; l < lanes; ++l) {
        lane_pairs[l] = acts[l].size() * wgts[l].size();
        cycles = std::max(cycles, lane_pairs[l]);
    }

    std::vector<TermPair> pairs(lanes);
    for (uint64_t c = 0; c < cycles; ++c) {
        for (size_t l = 0; l < lanes; ++l) {
            if (c < lane_pairs[l]) {
                const size_t wt = wgts[l].size();
                pairs[l] = TermPair{acts[l][c / wt], wgts[l][c % wt]};
            } else {
                pairs[l] = TermPair{};
            }
        }
        const LaneProducts products = compute_lane_products(pairs);
        const Histogram h = build_histogram(products);
        const GroupValues groups = concat_bucket_groups(h);
        acc.add(reduce_group_values(groups));
    }
    return cycles;
}

GroupResult process_group(std::span<const TermList> acts, std::span<const TermList> wgts) {
    Accumulator acc;
    const uint64_t cycles = process_group(acts, wgts, acc);
    return GroupResult{acc.value, cycles};
}

}  // namespace lacsim::pe
