#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lacsim {

// Fixed-point scalar: 16-bit two's complement raw value plus the effective
// bit width it was quantized to.
struct QVal {
    int16_t raw = 0;
    uint8_t precision = 16;

    bool operator==(const QVal&) const = default;
};

// Quantizes to `precision` bits by keeping the low bits of the two's
// complement pattern and sign-extending. precision=16 is the identity.
QVal quantize(int32_t value, int precision);

// One signed power of two: (-1)^negative * 2^magnitude.
struct Term {
    bool negative = false;
    uint8_t magnitude = 0;

    bool operator==(const Term&) const = default;
};

// Decomposition of a value into signed powers of two, largest magnitude
// first. No two terms share a magnitude, and the signed sum reconstructs
// the source value exactly.
using TermList = std::vector<Term>;

enum class TermEncoding { Positional, Booth };

// Canonical non-adjacent-form decomposition; minimal term count over all
// signed-digit representations.
TermList booth_encode(QVal v);

// One + term per set bit for non-negative values. Negative values use the
// sign-magnitude bits of |v| with a - sign on every term so the
// reconstruction invariant still holds.
TermList positional_encode(QVal v);

TermList encode_terms(QVal v, TermEncoding encoding);

int term_count(QVal v, TermEncoding encoding);

// Signed sum of the terms; inverse of the encoders.
int32_t term_sum(const TermList& terms);

std::string to_string(const TermList& terms);

}  // namespace lacsim
