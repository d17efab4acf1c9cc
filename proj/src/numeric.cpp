#include "lacsim/numeric.hpp"

#include <algorithm>
#include <stdexcept>

namespace lacsim {

QVal quantize(int32_t value, int precision) {
    if (precision < 1 || precision > 16) {
        throw std::invalid_argument("quantize: precision must be in [1,16], got " +
                                    std::to_string(precision));
    }
    if (value < INT16_MIN || value > INT16_MAX) {
        throw std::invalid_argument("quantize: value " + std::to_string(value) +
                                    " does not fit 16-bit two's complement");
    }
    const uint32_t mask = (1u << precision) - 1u;
    const uint32_t sign_bit = 1u << (precision - 1);
    uint32_t bits = static_cast<uint32_t>(value) & mask;
    // Sign-extend the kept low bits.
    int32_t extended = static_cast<int32_t>((bits ^ sign_bit) - sign_bit);
    return QVal{static_cast<int16_t>(extended), static_cast<uint8_t>(precision)};
}

TermList booth_encode(QVal v) {
    TermList terms;
    int32_t work = v.raw;
    int magnitude = 0;
    // Standard NAF recoding, least significant digit first.
    while (work != 0) {
        if (work & 1) {
            int digit = 2 - (work & 3);  // +1 or -1
            terms.push_back(Term{digit < 0, static_cast<uint8_t>(magnitude)});
            work -= digit;
        }
        work >>= 1;
        ++magnitude;
    }
    std::reverse(terms.begin(), terms.end());
    return terms;
}

TermList positional_encode(QVal v) {
    TermList terms;
    const bool negative = v.raw < 0;
    uint32_t bits = negative ? static_cast<uint32_t>(-static_cast<int32_t>(v.raw))
                             : static_cast<uint32_t>(v.raw);
    for (int magnitude = 15; magnitude >= 0; --magnitude) {
        if (bits & (1u << magnitude)) {
            terms.push_back(Term{negative, static_cast<uint8_t>(magnitude)});
        }
    }
    return terms;
}

TermList encode_terms(QVal v, TermEncoding encoding) {
    return encoding == TermEncoding::Booth ? booth_encode(v) : positional_encode(v);
}

int term_count(QVal v, TermEncoding encoding) {
    return static_cast<int>(encode_terms(v, encoding).size());
}

int32_t term_sum(const TermList& terms) {
    int32_t sum = 0;
    for (const Term& t : terms) {
        int32_t value = 1 << t.magnitude;
        sum += t.negative ? -value : value;
    }
    return sum;
}

std::string to_string(const TermList& terms) {
    std::string out = "[";
    for (size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ",";
        out += terms[i].negative ? "(-," : "(+,";
        out += std::to_string(terms[i].magnitude);
        out += ")";
    }
    out += "]";
    return out;
}

}  // namespace lacsim
