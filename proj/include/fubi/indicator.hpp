#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "classes.hpp"

namespace fubi {

// Admissible indicator function over class ranks. Bit for class rank 0 is the
// most significant: reading the bitstring left to right follows class order,
// and the whole AIF compares as an unsigned integer.
struct AIF {
    std::uint32_t bits = 0;
    int count = 0; // number of classes

    bool bit(int c) const { return (bits >> (count - 1 - c)) & 1u; }
    void set_bit(int c, bool v) {
        std::uint32_t m = 1u << (count - 1 - c);
        bits = v ? (bits | m) : (bits & ~m);
    }
    std::string to_string() const {
        std::string s(count, '0');
        for (int c = 0; c < count; ++c)
            if (bit(c)) s[c] = '1';
        return s;
    }
    static AIF from_string(const std::string& s) {
        if (s.size() > 32) throw std::invalid_argument("aif: too many classes");
        AIF a;
        a.count = static_cast<int>(s.size());
        for (int c = 0; c < a.count; ++c) {
            if (s[c] != '0' && s[c] != '1') throw std::invalid_argument("aif: not a bitstring");
            a.set_bit(c, s[c] == '1');
        }
        return a;
    }
    auto operator<=>(const AIF&) const = default;
};

// Full boolean zero-pattern tensor over (n+1)^3 triples (k,j,i).
struct IndicatorTensor {
    int n = 0;
    std::vector<std::uint8_t> v; // flat (k,j,i)

    std::uint8_t at(int k, int j, int i) const { return v[(k * (n + 1) + j) * (n + 1) + i]; }
    void set(int k, int j, int i, std::uint8_t x) { v[(k * (n + 1) + j) * (n + 1) + i] = x; }
};

// Expand class bits into the full tensor. Forced entries: p_0 acts as the
// convolution unit on both sides, ind(0,j,i) = [i=j], ind(k,0,i) = [i=k];
// N_{kj}^0 = delta_{k,bar(j)} d_k gives ind(k,j,0) = [k = bar(j)].
inline IndicatorTensor expand(const AIF& aif, const ClassPartition& P) {
    if (aif.count != P.count()) throw std::invalid_argument("expand: aif/partition mismatch");
    int n = P.sig.n;
    IndicatorTensor T;
    T.n = n;
    T.v.assign((n + 1) * (n + 1) * (n + 1), 0);
    for (int j = 0; j <= n; ++j) T.set(0, j, j, 1);
    for (int k = 0; k <= n; ++k) {
        T.set(k, 0, k, 1);
        T.set(k, P.sig.bar[k], 0, 1);
    }
    for (int c = 0; c < P.count(); ++c)
        if (aif.bit(c))
            for (const auto& t : P.classes[c]) T.set(t.k, t.j, t.i, 1);
    return T;
}

// Read class bits back from an expanded tensor; throws if the tensor is not
// constant on some class.
inline AIF read_back(const IndicatorTensor& T, const ClassPartition& P) {
    AIF a;
    a.count = P.count();
    for (int c = 0; c < P.count(); ++c) {
        const auto& cl = P.classes[c];
        std::uint8_t b = T.at(cl[0].k, cl[0].j, cl[0].i);
        for (const auto& t : cl)
            if (T.at(t.k, t.j, t.i) != b)
                throw std::runtime_error("read_back: tensor not constant on a class");
        a.set_bit(c, b != 0);
    }
    return a;
}

} // namespace fubi
