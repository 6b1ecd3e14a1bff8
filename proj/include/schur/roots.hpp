/**
 * @file roots.hpp
 * @brief Exact roots of unity, stored as an exponent k modulo an order n.
 *
 * The value denoted is exp(2 pi i k / n). No floating point is involved;
 * all arithmetic is on exponents.
 */
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace schur {

struct RootOfUnity {
    std::uint32_t order = 1;
    std::uint32_t exponent = 0;

    RootOfUnity() = default;
    RootOfUnity(std::uint32_t n, std::int64_t k) : order(n) {
        if (n == 0) throw std::invalid_argument("root of unity order must be positive");
        auto m = static_cast<std::int64_t>(n);
        exponent = static_cast<std::uint32_t>(((k % m) + m) % m);
    }

    /// Same value written with a larger order m, where order divides m.
    RootOfUnity embed(std::uint32_t m) const {
        if (m % order != 0) throw std::invalid_argument("cannot embed mu_" + std::to_string(order) + " into mu_" + std::to_string(m));
        return RootOfUnity(m, std::int64_t(exponent) * (m / order));
    }

    /// Smallest order in which the value lives.
    RootOfUnity reduced() const {
        std::uint32_t g = std::gcd(order, exponent);
        return RootOfUnity(order / g, exponent / g);
    }

    bool is_one() const { return exponent == 0; }

    friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) {
        return std::uint64_t(a.exponent) * b.order == std::uint64_t(b.exponent) * a.order;
    }
};

inline std::uint32_t lcm_order(std::uint32_t a, std::uint32_t b) { return std::lcm(a, b); }

inline RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
    auto m = lcm_order(a.order, b.order);
    return RootOfUnity(m, std::int64_t(a.embed(m).exponent) + b.embed(m).exponent);
}

inline RootOfUnity inverse(const RootOfUnity& a) { return RootOfUnity(a.order, -std::int64_t(a.exponent)); }

/// Text form: 1, -1, i, -i, or w{k}/{n} in lowest terms.
inline std::string to_string(const RootOfUnity& z) {
    auto r = z.reduced();
    if (r.order == 1) return "1";
    if (r.order == 2) return "-1";
    if (r.order == 4) return r.exponent == 1 ? "i" : "-i";
    return "w" + std::to_string(r.exponent) + "/" + std::to_string(r.order);
}

inline RootOfUnity parse_root(const std::string& text) {
    if (text == "1") return RootOfUnity(1, 0);
    if (text == "-1") return RootOfUnity(2, 1);
    if (text == "i") return RootOfUnity(4, 1);
    if (text == "-i") return RootOfUnity(4, 3);
    if (text.size() >= 4 && text[0] == 'w') {
        auto slash = text.find('/');
        if (slash != std::string::npos && slash > 1) {
            try {
                std::size_t used_k = 0, used_n = 0;
                auto k = std::stoll(text.substr(1, slash - 1), &used_k);
                auto n = std::stoll(text.substr(slash + 1), &used_n);
                if (used_k == slash - 1 && used_n == text.size() - slash - 1 && n > 0 && k >= 0)
                    return RootOfUnity(std::uint32_t(n), k);
            } catch (const std::exception&) {
            }
        }
    }
    throw std::invalid_argument("bad root of unity: '" + text + "'");
}

} // namespace schur
