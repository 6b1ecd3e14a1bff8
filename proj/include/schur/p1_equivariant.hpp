/**
 * @file p1_equivariant.hpp
 * @brief Equivariant structures on O(m [1:0] + m' [0:1]) over P^1 for the
 *        sign-flip and swap involutions, and the cocycle they determine.
 *
 * Sections of O(D) are rational functions f with div f >= -D. A structure
 * map for g is f -> phi_g * (f o g), where phi_g is a monomial c * u^k in the
 * chart coordinate u = x/y (on the chart V with coordinate v = y/x the same
 * function reads c * v^-k). The scalar alpha(g,h) is read off from
 *
 *     phi_{gh} = alpha(g,h) * phi_h * (phi_g o h),
 *
 * which is evaluated on both charts and must give the same constant.
 */
#pragma once

#include "cocycle.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace schur {

enum class P1Behavior { SignFlip, Swap };

inline std::string to_string(P1Behavior b) { return b == P1Behavior::SignFlip ? "SignFlip" : "Swap"; }

/// A faithful action of (Z/2)^r, r <= 2, on P^1: one behavior per basis vector.
struct P1Action {
    GroupSpec group;
    std::vector<P1Behavior> generators;

    P1Action() = default;
    explicit P1Action(std::vector<P1Behavior> gens) : group(unsigned(gens.size())), generators(std::move(gens)) {
        if (generators.size() > 2) throw std::invalid_argument("a faithful sign/swap action has rank at most 2");
        if (generators.size() == 2 && generators[0] == generators[1])
            throw std::invalid_argument("two generators with the same behavior do not act faithfully");
    }

    /// Basis index of the generator with the given behavior, or -1.
    int index_of(P1Behavior b) const {
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (generators[i] == b) return int(i);
        return -1;
    }

    /// The point map of element g as u -> sign * u^power.
    std::pair<int, int> point_map(std::uint32_t g) const {
        int sign = 1, power = 1;
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (g >> i & 1u) {
                if (generators[i] == P1Behavior::SignFlip) sign = -sign;
                else power = -power;
            }
        return {sign, power};
    }

    bool swaps_charts(std::uint32_t g) const { return point_map(g).second == -1; }
};

/// c * w^k in a chart coordinate w.
struct MonomialMap {
    RootOfUnity coeff;
    int exponent = 0;

    friend bool operator==(const MonomialMap&, const MonomialMap&) = default;
};

inline MonomialMap operator*(const MonomialMap& a, const MonomialMap& b) { return {a.coeff * b.coeff, a.exponent + b.exponent}; }

inline MonomialMap invert(const MonomialMap& a) { return {inverse(a.coeff), -a.exponent}; }

/// phi o g for phi = c * w^k, when g acts on the chart coordinate as w -> sign * w^power.
inline MonomialMap compose_with(const MonomialMap& phi, int sign, int power) {
    RootOfUnity c = phi.coeff;
    if (sign == -1 && (phi.exponent % 2 != 0)) c = c * RootOfUnity(2, 1);
    return {c, phi.exponent * power};
}

inline std::string to_string(const MonomialMap& m, const std::string& var) {
    std::string c = to_string(m.coeff);
    if (m.exponent == 0) return c;
    std::string mono = var + (m.exponent == 1 ? "" : "^" + std::to_string(m.exponent));
    if (c == "1") return mono;
    if (c == "-1") return "-" + mono;
    return c + "*" + mono;
}

enum Chart { ChartU = 0, ChartV = 1 };

struct EquivariantStructure {
    P1Action action;
    int m = 0;         // multiplicity of [1:0]
    int m_prime = 0;   // multiplicity of [0:1]
    std::vector<std::array<MonomialMap, 2>> theta;   // indexed by element, then chart

    const MonomialMap& at(std::uint32_t g, Chart w) const { return theta.at(g)[w]; }
};

/**
 * The normalized structure: identity for the neutral element, the sign-flip
 * generator fixes the local generator at [1:0], the swap generator has
 * coefficient +1 on chart U, and the product element is chosen so that
 * alpha(sign flip, swap) = 1.
 */
inline EquivariantStructure default_theta(const P1Action& action, int m, int m_prime) {
    EquivariantStructure s;
    s.action = action;
    s.m = m;
    s.m_prime = m_prime;
    const auto n = static_cast<std::uint32_t>(action.group.order());
    std::vector<MonomialMap> phi(n, MonomialMap{RootOfUnity(1, 0), 0});   // in chart U

    int sf = action.index_of(P1Behavior::SignFlip);
    int sw = action.index_of(P1Behavior::Swap);
    if (sf >= 0) phi[1u << sf] = {RootOfUnity(2, m_prime), 0};
    if (sw >= 0) phi[1u << sw] = {RootOfUnity(1, 0), m - m_prime};
    if (sf >= 0 && sw >= 0) {
        std::uint32_t s = 1u << sf, b = 1u << sw;
        auto [sign_b, power_b] = action.point_map(b);
        phi[s | b] = phi[b] * compose_with(phi[s], sign_b, power_b);
    }
    s.theta.resize(n);
    for (std::uint32_t g = 0; g < n; ++g) {
        s.theta[g][ChartU] = phi[g];
        s.theta[g][ChartV] = {phi[g].coeff, -phi[g].exponent};
    }
    return s;
}

/// Maps an element's structure function from chart V form back to chart U, checking they describe one function.
inline void check_chart_consistency(const EquivariantStructure& s) {
    for (std::size_t g = 0; g < s.theta.size(); ++g) {
        const auto& u = s.theta[g][ChartU];
        const auto& v = s.theta[g][ChartV];
        if (!(u.coeff == v.coeff) || u.exponent != -v.exponent)
            throw std::logic_error("structure map of " + bits_to_string(std::uint32_t(g)) + " disagrees between charts");
    }
}

/**
 * Reads off alpha from phi_{gh} = alpha(g,h) phi_h (phi_g o h) on both charts.
 * Throws if the ratio is not a constant or the charts disagree.
 */
inline TwoCochain cocycle_of(const EquivariantStructure& s) {
    check_chart_consistency(s);
    const auto n = static_cast<std::uint32_t>(s.action.group.order());
    std::vector<RootOfUnity> values(std::size_t(n) * n);
    for (std::uint32_t g = 0; g < n; ++g)
        for (std::uint32_t h = 0; h < n; ++h) {
            auto [sign, power] = s.action.point_map(h);
            std::array<RootOfUnity, 2> value;
            for (int w = 0; w < 2; ++w) {
                Chart chart = Chart(w);
                // In either chart coordinate, h acts as w -> sign * w^power.
                MonomialMap rhs = s.at(h, chart) * compose_with(s.at(g, chart), sign, power);
                MonomialMap ratio = s.at(g ^ h, chart) * invert(rhs);
                if (ratio.exponent != 0)
                    throw std::logic_error("structure maps do not compose to a scalar at (" + bits_to_string(g) + ", " + bits_to_string(h) + ")");
                value[w] = ratio.coeff;
            }
            if (!(value[0] == value[1]))
                throw std::logic_error("charts U and V give different scalars at (" + bits_to_string(g) + ", " + bits_to_string(h) + ")");
            values[std::size_t(g) * n + h] = value[0].reduced();
        }
    std::uint32_t order = 2;
    for (const auto& z : values) order = lcm_order(order, z.order);
    TwoCochain out(s.action.group, order);
    for (std::uint32_t g = 0; g < n; ++g)
        for (std::uint32_t h = 0; h < n; ++h) out.set(g, h, values[std::size_t(g) * n + h]);
    return out;
}

/// Human-readable listing of the structure maps on both charts.
inline std::string describe(const EquivariantStructure& s) {
    std::string out = "O(" + std::to_string(s.m) + "[1:0] + " + std::to_string(s.m_prime) + "[0:1])\n";
    for (std::uint32_t g = 0; g < s.theta.size(); ++g) {
        out += "  theta_" + bits_to_string(g) + ": U: f -> " + to_string(s.at(g, ChartU), "u") + " * (f o g)";
        out += ", V: f -> " + to_string(s.at(g, ChartV), "v") + " * (f o g)\n";
    }
    return out;
}

} // namespace schur
