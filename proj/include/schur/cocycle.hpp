/**
 * @file cocycle.hpp
 * @brief mu_n-valued cochains on (Z/2)^r: cocycle and coboundary tests,
 *        products, inflation and normal-cocycle reconstruction.
 *
 * Values are stored as exponents modulo the table order n. Every table is
 * indexed in the canonical element order of group.hpp.
 */
#pragma once

#include "group.hpp"
#include "roots.hpp"
#include "smith.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace schur {

class OneCochain {
public:
    OneCochain() = default;
    OneCochain(GroupSpec g, std::uint32_t order) : group_(g), order_(order), exps_(g.order(), 0) {
        if (order == 0) throw std::invalid_argument("cochain order must be positive");
    }

    GroupSpec group() const { return group_; }
    std::uint32_t order() const { return order_; }
    RootOfUnity at(std::uint32_t g) const { return RootOfUnity(order_, exps_.at(g)); }
    std::uint32_t exponent(std::uint32_t g) const { return exps_.at(g); }
    void set(std::uint32_t g, const RootOfUnity& z) {
        if (order_ % z.reduced().order != 0)
            throw std::invalid_argument("value " + to_string(z) + " does not lie in mu_" + std::to_string(order_));
        exps_.at(g) = z.reduced().embed(order_).exponent;
    }
    void set_exponent(std::uint32_t g, std::int64_t k) { exps_.at(g) = RootOfUnity(order_, k).exponent; }
    bool normalized() const { return exps_.empty() || exps_[0] == 0; }

    friend bool operator==(const OneCochain& a, const OneCochain& b) {
        if (!(a.group_ == b.group_)) return false;
        for (std::uint32_t g = 0; g < a.group_.order(); ++g)
            if (!(a.at(g) == b.at(g))) return false;
        return true;
    }

private:
    GroupSpec group_;
    std::uint32_t order_ = 1;
    std::vector<std::uint32_t> exps_;
};

class TwoCochain {
public:
    TwoCochain() = default;
    TwoCochain(GroupSpec g, std::uint32_t order) : group_(g), order_(order), exps_(g.order() * g.order(), 0) {
        if (order == 0) throw std::invalid_argument("cochain order must be positive");
    }

    GroupSpec group() const { return group_; }
    std::size_t size() const { return group_.order(); }
    std::uint32_t order() const { return order_; }

    RootOfUnity at(std::uint32_t g, std::uint32_t h) const { return RootOfUnity(order_, exps_.at(index(g, h))); }
    std::uint32_t exponent(std::uint32_t g, std::uint32_t h) const { return exps_.at(index(g, h)); }
    void set(std::uint32_t g, std::uint32_t h, const RootOfUnity& z) {
        if (order_ % z.reduced().order != 0)
            throw std::invalid_argument("value " + to_string(z) + " does not lie in mu_" + std::to_string(order_));
        exps_.at(index(g, h)) = z.reduced().embed(order_).exponent;
    }
    void set_exponent(std::uint32_t g, std::uint32_t h, std::int64_t k) { exps_.at(index(g, h)) = RootOfUnity(order_, k).exponent; }

    bool normalized() const {
        for (std::uint32_t g = 0; g < size(); ++g)
            if (exponent(0, g) != 0 || exponent(g, 0) != 0) return false;
        return true;
    }

    bool is_trivial() const {
        for (auto e : exps_)
            if (e != 0) return false;
        return true;
    }

    /// Same values written over mu_m.
    TwoCochain embed(std::uint32_t m) const {
        if (m % order_ != 0) throw std::invalid_argument("cannot embed table order " + std::to_string(order_) + " into " + std::to_string(m));
        TwoCochain out(group_, m);
        for (std::size_t i = 0; i < exps_.size(); ++i) out.exps_[i] = exps_[i] * (m / order_);
        return out;
    }

    /// Value equality, independent of the declared order.
    friend bool operator==(const TwoCochain& a, const TwoCochain& b) {
        if (!(a.group_ == b.group_)) return false;
        for (std::uint32_t g = 0; g < a.size(); ++g)
            for (std::uint32_t h = 0; h < a.size(); ++h)
                if (!(a.at(g, h) == b.at(g, h))) return false;
        return true;
    }

private:
    std::size_t index(std::uint32_t g, std::uint32_t h) const {
        if (g >= size() || h >= size()) throw std::out_of_range("cochain index out of range");
        return std::size_t(g) * size() + h;
    }

    GroupSpec group_;
    std::uint32_t order_ = 1;
    std::vector<std::uint32_t> exps_;
};

inline TwoCochain trivial_cocycle(GroupSpec g) { return TwoCochain(g, 1); }

/// Cells where two tables differ, as (row, column) pairs in canonical order.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> differing_cells(const TwoCochain& a, const TwoCochain& b) {
    require_same_rank(a.group().rank, b.group().rank);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t g = 0; g < a.size(); ++g)
        for (std::uint32_t h = 0; h < a.size(); ++h)
            if (!(a.at(g, h) == b.at(g, h))) out.emplace_back(g, h);
    return out;
}

/// First triple (x, y, z) violating the cocycle identity, if any.
inline std::optional<std::array<std::uint32_t, 3>> cocycle_violation(const TwoCochain& a) {
    const auto n = static_cast<std::uint32_t>(a.size());
    const std::int64_t m = a.order();
    for (std::uint32_t x = 0; x < n; ++x)
        for (std::uint32_t y = 0; y < n; ++y)
            for (std::uint32_t z = 0; z < n; ++z) {
                std::int64_t lhs = std::int64_t(a.exponent(x, y)) + a.exponent(x ^ y, z);
                std::int64_t rhs = std::int64_t(a.exponent(y, z)) + a.exponent(x, y ^ z);
                if ((lhs - rhs) % m != 0) return std::array<std::uint32_t, 3>{x, y, z};
            }
    return std::nullopt;
}

inline bool is_cocycle(const TwoCochain& a) { return !cocycle_violation(a).has_value(); }

inline TwoCochain delta(const OneCochain& t) {
    if (!t.normalized()) throw std::invalid_argument("delta needs a normalized 1-cochain");
    TwoCochain out(t.group(), t.order());
    const auto n = static_cast<std::uint32_t>(t.group().order());
    for (std::uint32_t g = 0; g < n; ++g)
        for (std::uint32_t h = 0; h < n; ++h)
            out.set_exponent(g, h, std::int64_t(t.exponent(g)) + t.exponent(h) - t.exponent(g ^ h));
    return out;
}

inline TwoCochain multiply(const TwoCochain& a, const TwoCochain& b) {
    if (!(a.group() == b.group())) throw std::invalid_argument("cannot multiply cochains on different groups");
    std::uint32_t m = lcm_order(a.order(), b.order());
    TwoCochain x = a.embed(m), y = b.embed(m), out(a.group(), m);
    for (std::uint32_t g = 0; g < a.size(); ++g)
        for (std::uint32_t h = 0; h < a.size(); ++h)
            out.set_exponent(g, h, std::int64_t(x.exponent(g, h)) + y.exponent(g, h));
    return out;
}

inline TwoCochain inverse(const TwoCochain& a) {
    TwoCochain out(a.group(), a.order());
    for (std::uint32_t g = 0; g < a.size(); ++g)
        for (std::uint32_t h = 0; h < a.size(); ++h) out.set_exponent(g, h, -std::int64_t(a.exponent(g, h)));
    return out;
}

inline OneCochain inverse(const OneCochain& t) {
    OneCochain out(t.group(), t.order());
    for (std::uint32_t g = 0; g < t.group().order(); ++g) out.set_exponent(g, -std::int64_t(t.exponent(g)));
    return out;
}

/// Commutator pairing beta(g,h) = alpha(g,h) / alpha(h,g), as signs.
class SignTable {
public:
    explicit SignTable(std::size_t n) : n_(n), v_(n * n, 1) {}
    int at(std::uint32_t g, std::uint32_t h) const { return v_.at(g * n_ + h); }
    void set(std::uint32_t g, std::uint32_t h, int s) { v_.at(g * n_ + h) = s; }
    std::size_t size() const { return n_; }
    bool all_one() const {
        for (int s : v_)
            if (s != 1) return false;
        return true;
    }
    friend bool operator==(const SignTable&, const SignTable&) = default;

private:
    std::size_t n_;
    std::vector<int> v_;
};

inline SignTable pairing(const TwoCochain& a) {
    if (!is_cocycle(a)) throw std::invalid_argument("pairing needs a cocycle");
    SignTable out(a.size());
    for (std::uint32_t g = 0; g < a.size(); ++g)
        for (std::uint32_t h = 0; h < a.size(); ++h) {
            RootOfUnity b = a.at(g, h) * inverse(a.at(h, g));
            if (b.is_one()) continue;
            if (b.reduced().order != 2) throw std::logic_error("commutator of a cocycle on an elementary 2-group must be a sign");
            out.set(g, h, -1);
        }
    return out;
}

struct CoboundaryCertificate {
    bool coboundary = false;
    std::optional<OneCochain> witness;                                   // set when coboundary
    std::optional<std::pair<std::uint32_t, std::uint32_t>> asymmetry;    // set when not
};

/**
 * Solves 2a(g,h) = x_g + x_h - x_{g+h} over Z/2n for a mu_n-valued table.
 * Only rows with h a basis vector enter the solve; the result is verified on
 * the full table. Returns nullopt if no witness exists.
 */
inline std::optional<OneCochain> solve_witness(const TwoCochain& a) {
    const GroupSpec g = a.group();
    const std::uint32_t n = static_cast<std::uint32_t>(g.order());
    const std::int64_t modulus = 2 * std::int64_t(a.order());
    if (n == 1) return OneCochain(g, 2 * a.order());
    Matrix64 mat;
    std::vector<std::int64_t> rhs;
    auto col = [](std::uint32_t x) { return std::size_t(x) - 1; };
    for (std::uint32_t x = 0; x < n; ++x)
        for (unsigned i = 0; i < g.rank; ++i) {
            std::uint32_t y = std::uint32_t{1} << i;
            std::vector<std::int64_t> row(n - 1, 0);
            if (x) row[col(x)] += 1;
            row[col(y)] += 1;
            if (x ^ y) row[col(x ^ y)] -= 1;
            mat.push_back(std::move(row));
            rhs.push_back(2 * std::int64_t(a.exponent(x, y)));
        }
    auto sol = solve_mod(mat, rhs, modulus);
    if (!sol) return std::nullopt;
    OneCochain t(g, std::uint32_t(modulus));
    for (std::uint32_t x = 1; x < n; ++x) t.set_exponent(x, (*sol)[col(x)]);
    if (!(delta(t) == a)) return std::nullopt;
    return t;
}

/**
 * Decides whether a cocycle is a coboundary by symmetry, and cross-checks the
 * verdict with an explicit witness solve.
 */
inline CoboundaryCertificate is_coboundary(const TwoCochain& a) {
    SignTable b = pairing(a);
    CoboundaryCertificate cert;
    for (std::uint32_t g = 0; g < a.size() && !cert.asymmetry; ++g)
        for (std::uint32_t h = 0; h < a.size(); ++h)
            if (b.at(g, h) != 1) {
                cert.asymmetry = std::make_pair(g, h);
                break;
            }
    auto witness = solve_witness(a);
    if (cert.asymmetry.has_value() == witness.has_value())
        throw std::logic_error("symmetry criterion and linear solve disagree");
    cert.coboundary = witness.has_value();
    cert.witness = witness;
    return cert;
}

inline bool cohomologous(const TwoCochain& a, const TwoCochain& b) {
    return is_coboundary(multiply(a, inverse(b))).coboundary;
}

/// alpha o (q x q): pulls a cocycle on G/K back to G.
inline TwoCochain inflate(const TwoCochain& a, const QuotientMap& q) {
    if (!(a.group() == q.target())) throw std::invalid_argument("inflate: table group does not match quotient target");
    TwoCochain out(q.source(), a.order());
    const auto n = static_cast<std::uint32_t>(q.source().order());
    for (std::uint32_t g = 0; g < n; ++g)
        for (std::uint32_t h = 0; h < n; ++h) out.set_exponent(g, h, a.exponent(q.image_bits(g), q.image_bits(h)));
    return out;
}

namespace detail {

inline std::uint32_t combine(const std::vector<GroupElement>& basis, std::uint32_t coeffs) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (coeffs >> i & 1u) v ^= basis[i].bits;
    return v;
}

} // namespace detail

/// Checks the validity conditions on the restricted data; returns a message for the first failure.
inline std::optional<std::string> normal_data_violation(const TwoCochain& nn, const TwoCochain& tt,
                                                        const std::vector<std::vector<RootOfUnity>>& tn) {
    if (!nn.normalized() || !is_cocycle(nn)) return std::string("restriction to N is not a normalized cocycle");
    if (!tt.normalized() || !is_cocycle(tt)) return std::string("restriction to T is not a normalized cocycle");
    const auto nt = static_cast<std::uint32_t>(tt.size()), nn_size = static_cast<std::uint32_t>(nn.size());
    if (tn.size() != nt) return std::string("cross table has wrong number of rows");
    for (const auto& row : tn)
        if (row.size() != nn_size) return std::string("cross table has wrong number of columns");
    for (std::uint32_t t = 0; t < nt; ++t)
        for (std::uint32_t t2 = 0; t2 < nt; ++t2)
            for (std::uint32_t n = 0; n < nn_size; ++n)
                if (!(tn[t ^ t2][n] == tn[t][n] * tn[t2][n]))
                    return "cross table is not multiplicative in T at (" + bits_to_string(t) + ", " + bits_to_string(t2) + ", " + bits_to_string(n) + ")";
    for (std::uint32_t t = 0; t < nt; ++t)
        for (std::uint32_t n = 0; n < nn_size; ++n)
            for (std::uint32_t n2 = 0; n2 < nn_size; ++n2)
                if (!(tn[t][n ^ n2] == tn[t][n] * tn[t][n2]))
                    return "cross table is not multiplicative in N at (" + bits_to_string(t) + ", " + bits_to_string(n) + ", " + bits_to_string(n2) + ")";
    return std::nullopt;
}

/**
 * The normal cocycle alpha(nt, n't') = alpha_TT(t,t') alpha_TN(t,n') alpha_NN(n,n')
 * on G = N x T, with alpha(n, t) = 1.
 */
inline TwoCochain reconstruct_normal(GroupSpec g, const std::vector<GroupElement>& n_basis, const std::vector<GroupElement>& t_basis,
                                     const TwoCochain& alpha_nn, const TwoCochain& alpha_tt,
                                     const std::vector<std::vector<RootOfUnity>>& alpha_tn) {
    std::vector<GroupElement> all = n_basis;
    all.insert(all.end(), t_basis.begin(), t_basis.end());
    if (all.size() != g.rank || !independent(all)) throw std::invalid_argument("N and T bases do not give G = N x T");
    if (alpha_nn.group().rank != n_basis.size() || alpha_tt.group().rank != t_basis.size())
        throw std::invalid_argument("restricted tables have the wrong rank");
    if (auto bad = normal_data_violation(alpha_nn, alpha_tt, alpha_tn)) throw std::invalid_argument(*bad);

    std::uint32_t m = lcm_order(alpha_nn.order(), alpha_tt.order());
    for (const auto& row : alpha_tn)
        for (const auto& z : row) m = lcm_order(m, z.reduced().order);

    // Coordinates of every element: low bits N, high bits T.
    const auto size = static_cast<std::uint32_t>(g.order());
    std::vector<std::uint32_t> n_coord(size), t_coord(size);
    const auto k = static_cast<unsigned>(n_basis.size());
    for (std::uint32_t c = 0; c < size; ++c) {
        std::uint32_t elt = detail::combine(all, c);
        n_coord[elt] = c & ((1u << k) - 1);
        t_coord[elt] = c >> k;
    }
    TwoCochain out(g, m);
    for (std::uint32_t x = 0; x < size; ++x)
        for (std::uint32_t y = 0; y < size; ++y) {
            RootOfUnity v = alpha_tt.at(t_coord[x], t_coord[y]) * alpha_tn[t_coord[x]][n_coord[y]] * alpha_nn.at(n_coord[x], n_coord[y]);
            out.set(x, y, v);
        }
    if (!is_cocycle(out)) throw std::logic_error("reconstructed table failed the cocycle identity");
    return out;
}

} // namespace schur
