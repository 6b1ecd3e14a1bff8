/**
 * @file group.hpp
 * @brief Elementary abelian 2-groups (Z/2)^r, their characters and quotient maps.
 *
 * Elements are bit-vectors with e1 in bit 0. The canonical order of a group
 * of rank r is the integer order 0 .. 2^r - 1, which is also the row and
 * column order of every cocycle table.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace schur {

constexpr unsigned max_rank = 8;

struct GroupSpec {
    unsigned rank = 0;

    GroupSpec() = default;
    explicit GroupSpec(unsigned r) : rank(r) {
        if (r > max_rank) throw std::invalid_argument("group rank " + std::to_string(r) + " exceeds the engine bound 8");
    }
    std::size_t order() const { return std::size_t{1} << rank; }
    friend bool operator==(GroupSpec a, GroupSpec b) { return a.rank == b.rank; }
};

struct GroupElement {
    unsigned rank = 0;
    std::uint32_t bits = 0;

    GroupElement() = default;
    GroupElement(GroupSpec g, std::uint32_t b) : rank(g.rank), bits(b) {
        if (b >= g.order()) throw std::invalid_argument("element bits out of range for rank " + std::to_string(g.rank));
    }
    GroupSpec spec() const { return GroupSpec(rank); }
    bool is_identity() const { return bits == 0; }
    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

struct Character {
    unsigned rank = 0;
    std::uint32_t bits = 0;

    Character() = default;
    Character(GroupSpec g, std::uint32_t b) : rank(g.rank), bits(b) {
        if (b >= g.order()) throw std::invalid_argument("character bits out of range for rank " + std::to_string(g.rank));
    }
    bool is_trivial() const { return bits == 0; }
    friend bool operator==(const Character&, const Character&) = default;
    friend auto operator<=>(const Character&, const Character&) = default;
};

inline void require_same_rank(unsigned a, unsigned b) {
    if (a != b) throw std::invalid_argument("rank mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

inline GroupElement add(const GroupElement& g, const GroupElement& h) {
    require_same_rank(g.rank, h.rank);
    return GroupElement(g.spec(), g.bits ^ h.bits);
}

inline GroupElement operator+(const GroupElement& g, const GroupElement& h) { return add(g, h); }

inline Character operator+(const Character& a, const Character& b) {
    require_same_rank(a.rank, b.rank);
    return Character(GroupSpec(a.rank), a.bits ^ b.bits);
}

inline GroupElement basis_element(GroupSpec g, unsigned i) {
    if (i >= g.rank) throw std::invalid_argument("basis index out of range");
    return GroupElement(g, std::uint32_t{1} << i);
}

inline std::vector<GroupElement> canonical_order(GroupSpec g) {
    std::vector<GroupElement> out;
    out.reserve(g.order());
    for (std::uint32_t b = 0; b < g.order(); ++b) out.emplace_back(g, b);
    return out;
}

inline int popcount(std::uint32_t x) { return __builtin_popcount(x); }

/// (-1)^<chi, g>
inline int character_eval(const Character& chi, const GroupElement& g) {
    require_same_rank(chi.rank, g.rank);
    return (popcount(chi.bits & g.bits) & 1) ? -1 : 1;
}

// Text syntax: "0", "e1", "e1+e3"; characters carry a "chi:" prefix.

inline std::string bits_to_string(std::uint32_t bits) {
    if (bits == 0) return "0";
    std::string s;
    for (unsigned i = 0; i < 32; ++i) {
        if (bits >> i & 1u) {
            if (!s.empty()) s += '+';
            s += "e" + std::to_string(i + 1);
        }
    }
    return s;
}

inline std::string to_string(const GroupElement& g) { return bits_to_string(g.bits); }
inline std::string to_string(const Character& c) { return "chi:" + bits_to_string(c.bits); }

inline std::uint32_t parse_bits(GroupSpec g, const std::string& text) {
    if (text == "0") return 0;
    std::uint32_t bits = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto next = text.find('+', pos);
        std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (tok.size() < 2 || tok[0] != 'e') throw std::invalid_argument("bad element syntax: '" + text + "'");
        unsigned idx = 0;
        for (std::size_t k = 1; k < tok.size(); ++k) {
            if (tok[k] < '0' || tok[k] > '9') throw std::invalid_argument("bad element syntax: '" + text + "'");
            idx = idx * 10 + unsigned(tok[k] - '0');
        }
        if (idx == 0 || idx > g.rank) throw std::invalid_argument("index out of range in '" + text + "' for rank " + std::to_string(g.rank));
        bits ^= std::uint32_t{1} << (idx - 1);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return bits;
}

inline GroupElement parse_element(GroupSpec g, const std::string& text) { return GroupElement(g, parse_bits(g, text)); }

inline Character parse_character(GroupSpec g, const std::string& text) {
    if (text.rfind("chi:", 0) != 0) throw std::invalid_argument("character must start with 'chi:': '" + text + "'");
    return Character(g, parse_bits(g, text.substr(4)));
}

/// Span of a list of elements, as a sorted list of bit patterns.
inline std::vector<std::uint32_t> span_bits(const std::vector<GroupElement>& gens) {
    std::vector<std::uint32_t> s{0};
    for (const auto& g : gens) {
        bool inside = false;
        for (auto x : s) inside = inside || x == g.bits;
        if (inside) continue;
        auto n = s.size();
        for (std::size_t i = 0; i < n; ++i) s.push_back(s[i] ^ g.bits);
    }
    std::sort(s.begin(), s.end());
    return s;
}

inline bool independent(const std::vector<GroupElement>& gens) {
    return span_bits(gens).size() == (std::size_t{1} << gens.size());
}

/**
 * Projection G -> G/K. The complement list is mapped onto the target basis
 * in order, so the caller controls which coset becomes which generator.
 */
class QuotientMap {
public:
    QuotientMap(GroupSpec source, std::vector<GroupElement> kernel, std::vector<GroupElement> complement)
        : source_(source), kernel_(std::move(kernel)), complement_(std::move(complement)) {
        for (const auto& k : kernel_) require_same_rank(k.rank, source.rank);
        for (const auto& c : complement_) require_same_rank(c.rank, source.rank);
        if (!independent(kernel_)) throw std::invalid_argument("quotient kernel is not linearly independent");
        std::vector<GroupElement> all = kernel_;
        all.insert(all.end(), complement_.begin(), complement_.end());
        if (all.size() != source.rank || !independent(all))
            throw std::invalid_argument("kernel and complement do not form a basis");
        target_ = GroupSpec(unsigned(complement_.size()));
        image_.assign(source.order(), 0);
        for (std::uint32_t coeff = 0; coeff < source.order(); ++coeff) {
            std::uint32_t elt = 0;
            for (std::size_t i = 0; i < all.size(); ++i)
                if (coeff >> i & 1u) elt ^= all[i].bits;
            image_[elt] = coeff >> kernel_.size();
        }
    }

    GroupSpec source() const { return source_; }
    GroupSpec target() const { return target_; }
    const std::vector<GroupElement>& kernel() const { return kernel_; }
    const std::vector<GroupElement>& complement() const { return complement_; }

    GroupElement operator()(const GroupElement& g) const {
        require_same_rank(g.rank, source_.rank);
        return GroupElement(target_, image_[g.bits]);
    }
    std::uint32_t image_bits(std::uint32_t g) const { return image_[g]; }

    /// Row i of the projection matrix over F_2: images of the source basis vectors.
    std::vector<std::uint32_t> matrix() const {
        std::vector<std::uint32_t> m;
        for (unsigned i = 0; i < source_.rank; ++i) m.push_back(image_[std::uint32_t{1} << i]);
        return m;
    }

private:
    GroupSpec source_;
    GroupSpec target_;
    std::vector<GroupElement> kernel_;
    std::vector<GroupElement> complement_;
    std::vector<std::uint32_t> image_;
};

/// Complement made of standard basis vectors outside the pivot positions of the kernel.
inline std::vector<GroupElement> standard_complement(GroupSpec g, const std::vector<GroupElement>& kernel) {
    std::vector<std::uint32_t> rows;
    for (const auto& k : kernel) rows.push_back(k.bits);
    std::uint32_t pivots = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] == 0) throw std::invalid_argument("quotient kernel is not linearly independent");
        std::uint32_t p = rows[i] & (~rows[i] + 1);
        pivots |= p;
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (rows[j] & p) rows[j] ^= rows[i];
    }
    std::vector<GroupElement> comp;
    for (unsigned i = 0; i < g.rank; ++i)
        if (!(pivots >> i & 1u)) comp.push_back(basis_element(g, i));
    return comp;
}

inline QuotientMap quotient_map(GroupSpec g, const std::vector<GroupElement>& kernel) {
    if (!independent(kernel)) throw std::invalid_argument("quotient kernel is not linearly independent");
    return QuotientMap(g, kernel, standard_complement(g, kernel));
}

/// Completes a partial complement (images chosen by the caller) to a full one with standard vectors.
inline QuotientMap quotient_map(GroupSpec g, const std::vector<GroupElement>& kernel,
                                const std::vector<GroupElement>& leading_complement) {
    std::vector<GroupElement> comp = leading_complement;
    std::vector<GroupElement> all = kernel;
    all.insert(all.end(), comp.begin(), comp.end());
    if (!independent(all)) throw std::invalid_argument("kernel and chosen complement are dependent");
    for (unsigned i = 0; i < g.rank && all.size() < g.rank; ++i) {
        auto cand = all;
        cand.push_back(basis_element(g, i));
        if (independent(cand)) {
            all = cand;
            comp.push_back(basis_element(g, i));
        }
    }
    return QuotientMap(g, kernel, comp);
}

/// A basis of the subgroup spanned by the given elements (greedy, in input order).
inline std::vector<GroupElement> reduce_to_basis(const std::vector<GroupElement>& gens) {
    std::vector<GroupElement> basis;
    for (const auto& g : gens) {
        auto cand = basis;
        cand.push_back(g);
        if (!g.is_identity() && independent(cand)) basis = cand;
    }
    return basis;
}

/// All subgroups of G, each given by its sorted element list.
inline std::vector<std::vector<std::uint32_t>> all_subgroups(GroupSpec g) {
    std::vector<std::vector<std::uint32_t>> found{{0}};
    for (std::size_t i = 0; i < found.size(); ++i) {
        for (std::uint32_t x = 1; x < g.order(); ++x) {
            if (std::binary_search(found[i].begin(), found[i].end(), x)) continue;
            std::vector<std::uint32_t> s = found[i];
            auto n = s.size();
            for (std::size_t k = 0; k < n; ++k) s.push_back(s[k] ^ x);
            std::sort(s.begin(), s.end());
            if (std::find(found.begin(), found.end(), s) == found.end()) found.push_back(s);
        }
    }
    return found;
}

inline std::vector<GroupElement> basis_of_subgroup(GroupSpec g, const std::vector<std::uint32_t>& elements) {
    std::vector<GroupElement> gens;
    for (auto b : elements) gens.emplace_back(g, b);
    return reduce_to_basis(gens);
}

} // namespace schur
