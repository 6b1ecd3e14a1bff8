/**
 * @file curve.hpp
 * @brief Curves with a (Z/2)^r action over P^1, a partial Picard model of
 *        invariant divisors, and a rule chain for h^0 and h^1 of line bundles.
 *
 * A curve is given by branch data: one stabilizer s_i per branch fiber over
 * C/G = P^1. Fiber i consists of |G|/|<s_i>| special points, indexed by the
 * cosets of <s_i>, and G acts on it by translation. A stabilizer of 0 marks
 * an unramified fiber of distinguished points, which appears on quotients.
 *
 * Divisors are integer vectors over the special points together with one
 * coordinate h_H per subgroup H with C/H of genus 0: h_H is the pullback of
 * a general point of C/H. Linear equivalence is decided against a lattice
 * of relations that hold on every curve with the given branch data. When
 * the lattice does not contain a difference, a double cover obstruction is
 * tried. If neither applies the answer is Unknown and callers must not
 * guess.
 */
#pragma once

#include "cocycle.hpp"
#include "p1_equivariant.hpp"
#include "smith.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace schur {

using Divisor = std::vector<std::int64_t>;

enum class ClassRelation { Equal, Distinct, Unknown };

inline std::string to_string(ClassRelation r) {
    switch (r) {
    case ClassRelation::Equal: return "equal";
    case ClassRelation::Distinct: return "distinct";
    default: return "unknown";
    }
}

struct ClassComparison {
    ClassRelation relation = ClassRelation::Unknown;
    std::string reason;
};

/// Genus of a (Z/2)^r cover of P^1 with the given number of ramified branch fibers.
inline int cover_genus(std::size_t group_order, std::size_t ramified_fibers) {
    std::int64_t n = std::int64_t(group_order), k = std::int64_t(ramified_fibers);
    std::int64_t num = 4 + n * (k - 4);
    if (num % 4 != 0 || num < 0) throw std::invalid_argument("branch data gives no valid genus");
    return int(num / 4);
}

class CurveModel;

/**
 * Writing a sigma-invariant divisor as pi^* L_B + E for the double cover
 * pi: C -> B = C/<sigma>, with E a reduced subset of the ramification R.
 */
struct Descent {
    std::uint32_t sigma = 0;
    std::shared_ptr<const CurveModel> base;
    Divisor base_divisor;               // L_B on B
    std::int64_t ramification_size = 0; // |R|
    std::vector<std::size_t> e_points;  // E, as point indices on C
};

class CurveModel {
public:
    CurveModel(std::string name, GroupSpec group, std::vector<std::uint32_t> stabilizers, std::string prefix = "E",
               bool allow_unramified = false)
        : name_(std::move(name)), prefix_(std::move(prefix)), group_(group), stab_(std::move(stabilizers)) {
        if (stab_.empty()) throw std::invalid_argument(name_ + ": no branch fibers");
        std::uint32_t sum = 0;
        std::vector<GroupElement> gens;
        std::size_t ramified = 0;
        for (auto s : stab_) {
            if (s >= group_.order()) throw std::invalid_argument(name_ + ": stabilizer out of range");
            if (s == 0 && !allow_unramified) throw std::invalid_argument(name_ + ": stabilizer 0 is not allowed");
            if (s != 0) ++ramified;
            sum ^= s;
            gens.emplace_back(group_, s);
        }
        if (sum != 0) throw std::invalid_argument(name_ + ": stabilizers do not sum to 0");
        if (span_bits(gens).size() != group_.order()) throw std::invalid_argument(name_ + ": stabilizers do not generate the group");
        genus_ = cover_genus(group_.order(), ramified);

        const auto n = static_cast<std::uint32_t>(group_.order());
        for (std::size_t i = 0; i < stab_.size(); ++i) {
            offset_.push_back(reps_.size());
            std::vector<std::size_t> idx(n, 0);
            std::vector<std::uint32_t> fiber_reps;
            for (std::uint32_t c = 0; c < n; ++c)
                if (canonical(i, c) == c) fiber_reps.push_back(c);
            for (std::uint32_t c = 0; c < n; ++c) {
                auto pos = std::lower_bound(fiber_reps.begin(), fiber_reps.end(), canonical(i, c)) - fiber_reps.begin();
                idx[c] = offset_.back() + std::size_t(pos);
            }
            for (auto c : fiber_reps) {
                reps_.push_back(c);
                fiber_of_.push_back(int(i));
            }
            index_.push_back(std::move(idx));
        }
        for (const auto& h : all_subgroups(group_))
            if (quotient_genus(h) == 0) genus0_.push_back(h);
        std::sort(genus0_.begin(), genus0_.end(), [](const auto& a, const auto& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
    }

    const std::string& name() const { return name_; }
    const std::string& prefix() const { return prefix_; }
    GroupSpec group() const { return group_; }
    const std::vector<std::uint32_t>& stabilizers() const { return stab_; }
    std::size_t fiber_count() const { return stab_.size(); }
    int genus() const { return genus_; }

    std::size_t point_count() const { return reps_.size(); }
    std::size_t dimension() const { return reps_.size() + genus0_.size(); }
    int fiber_of(std::size_t point) const { return fiber_of_.at(point); }
    std::uint32_t rep_of(std::size_t point) const { return reps_.at(point); }
    std::size_t fiber_size(std::size_t i) const { return stab_.at(i) ? group_.order() / 2 : group_.order(); }

    /// Canonical coset representative of c in fiber i.
    std::uint32_t canonical(std::size_t i, std::uint32_t c) const { return std::min(c, c ^ stab_.at(i)); }

    std::size_t point_index(std::size_t fiber, std::uint32_t element) const { return index_.at(fiber).at(element); }

    std::string point_label(std::size_t p) const {
        return prefix_ + std::to_string(fiber_of_[p] + 1) + "[" + bits_to_string(reps_[p]) + "]";
    }

    /// Subgroups with a genus-0 quotient, each as a sorted element list; these index the h coordinates.
    const std::vector<std::vector<std::uint32_t>>& genus0_subgroups() const { return genus0_; }

    std::optional<std::size_t> h_coordinate(const std::vector<std::uint32_t>& subgroup) const {
        auto it = std::find(genus0_.begin(), genus0_.end(), subgroup);
        if (it == genus0_.end()) return std::nullopt;
        return reps_.size() + std::size_t(it - genus0_.begin());
    }

    std::vector<std::uint32_t> whole_group() const {
        std::vector<std::uint32_t> all(group_.order());
        for (std::uint32_t g = 0; g < all.size(); ++g) all[g] = g;
        return all;
    }

    std::string coordinate_label(std::size_t k) const {
        if (k < reps_.size()) return point_label(k);
        const auto& h = genus0_.at(k - reps_.size());
        if (h.size() == group_.order()) return "h_G";
        std::string s = "h<";
        auto basis = basis_of_subgroup(group_, h);
        for (std::size_t i = 0; i < basis.size(); ++i) s += (i ? "," : "") + to_string(basis[i]);
        return s + ">";
    }

    /// Number of branch fibers whose stabilizer is a nonzero element outside H.
    std::size_t branch_fibers_outside(const std::vector<std::uint32_t>& h) const {
        std::size_t k = 0;
        for (auto s : stab_)
            if (s != 0 && !std::binary_search(h.begin(), h.end(), s)) ++k;
        return k;
    }

    int quotient_genus(const std::vector<std::uint32_t>& h) const {
        return cover_genus(group_.order() / h.size(), branch_fibers_outside(h));
    }

    // ---- divisors ----

    Divisor zero() const { return Divisor(dimension(), 0); }

    std::int64_t degree(const Divisor& d) const {
        check(d);
        std::int64_t deg = 0;
        for (std::size_t k = 0; k < reps_.size(); ++k) deg += d[k];
        for (std::size_t j = 0; j < genus0_.size(); ++j) deg += d[reps_.size() + j] * std::int64_t(genus0_[j].size());
        return deg;
    }

    Divisor fiber(std::size_t i) const {
        Divisor d = zero();
        for (std::size_t p = offset_.at(i); p < offset_[i] + fiber_size(i); ++p) d[p] = 1;
        return d;
    }

    Divisor generic() const {
        Divisor d = zero();
        d[*h_coordinate(whole_group())] = 1;
        return d;
    }

    Divisor h_class(const std::vector<std::uint32_t>& subgroup) const {
        auto k = h_coordinate(subgroup);
        if (!k) throw std::invalid_argument(name_ + ": quotient by this subgroup does not have genus 0");
        Divisor d = zero();
        d[*k] = 1;
        return d;
    }

    /// Point indices of the H-orbit of (fiber, c).
    std::vector<std::size_t> orbit(const std::vector<std::uint32_t>& h, std::size_t fiber, std::uint32_t c) const {
        std::vector<std::size_t> pts;
        for (auto x : h) pts.push_back(point_index(fiber, c ^ x));
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

    /// Multiplicity e with pi_H^*(image of a point of fiber i) = e * (its H-orbit).
    std::int64_t ramification_index(const std::vector<std::uint32_t>& h, std::size_t fiber) const {
        auto s = stab_.at(fiber);
        return (s != 0 && std::binary_search(h.begin(), h.end(), s)) ? 2 : 1;
    }

    Divisor orbit_divisor(const std::vector<std::uint32_t>& h, std::size_t fiber, std::uint32_t c, std::int64_t coef = 1) const {
        Divisor d = zero();
        for (auto p : orbit(h, fiber, c)) d[p] += coef;
        return d;
    }

    /// Riemann-Hurwitz canonical divisor: -2 h_G plus every ramified fiber.
    Divisor canonical_divisor() const {
        Divisor d = zero();
        d[*h_coordinate(whole_group())] = -2;
        for (std::size_t i = 0; i < stab_.size(); ++i)
            if (stab_[i] != 0) d = add(d, fiber(i));
        return d;
    }

    Divisor translate(std::uint32_t g, const Divisor& d) const {
        check(d);
        Divisor out = d;
        for (std::size_t p = 0; p < reps_.size(); ++p) out[p] = 0;
        for (std::size_t p = 0; p < reps_.size(); ++p)
            if (d[p]) out[point_index(std::size_t(fiber_of_[p]), reps_[p] ^ g)] += d[p];
        return out;
    }

    /// True if the divisor itself (not only its class) is fixed by the whole group.
    bool is_invariant_divisor(const Divisor& d) const {
        for (std::uint32_t g = 1; g < group_.order(); ++g)
            if (translate(g, d) != d) return false;
        for (std::size_t j = 0; j < genus0_.size(); ++j)
            if (d[reps_.size() + j] != 0 && genus0_[j].size() != group_.order()) return false;
        return true;
    }

    static Divisor add(const Divisor& a, const Divisor& b) {
        if (a.size() != b.size()) throw std::invalid_argument("divisor length mismatch");
        Divisor c(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] + b[k];
        return c;
    }
    static Divisor scale(std::int64_t s, const Divisor& a) {
        Divisor c(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) c[k] = s * a[k];
        return c;
    }
    static Divisor subtract(const Divisor& a, const Divisor& b) { return add(a, scale(-1, b)); }

    std::string describe(const Divisor& d) const {
        check(d);
        std::string s;
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (!d[k]) continue;
            std::string coef = d[k] == 1 ? "" : d[k] == -1 ? "-" : std::to_string(d[k]) + "*";
            if (!s.empty()) {
                if (d[k] > 0) s += " + ";
                else {
                    s += " - ";
                    coef = d[k] == -1 ? "" : std::to_string(-d[k]) + "*";
                }
            }
            s += coef + coordinate_label(k);
        }
        return s.empty() ? "0" : s;
    }

    // ---- linear equivalence ----

    const IntegerLattice& relations() const {
        std::call_once(lattice_once_, [this] { lattice_ = IntegerLattice(dimension(), relation_generators()); });
        return lattice_;
    }

    /// Every generator of the relation lattice, with a short description of where it comes from.
    std::vector<Divisor> relation_generators(std::vector<std::string>* labels = nullptr) const {
        std::vector<Divisor> rows;
        auto push = [&](Divisor v, std::string why) {
            bool zero_row = std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
            if (zero_row) return;
            if (degree(v) != 0) throw std::logic_error(name_ + ": relation of nonzero degree (" + why + ")");
            rows.push_back(std::move(v));
            if (labels) labels->push_back(std::move(why));
        };
        const Divisor k_expr = canonical_divisor();
        const auto gens = whole_group();
        for (const auto& h : genus0_) {
            Divisor hh = h_class(h);
            std::string hl = coordinate_label(*h_coordinate(h));
            for (std::size_t i = 0; i < stab_.size(); ++i) {
                std::set<std::size_t> seen;
                for (std::uint32_t c = 0; c < group_.order(); ++c) {
                    auto pts = orbit(h, i, c);
                    if (seen.count(pts[0])) continue;
                    seen.insert(pts[0]);
                    Divisor v = subtract(orbit_divisor(h, i, c, ramification_index(h, i)), hh);
                    push(std::move(v), "point pullback from genus-0 quotient (" + hl + ")");
                }
            }
            if (h.size() != group_.order())
                push(subtract(h_class(gens), scale(std::int64_t(group_.order() / h.size()), hh)), "pullback of a point through " + hl);
            Divisor ram = zero();
            for (std::size_t i = 0; i < stab_.size(); ++i)
                if (stab_[i] != 0 && std::binary_search(h.begin(), h.end(), stab_[i])) ram = add(ram, fiber(i));
            push(subtract(k_expr, add(scale(-2, hh), ram)), "canonical class through " + hl);
            // Double covers C/K -> C/H with C/H rational: the ramification is half the branch degree times a point.
            for (const auto& k : all_subgroups(group_)) {
                if (k.size() * 2 != h.size() || !std::includes(h.begin(), h.end(), k.begin(), k.end())) continue;
                Divisor rsum = zero();
                std::int64_t branch_points = 0;
                for (std::size_t i = 0; i < stab_.size(); ++i) {
                    auto s = stab_[i];
                    if (s == 0 || !std::binary_search(h.begin(), h.end(), s) || std::binary_search(k.begin(), k.end(), s)) continue;
                    rsum = add(rsum, fiber(i));
                    branch_points += std::int64_t(fiber_size(i) / k.size());
                }
                if (branch_points % 2 != 0) throw std::logic_error(name_ + ": odd branch degree for a double cover");
                push(subtract(rsum, scale(branch_points / 2, hh)), "ramification of a double cover onto " + hl);
            }
        }
        for (const auto& h : all_subgroups(group_)) {
            if (quotient_genus(h) != 1) continue;
            Divisor ram = zero();
            for (std::size_t i = 0; i < stab_.size(); ++i)
                if (stab_[i] != 0 && std::binary_search(h.begin(), h.end(), stab_[i])) ram = add(ram, fiber(i));
            push(subtract(k_expr, ram), "canonical class through an elliptic quotient");
        }
        return rows;
    }

    /**
     * A sigma-invariant divisor in the class of d, or nullopt. Coordinates
     * h_H with sigma in H are already pullbacks from C/<sigma>; the others are
     * replaced by a sigma-stable special orbit of C -> C/H.
     */
    std::optional<Divisor> sigma_representative(const Divisor& d, std::uint32_t sigma) const {
        check(d);
        Divisor rep = d;
        for (std::size_t j = 0; j < genus0_.size(); ++j) {
            std::int64_t coef = d[reps_.size() + j];
            const auto& h = genus0_[j];
            if (coef == 0 || std::binary_search(h.begin(), h.end(), sigma)) continue;
            std::optional<std::size_t> fiber_choice;
            for (std::size_t i = 0; i < stab_.size() && !fiber_choice; ++i)
                if (stab_[i] != 0 && std::binary_search(h.begin(), h.end(), stab_[i] ^ sigma)) fiber_choice = i;
            if (!fiber_choice) return std::nullopt;
            rep[reps_.size() + j] = 0;
            rep = add(rep, orbit_divisor(h, *fiber_choice, 0, coef * ramification_index(h, *fiber_choice)));
        }
        for (std::size_t p = 0; p < reps_.size(); ++p)
            if (rep[p] != rep[point_index(std::size_t(fiber_of_[p]), reps_[p] ^ sigma)]) return std::nullopt;
        return rep;
    }

    std::vector<std::size_t> ramification_points(std::uint32_t sigma) const {
        std::vector<std::size_t> r;
        for (std::size_t p = 0; p < reps_.size(); ++p)
            if (stab_[std::size_t(fiber_of_[p])] == sigma) r.push_back(p);
        return r;
    }

    /**
     * Double cover obstruction for a degree-0 divisor d. If d is linearly
     * equivalent to 0, then for every involution sigma with ramification R
     * the parities of a sigma-invariant representative on R are all equal.
     * Returns the first sigma whose parity vector is mixed.
     */
    std::optional<std::uint32_t> parity_obstruction(const Divisor& d) const {
        for (std::uint32_t sigma = 1; sigma < group_.order(); ++sigma) {
            auto r = ramification_points(sigma);
            if (r.empty()) continue;
            auto rep = sigma_representative(d, sigma);
            if (!rep) continue;
            bool odd0 = ((*rep)[r[0]] & 1) != 0;
            for (auto p : r)
                if ((((*rep)[p] & 1) != 0) != odd0) return sigma;
        }
        return std::nullopt;
    }

    ClassComparison compare_classes(const Divisor& a, const Divisor& b) const {
        Divisor d = subtract(a, b);
        auto deg = degree(d);
        if (deg != 0) return {ClassRelation::Distinct, "degrees differ by " + std::to_string(deg)};
        if (relations().contains(d)) return {ClassRelation::Equal, "difference lies in the relation lattice"};
        if (auto s = parity_obstruction(d))
            return {ClassRelation::Distinct, "parity obstruction for the involution " + bits_to_string(*s)};
        return {ClassRelation::Unknown, "no relation and no parity obstruction"};
    }

    /// Strict form: throws when the comparison is undecided.
    bool classes_equal(const Divisor& a, const Divisor& b) const {
        auto c = compare_classes(a, b);
        if (c.relation == ClassRelation::Unknown)
            throw std::runtime_error(name_ + ": cannot decide whether " + describe(a) + " and " + describe(b) + " are equivalent");
        return c.relation == ClassRelation::Equal;
    }

    /// Smith invariants of Z^R / (2 e_r, sum e_r), the group of ramification classes modulo pullbacks.
    std::vector<std::int64_t> ramification_class_group(std::uint32_t sigma) const {
        auto r = ramification_points(sigma);
        if (r.empty()) throw std::invalid_argument(name_ + ": the involution " + bits_to_string(sigma) + " has no fixed points");
        std::vector<std::vector<BigInt>> m;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::vector<BigInt> row(r.size(), 0);
            row[i] = 2;
            m.push_back(row);
        }
        m.push_back(std::vector<BigInt>(r.size(), 1));
        std::vector<std::int64_t> out;
        for (const auto& x : smith_invariants<BigInt>(m)) out.push_back(static_cast<std::int64_t>(x));
        return out;
    }

    // ---- quotients ----

    /// The curve C/<sigma> with the residual action of G/<sigma>.
    std::shared_ptr<const CurveModel> quotient(std::uint32_t sigma) const {
        std::lock_guard<std::mutex> lock(quotient_mutex_);
        auto it = quotients_.find(sigma);
        if (it != quotients_.end()) return it->second;
        auto q = quotient_by(sigma);
        std::vector<std::uint32_t> s;
        for (auto x : stab_) s.push_back(q.image_bits(x));
        auto model = std::make_shared<const CurveModel>(name_ + "/<" + bits_to_string(sigma) + ">", q.target(), s, prefix_, true);
        quotients_[sigma] = model;
        return model;
    }

    QuotientMap quotient_by(std::uint32_t sigma) const {
        if (sigma == 0 || sigma >= group_.order()) throw std::invalid_argument("quotient element must be a nonzero group element");
        return quotient_map(group_, {GroupElement(group_, sigma)});
    }

    /// Decomposes d as pi^* L_B + E along sigma, or nullopt if no sigma-invariant representative is found.
    std::optional<Descent> descend(const Divisor& d, std::uint32_t sigma) const {
        auto rep = sigma_representative(d, sigma);
        if (!rep) return std::nullopt;
        Descent out;
        out.sigma = sigma;
        out.base = quotient(sigma);
        const auto& base = *out.base;
        auto q = quotient_by(sigma);
        out.base_divisor = base.zero();
        for (std::size_t p = 0; p < reps_.size(); ++p) {
            std::int64_t a = (*rep)[p];
            auto fib = std::size_t(fiber_of_[p]);
            std::size_t image = base.point_index(fib, q.image_bits(reps_[p]));
            if (stab_[fib] == sigma) {
                ++out.ramification_size;
                std::int64_t half = a >= 0 ? a / 2 : -((-a + 1) / 2);
                out.base_divisor[image] += half;
                if (a - 2 * half) out.e_points.push_back(p);
            } else if (p < point_index(fib, reps_[p] ^ sigma)) {
                out.base_divisor[image] += a;
            }
        }
        for (std::size_t j = 0; j < genus0_.size(); ++j) {
            std::int64_t coef = (*rep)[reps_.size() + j];
            if (!coef) continue;
            std::vector<std::uint32_t> image;
            for (auto x : genus0_[j]) image.push_back(q.image_bits(x));
            std::sort(image.begin(), image.end());
            image.erase(std::unique(image.begin(), image.end()), image.end());
            auto k = base.h_coordinate(image);
            if (!k) throw std::logic_error(name_ + ": genus-0 quotient has no counterpart on C/<sigma>");
            out.base_divisor[*k] += coef;
        }
        if (2 * base.degree(out.base_divisor) + std::int64_t(out.e_points.size()) != degree(d))
            throw std::logic_error(name_ + ": descent does not preserve degree");
        return out;
    }

private:
    void check(const Divisor& d) const {
        if (d.size() != dimension()) throw std::invalid_argument(name_ + ": divisor has wrong length");
    }

    std::string name_;
    std::string prefix_;
    GroupSpec group_;
    std::vector<std::uint32_t> stab_;
    int genus_ = 0;
    std::vector<std::size_t> offset_;
    std::vector<std::uint32_t> reps_;
    std::vector<int> fiber_of_;
    std::vector<std::vector<std::size_t>> index_;
    std::vector<std::vector<std::uint32_t>> genus0_;

    mutable std::once_flag lattice_once_;
    mutable IntegerLattice lattice_;
    mutable std::mutex quotient_mutex_;
    mutable std::map<std::uint32_t, std::shared_ptr<const CurveModel>> quotients_;
};

// ---- divisor expressions and their equivariant structures ----

/// All special points of fiber i.
struct WholeFiber {
    std::size_t fiber = 0;
};

/// The pullback h_G of a general point of C/G.
struct GenericClass {};

/// The canonical class.
struct CanonicalClass {};

/**
 * mult * pi_H^*(p) for the image p of (fiber, rep) on C/H = P^1. The
 * residual group G/H acts on P^1 with the point stabilizer of p as the sign
 * flip and the swap element as the swap.
 */
struct PullbackPoint {
    std::vector<std::uint32_t> subgroup_gens;
    std::size_t fiber = 0;
    std::uint32_t rep = 0;
    std::int64_t mult = 1;
    std::optional<std::uint32_t> swap;
};

/**
 * F1 - F2 where F1 is the <x,y>-orbit of coset 0 in the fiber with
 * stabilizer x, and F2 is its translate by z.
 */
struct HalfFiberPair {
    std::size_t fiber = 0;
    std::uint32_t y = 0;
    std::uint32_t z = 0;
};

using Atom = std::variant<WholeFiber, GenericClass, CanonicalClass, PullbackPoint, HalfFiberPair>;

struct Term {
    std::int64_t coef = 1;
    Atom atom;
};

struct DivisorExpr {
    std::vector<Term> terms;

    DivisorExpr() = default;
    explicit DivisorExpr(Atom a, std::int64_t coef = 1) { terms.push_back({coef, std::move(a)}); }
    DivisorExpr(std::initializer_list<Term> t) : terms(t) {}

    friend DivisorExpr operator+(DivisorExpr a, const DivisorExpr& b) {
        a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
        return a;
    }
    friend DivisorExpr operator*(std::int64_t s, DivisorExpr a) {
        for (auto& t : a.terms) t.coef *= s;
        return a;
    }
    friend DivisorExpr operator-(const DivisorExpr& a) { return -1 * a; }
    friend DivisorExpr operator-(const DivisorExpr& a, const DivisorExpr& b) { return a + (-b); }
};

/// The first fiber whose stabilizer is s.
inline std::size_t fiber_with_stabilizer(const CurveModel& c, std::uint32_t s) {
    for (std::size_t i = 0; i < c.fiber_count(); ++i)
        if (c.stabilizers()[i] == s) return i;
    throw std::invalid_argument(c.name() + ": no fiber with stabilizer " + bits_to_string(s));
}

/// The pullback atom E^{x,y,z,w}: H = <x,y>, the first fiber with stabilizer z, swap element w.
inline PullbackPoint pullback_atom(const CurveModel& c, std::uint32_t x, std::uint32_t y, std::uint32_t z, std::uint32_t w) {
    return PullbackPoint{{x, y}, fiber_with_stabilizer(c, z), 0, 1, w};
}

inline HalfFiberPair half_fiber_pair(const CurveModel& c, std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    return HalfFiberPair{fiber_with_stabilizer(c, x), y, z};
}

namespace detail {

inline std::vector<std::uint32_t> subgroup_elements(const CurveModel& c, const std::vector<std::uint32_t>& gens) {
    std::vector<GroupElement> g;
    for (auto b : gens) g.emplace_back(c.group(), b);
    return span_bits(g);
}

struct PullbackSetup {
    std::vector<std::uint32_t> h;
    std::vector<GroupElement> kernel;
    std::uint32_t sign = 0;
    std::optional<std::uint32_t> swap;
};

inline PullbackSetup check_pullback(const CurveModel& c, const PullbackPoint& a) {
    PullbackSetup s;
    for (auto b : a.subgroup_gens) s.kernel.emplace_back(c.group(), b);
    if (!independent(s.kernel)) throw std::invalid_argument("pullback atom: subgroup generators are dependent");
    s.h = span_bits(s.kernel);
    if (c.quotient_genus(s.h) != 0) throw std::invalid_argument("pullback atom: quotient is not rational");
    unsigned residual = c.group().rank - unsigned(s.kernel.size());
    if (residual == 0 || residual > 2) throw std::invalid_argument("pullback atom: residual group must have rank 1 or 2");
    s.sign = c.stabilizers().at(a.fiber);
    if (s.sign == 0 || std::binary_search(s.h.begin(), s.h.end(), s.sign))
        throw std::invalid_argument("pullback atom: the point is not fixed by a residual involution");
    if (residual == 2) {
        auto hs = s.h;
        for (auto x : s.h) hs.push_back(x ^ s.sign);
        std::sort(hs.begin(), hs.end());
        if (a.swap) {
            if (std::binary_search(hs.begin(), hs.end(), *a.swap)) throw std::invalid_argument("pullback atom: swap element lies in H + <stabilizer>");
            s.swap = *a.swap;
        } else {
            for (std::uint32_t g = 1; g < c.group().order() && !s.swap; ++g)
                if (!std::binary_search(hs.begin(), hs.end(), g)) s.swap = g;
        }
    }
    return s;
}

} // namespace detail

inline Divisor atom_divisor(const CurveModel& c, const Atom& atom) {
    return std::visit(
        [&](const auto& a) -> Divisor {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, WholeFiber>) {
                return c.fiber(a.fiber);
            } else if constexpr (std::is_same_v<A, GenericClass>) {
                return c.generic();
            } else if constexpr (std::is_same_v<A, CanonicalClass>) {
                return c.canonical_divisor();
            } else if constexpr (std::is_same_v<A, PullbackPoint>) {
                auto s = detail::check_pullback(c, a);
                return c.orbit_divisor(s.h, a.fiber, a.rep, a.mult * c.ramification_index(s.h, a.fiber));
            } else {
                std::uint32_t x = c.stabilizers().at(a.fiber);
                auto h = detail::subgroup_elements(c, {x, a.y});
                Divisor f1 = c.orbit_divisor(h, a.fiber, 0);
                Divisor f2 = c.translate(a.z, f1);
                if (f1 == f2) throw std::invalid_argument("half-fiber pair: z does not move the half fiber");
                return CurveModel::subtract(f1, f2);
            }
        },
        atom);
}

/// The cocycle of the equivariant structure attached to an atom.
inline TwoCochain atom_cocycle(const CurveModel& c, const Atom& atom) {
    return std::visit(
        [&](const auto& a) -> TwoCochain {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, PullbackPoint>) {
                auto s = detail::check_pullback(c, a);
                std::vector<GroupElement> comp{GroupElement(c.group(), s.sign)};
                std::vector<P1Behavior> gens{P1Behavior::SignFlip};
                if (s.swap) {
                    comp.emplace_back(c.group(), *s.swap);
                    gens.push_back(P1Behavior::Swap);
                }
                auto table = cocycle_of(default_theta(P1Action(gens), int(a.mult), 0));
                return inflate(table, QuotientMap(c.group(), s.kernel, comp));
            } else if constexpr (std::is_same_v<A, HalfFiberPair>) {
                std::uint32_t x = c.stabilizers().at(a.fiber);
                std::vector<GroupElement> kernel{GroupElement(c.group(), x)};
                std::vector<GroupElement> comp{GroupElement(c.group(), a.y), GroupElement(c.group(), a.z)};
                if (c.group().rank != 3) throw std::invalid_argument("half-fiber pair atoms need a rank-3 group");
                auto table = cocycle_of(default_theta(P1Action({P1Behavior::SignFlip, P1Behavior::Swap}), 1, 0));
                return inflate(table, QuotientMap(c.group(), kernel, comp));
            } else {
                // Whole fibers, h_G and K are G-invariant divisors with the translation structure.
                return trivial_cocycle(c.group());
            }
        },
        atom);
}

inline std::string atom_label(const CurveModel& c, const Atom& atom) {
    return std::visit(
        [&](const auto& a) -> std::string {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, WholeFiber>) {
                return c.prefix() + std::to_string(a.fiber + 1);
            } else if constexpr (std::is_same_v<A, GenericClass>) {
                return "h_G";
            } else if constexpr (std::is_same_v<A, CanonicalClass>) {
                return "K";
            } else if constexpr (std::is_same_v<A, PullbackPoint>) {
                std::string s = "pullback(<";
                for (std::size_t i = 0; i < a.subgroup_gens.size(); ++i) s += (i ? "," : "") + bits_to_string(a.subgroup_gens[i]);
                s += ">, " + c.prefix() + std::to_string(a.fiber + 1) + "[" + bits_to_string(a.rep) + "]";
                if (a.mult != 1) s += ", " + std::to_string(a.mult);
                return s + ")";
            } else {
                return "half(" + bits_to_string(c.stabilizers().at(a.fiber)) + "; " + bits_to_string(a.y) + ", " + bits_to_string(a.z) + ")";
            }
        },
        atom);
}

inline Divisor evaluate(const CurveModel& c, const DivisorExpr& e) {
    Divisor d = c.zero();
    for (const auto& t : e.terms) d = CurveModel::add(d, CurveModel::scale(t.coef, atom_divisor(c, t.atom)));
    return d;
}

/// Product of the atom cocycles raised to their coefficients.
inline TwoCochain expr_cocycle(const CurveModel& c, const DivisorExpr& e) {
    TwoCochain acc = trivial_cocycle(c.group());
    for (const auto& t : e.terms) {
        TwoCochain a = atom_cocycle(c, t.atom);
        TwoCochain f = t.coef >= 0 ? a : inverse(a);
        for (std::int64_t k = 0; k < (t.coef >= 0 ? t.coef : -t.coef); ++k) acc = multiply(acc, f);
    }
    return acc;
}

inline std::string expr_label(const CurveModel& c, const DivisorExpr& e) {
    std::string s;
    for (const auto& t : e.terms) {
        std::int64_t k = t.coef;
        if (!s.empty()) s += k < 0 ? " - " : " + ";
        else if (k < 0) s += "-";
        std::int64_t a = k < 0 ? -k : k;
        if (a != 1) s += std::to_string(a) + "*";
        s += atom_label(c, t.atom);
    }
    return s.empty() ? "0" : s;
}

// ---- classes of invariant effective divisors ----

struct CensusClass {
    Divisor representative;
    std::vector<std::string> members;   // labels of effective invariant divisors in this class
};

struct Census {
    std::int64_t degree = 0;
    std::vector<CensusClass> classes;
    bool complete = true;   // false if some comparison was undecided
};

/**
 * Classes of G-invariant effective divisors of degree d. Such a divisor is
 * a sum of ramified fibers and free orbits, and every free orbit is
 * equivalent to h_G.
 */
inline Census invariant_census(const CurveModel& c, std::int64_t d) {
    Census out;
    out.degree = d;
    if (d < 0) return out;
    std::vector<std::pair<Divisor, std::string>> pieces;
    std::vector<std::int64_t> piece_deg;
    for (std::size_t i = 0; i < c.fiber_count(); ++i)
        if (c.stabilizers()[i] != 0) {
            pieces.emplace_back(c.fiber(i), c.prefix() + std::to_string(i + 1));
            piece_deg.push_back(std::int64_t(c.fiber_size(i)));
        }
    pieces.emplace_back(c.generic(), "h_G");
    piece_deg.push_back(std::int64_t(c.group().order()));

    std::vector<std::pair<Divisor, std::string>> divisors;
    std::vector<std::int64_t> counts(pieces.size(), 0);
    std::size_t guard = 0;
    auto rec = [&](auto&& self, std::size_t k, std::int64_t remaining) -> void {
        if (++guard > 100000) throw std::runtime_error("census too large");
        if (remaining == 0) {
            Divisor sum = c.zero();
            std::string label;
            for (std::size_t j = 0; j < pieces.size(); ++j)
                if (counts[j]) {
                    sum = CurveModel::add(sum, CurveModel::scale(counts[j], pieces[j].first));
                    label += (label.empty() ? "" : " + ") + (counts[j] == 1 ? "" : std::to_string(counts[j]) + "*") + pieces[j].second;
                }
            divisors.emplace_back(sum, label.empty() ? "0" : label);
            return;
        }
        if (k == pieces.size()) return;
        for (std::int64_t n = remaining / piece_deg[k]; n >= 0; --n) {
            counts[k] = n;
            self(self, k + 1, remaining - n * piece_deg[k]);
        }
        counts[k] = 0;
    };
    rec(rec, 0, d);

    for (auto& [div, label] : divisors) {
        bool placed = false;
        for (auto& cls : out.classes) {
            auto r = c.compare_classes(div, cls.representative);
            if (r.relation == ClassRelation::Unknown) out.complete = false;
            if (r.relation == ClassRelation::Equal) {
                cls.members.push_back(label);
                placed = true;
                break;
            }
        }
        if (!placed) out.classes.push_back({div, {label}});
    }
    return out;
}

// ---- cohomology of line bundles ----

/// A descent hint: an involution and, optionally, the genus the quotient must have.
struct DescentHint {
    std::uint32_t sigma = 0;
    std::optional<int> base_genus;
};

inline std::string base_type(int genus) {
    if (genus == 0) return "P1";
    if (genus == 1) return "elliptic";
    return "genus " + std::to_string(genus);
}

struct CohomologyStep {
    std::string rule;
    std::string detail;
};

struct CohomologyResult {
    std::int64_t h0 = 0;
    std::int64_t h1 = 0;
    std::vector<CohomologyStep> route;

    std::string route_summary() const {
        std::string s;
        for (const auto& st : route) s += (s.empty() ? "" : " -> ") + st.rule;
        return s;
    }
};

struct CohomologyStuck : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 2L ~ K and deg L = g - 1. Throws if the class comparison is undecided.
inline bool is_theta_characteristic(const CurveModel& c, const Divisor& l) {
    if (c.degree(l) != c.genus() - 1) return false;
    return c.classes_equal(CurveModel::scale(2, l), c.canonical_divisor());
}

namespace detail {

struct RuleContext {
    const std::vector<DescentHint>* hints;
    bool allow_serre;
    int depth;
};

inline std::optional<std::int64_t> decide_h0(const CurveModel& c, const Divisor& l, const RuleContext& ctx,
                                             std::vector<CohomologyStep>& route);

inline std::optional<std::int64_t> degree_only_h0(int genus, std::int64_t d) {
    if (genus == 0) return std::max<std::int64_t>(0, d + 1);
    if (d < 0) return 0;
    if (d > 2 * genus - 2) return d + 1 - genus;
    return std::nullopt;
}

inline std::optional<CohomologyResult> base_dims(const CurveModel& b, const Divisor& l, const RuleContext& ctx) {
    static const std::vector<DescentHint> none;
    if (ctx.depth > 3) return std::nullopt;
    CohomologyResult r;
    auto h0 = decide_h0(b, l, {&none, true, ctx.depth + 1}, r.route);
    if (!h0) return std::nullopt;
    r.h0 = *h0;
    r.h1 = r.h0 - (b.degree(l) + 1 - b.genus());
    return r;
}

inline std::string describe_route(const std::vector<CohomologyStep>& route) {
    std::string s;
    for (const auto& st : route) s += (s.empty() ? "" : ", ") + st.rule;
    return s.empty() ? "" : " [" + s + "]";
}

inline std::optional<std::int64_t> decide_h0(const CurveModel& c, const Divisor& l, const RuleContext& ctx,
                                             std::vector<CohomologyStep>& route) {
    const std::int64_t d = c.degree(l);
    const int g = c.genus();
    if (g == 0) {
        route.push_back({"rational curve", "h0 = max(0, d + 1)"});
        return std::max<std::int64_t>(0, d + 1);
    }
    if (d < 0) {
        route.push_back({"negative degree", "deg " + std::to_string(d) + " < 0"});
        return 0;
    }
    if (d > 2 * g - 2) {
        route.push_back({"nonspecial degree", "deg " + std::to_string(d) + " > 2g - 2, so h1 = 0"});
        return d + 1 - g;
    }
    if (d == 0) {
        auto cmp = c.compare_classes(l, c.zero());
        if (cmp.relation != ClassRelation::Unknown) {
            route.push_back({"degree-zero class", cmp.relation == ClassRelation::Equal ? "trivial class: " + cmp.reason : "nontrivial class: " + cmp.reason});
            return cmp.relation == ClassRelation::Equal ? 1 : 0;
        }
    }
    if (g == 1 && d > 0) {
        route.push_back({"elliptic curve", "h0 = deg"});
        return d;
    }

    for (const auto& hint : *ctx.hints) {
        auto desc = c.descend(l, hint.sigma);
        if (!desc) continue;
        const auto& b = *desc->base;
        if (hint.base_genus && *hint.base_genus != b.genus())
            throw std::invalid_argument(c.name() + ": quotient by " + bits_to_string(hint.sigma) + " has genus " +
                                        std::to_string(b.genus()) + ", hint expects " + std::to_string(*hint.base_genus));
        std::int64_t d1 = b.degree(desc->base_divisor);
        std::int64_t d2 = d1 - desc->ramification_size / 2 + std::int64_t(desc->e_points.size());
        auto first = base_dims(b, desc->base_divisor, ctx);
        auto second = degree_only_h0(b.genus(), d2);
        std::string where = "descent along " + bits_to_string(hint.sigma) + " to " + base_type(b.genus()) + " base";
        if (first && second) {
            route.push_back({"double cover descent", where + ": h0 = " + std::to_string(first->h0) + describe_route(first->route) +
                                                         " + " + std::to_string(*second) + " (deg " + std::to_string(d2) + ")"});
            return first->h0 + *second;
        }
        if (first && is_theta_characteristic(c, l)) {
            route.push_back({"theta characteristic descent", where + ": h0 = h0 + h1 of the base part = " + std::to_string(first->h0) +
                                                                 " + " + std::to_string(first->h1) + describe_route(first->route)});
            return first->h0 + first->h1;
        }
    }

    if (c.is_invariant_divisor(l)) {
        auto census = invariant_census(c, d);
        bool all_distinct = census.complete;
        for (const auto& cls : census.classes) {
            auto r = c.compare_classes(l, cls.representative);
            if (r.relation != ClassRelation::Distinct) all_distinct = false;
        }
        if (all_distinct) {
            route.push_back({"eigensection census", "distinct from all " + std::to_string(census.classes.size()) +
                                                        " classes of invariant effective divisors of degree " + std::to_string(d)});
            return 0;
        }
    }

    if (ctx.allow_serre) {
        std::vector<CohomologyStep> dual;
        Divisor kl = CurveModel::subtract(c.canonical_divisor(), l);
        auto h1 = decide_h0(c, kl, {ctx.hints, false, ctx.depth}, dual);
        if (h1) {
            route.push_back({"Serre duality", "h1 = h0(K - L) = " + std::to_string(*h1) + describe_route(dual)});
            return *h1 + d + 1 - g;
        }
    }
    return std::nullopt;
}

} // namespace detail

/**
 * (h0, h1) of O_C(l). Every step is a sound rule; Riemann-Roch fills in the
 * second number. Throws CohomologyStuck when no rule decides.
 */
inline CohomologyResult cohomology_dims(const CurveModel& c, const Divisor& l, const std::vector<DescentHint>& hints = {}) {
    CohomologyResult r;
    auto h0 = detail::decide_h0(c, l, {&hints, true, 0}, r.route);
    if (!h0) throw CohomologyStuck(c.name() + ": no rule decides h0 of " + c.describe(l));
    r.h0 = *h0;
    r.h1 = r.h0 - (c.degree(l) + 1 - c.genus());
    if (r.h1 < 0) throw std::logic_error(c.name() + ": Riemann-Roch gives negative h1");
    r.route.push_back({"Riemann-Roch", "h0 - h1 = " + std::to_string(c.degree(l) + 1 - c.genus())});
    return r;
}

} // namespace schur
