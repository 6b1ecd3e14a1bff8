#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <schur/curve.hpp>

using namespace schur;
using testsupport::fixtures;

namespace {

std::uint32_t el(unsigned rank, const std::string& s) { return parse_bits(GroupSpec(rank), s); }

std::vector<std::uint32_t> stabs(unsigned rank, std::initializer_list<const char*> names) {
    std::vector<std::uint32_t> out;
    for (auto n : names) out.push_back(el(rank, n));
    return out;
}

// (Z/2)^3 pair.
const CurveModel& c3() {
    static const CurveModel c("C", GroupSpec(3), stabs(3, {"e1", "e2", "e3", "e1", "e2+e3"}), "E");
    return c;
}
const CurveModel& d3() {
    static const CurveModel d("D", GroupSpec(3), stabs(3, {"e1+e2", "e1+e3", "e1+e2+e3", "e1+e2", "e1+e3", "e1+e2+e3"}), "F");
    return d;
}

// (Z/2)^4 pair, e = e1+e2+e3+e4.
const CurveModel& c4() {
    static const CurveModel c("C", GroupSpec(4), stabs(4, {"e1", "e2", "e3", "e4", "e1+e2+e3+e4"}), "E");
    return c;
}
const CurveModel& d4() {
    static const CurveModel d("D", GroupSpec(4), stabs(4, {"e2+e3+e4", "e1+e3+e4", "e1+e3", "e2+e4", "e3+e4"}), "F");
    return d;
}

std::uint32_t e4(const std::string& s) { return el(4, s); }
const std::uint32_t E = 0xF;

DivisorExpr kappa_c3() {
    return DivisorExpr(PullbackPoint{{el(3, "e1")}, 1, 0, -1, el(3, "e3")}) + DivisorExpr(WholeFiber{0});
}
DivisorExpr eta_d3() {
    return DivisorExpr(half_fiber_pair(d3(), el(3, "e1+e2"), el(3, "e1+e3"), el(3, "e1+e2+e3"))) +
           DivisorExpr(half_fiber_pair(d3(), el(3, "e1+e3"), el(3, "e1+e2+e3"), el(3, "e1+e2"))) +
           DivisorExpr(half_fiber_pair(d3(), el(3, "e1+e2+e3"), el(3, "e1+e3"), el(3, "e1+e2")));
}
DivisorExpr m_d3() { return DivisorExpr(WholeFiber{0}) + DivisorExpr(WholeFiber{1}) - DivisorExpr(WholeFiber{2}); }

DivisorExpr kappa_c4() { return DivisorExpr(pullback_atom(c4(), e4("e2"), e4("e4"), e4("e3"), e4("e1"))); }
DivisorExpr eta_c4() {
    return DivisorExpr(pullback_atom(c4(), e4("e1"), e4("e2"), E, e4("e3"))) -
           DivisorExpr(pullback_atom(c4(), e4("e2"), E, e4("e4"), e4("e1")));
}
DivisorExpr kappa_d4() { return DivisorExpr(pullback_atom(d4(), E ^ 1u, e4("e3+e4"), e4("e2+e4"), e4("e1+e3"))); }
DivisorExpr eta_d4() {
    return DivisorExpr(pullback_atom(d4(), e4("e1+e3"), e4("e2+e4"), E ^ 1u, E ^ 2u)) -
           DivisorExpr(pullback_atom(d4(), E ^ 2u, e4("e2+e4"), e4("e1+e3"), e4("e3+e4")));
}

/// Riemann-Hurwitz for a double quotient, counting fixed points directly.
int double_quotient_genus(const CurveModel& c, std::uint32_t sigma) {
    std::size_t fixed = 0;
    for (std::size_t p = 0; p < c.point_count(); ++p)
        if (c.point_index(std::size_t(c.fiber_of(p)), c.rep_of(p) ^ sigma) == p) ++fixed;
    int twice = (2 * c.genus() - 2 - int(fixed)) / 2 + 2;
    return twice / 2;
}

} // namespace

TEST_CASE("genera from branch data") {
    CHECK(c3().genus() == 3);
    CHECK(d3().genus() == 5);
    CHECK(c4().genus() == 5);
    CHECK(d4().genus() == 5);
    CHECK(c3().point_count() == 5 * 4);
    CHECK(c4().point_count() == 5 * 8);
}

TEST_CASE("invalid branch data is rejected") {
    CHECK_THROWS_AS(CurveModel("X", GroupSpec(2), {1, 2}), std::invalid_argument);        // sum is not 0
    CHECK_THROWS_AS(CurveModel("X", GroupSpec(2), {1, 1}), std::invalid_argument);        // does not generate
    CHECK_THROWS_AS(CurveModel("X", GroupSpec(2), {1, 2, 3, 0}), std::invalid_argument);  // unramified fiber
    CHECK_NOTHROW(CurveModel("X", GroupSpec(2), {1, 2, 3, 0}, "E", true));
}

TEST_CASE("quotient genera agree with a fixed-point count") {
    for (const CurveModel* c : {&c3(), &d3(), &c4(), &d4()})
        for (std::uint32_t s = 1; s < c->group().order(); ++s) {
            CAPTURE(c->name());
            CAPTURE(s);
            CHECK(c->quotient_genus({0, s}) == double_quotient_genus(*c, s));
            CHECK(c->quotient(s)->genus() == double_quotient_genus(*c, s));
        }
    CHECK(c3().quotient(el(3, "e1"))->genus() == 0);
    CHECK(c4().quotient(e4("e2"))->genus() == 1);
    CHECK(d4().quotient(e4("e3+e4"))->genus() == 1);
    CHECK(d4().quotient(e4("e2+e4"))->genus() == 1);
    CHECK(c4().quotient_genus(c4().whole_group()) == 0);
}

TEST_CASE("relations all have degree 0 and include the canonical identities") {
    for (const CurveModel* c : {&c3(), &d3(), &c4(), &d4()}) {
        std::vector<std::string> labels;
        auto rows = c->relation_generators(&labels);
        CHECK(rows.size() == labels.size());
        for (const auto& r : rows) CHECK(c->degree(r) == 0);
        CHECK(c->degree(c->canonical_divisor()) == 2 * c->genus() - 2);
    }
}

TEST_CASE("fibers with the same stabilizer are equivalent, others are not") {
    const auto& d = d3();
    CHECK(d.compare_classes(d.fiber(0), d.fiber(3)).relation == ClassRelation::Equal);
    CHECK(d.compare_classes(d.fiber(1), d.fiber(4)).relation == ClassRelation::Equal);
    CHECK(d.compare_classes(d.fiber(0), d.fiber(1)).relation == ClassRelation::Distinct);
    CHECK(d.compare_classes(d.fiber(0), d.generic()).relation == ClassRelation::Distinct);
    CHECK(d.classes_equal(CurveModel::scale(2, d.fiber(2)), d.generic()));
}

TEST_CASE("eta classes are nontrivial 2-torsion") {
    for (auto [c, expr] : {std::pair{&c4(), eta_c4()}, std::pair{&d4(), eta_d4()}, std::pair{&d3(), eta_d3()}}) {
        Divisor eta = evaluate(*c, expr);
        CHECK(c->degree(eta) == 0);
        CHECK(c->compare_classes(eta, c->zero()).relation == ClassRelation::Distinct);
        CHECK(c->compare_classes(CurveModel::scale(2, eta), c->zero()).relation == ClassRelation::Equal);
    }
    // The obstructing involutions.
    CHECK(c4().parity_obstruction(evaluate(c4(), eta_c4())).has_value());
    CHECK(d4().parity_obstruction(evaluate(d4(), eta_d4())).has_value());
}

TEST_CASE("translates of named classes stay in the same class") {
    for (auto [c, expr] : {std::pair{&c3(), kappa_c3()}, std::pair{&c4(), kappa_c4()}, std::pair{&d4(), kappa_d4()},
                           std::pair{&c4(), eta_c4()}, std::pair{&d4(), eta_d4()}, std::pair{&d3(), eta_d3()}}) {
        Divisor l = evaluate(*c, expr);
        for (std::uint32_t g = 1; g < c->group().order(); ++g) CHECK(c->classes_equal(c->translate(g, l), l));
    }
}

TEST_CASE("theta characteristics") {
    CHECK(is_theta_characteristic(c3(), evaluate(c3(), kappa_c3())));
    CHECK(is_theta_characteristic(c4(), evaluate(c4(), kappa_c4())));
    CHECK(is_theta_characteristic(d4(), evaluate(d4(), kappa_d4())));
    CHECK(is_theta_characteristic(c4(), evaluate(c4(), kappa_c4() + eta_c4())));
    CHECK(is_theta_characteristic(d4(), evaluate(d4(), kappa_d4() + eta_d4())));
    CHECK_FALSE(is_theta_characteristic(d4(), evaluate(d4(), eta_d4())));
    CHECK(is_theta_characteristic(d3(), evaluate(d3(), m_d3())));
}

TEST_CASE("census of invariant effective classes on D") {
    auto c4deg = invariant_census(d3(), 4);
    CHECK(c4deg.complete);
    CHECK(c4deg.classes.size() == 3);
    auto c8deg = invariant_census(d3(), 8);
    CHECK(c8deg.complete);
    CHECK(c8deg.classes.size() == 4);
    CHECK(invariant_census(d3(), 3).classes.empty());
    CHECK(invariant_census(d3(), 0).classes.size() == 1);
}

TEST_CASE("ramification class group is (Z/2)^(R-1)") {
    auto inv = c4().ramification_class_group(e4("e2"));
    std::size_t twos = 0;
    for (auto x : inv) twos += x == 2;
    CHECK(twos == c4().ramification_points(e4("e2")).size() - 1);
    CHECK_THROWS_AS(c4().ramification_class_group(e4("e1+e2")), std::invalid_argument);
}

TEST_CASE("descent writes an invariant divisor as a pullback plus ramification") {
    auto desc = c3().descend(evaluate(c3(), kappa_c3()), el(3, "e1"));
    REQUIRE(desc.has_value());
    CHECK(desc->base->genus() == 0);
    CHECK(desc->ramification_size == 8);
    CHECK(desc->e_points.size() == 4);
    CHECK(desc->base->degree(desc->base_divisor) == -1);
    // eta_C has no invariant representative for e2 (its orbits are not e2-stable).
    CHECK(c4().descend(evaluate(c4(), eta_c4()), e4("e1")).has_value() == false);
}

TEST_CASE("cohomology dimensions of the named bundles") {
    const std::vector<DescentHint> c3_hints{{el(3, "e1"), 0}};
    const std::vector<DescentHint> c4_hints{{e4("e2"), 1}};
    const std::vector<DescentHint> d4_hints{{e4("e3+e4"), 1}, {e4("e2+e4"), 1}};

    struct Case {
        const CurveModel* c;
        DivisorExpr l;
        const std::vector<DescentHint>* hints;
        std::int64_t h0, h1;
        const char* what;
    };
    const std::vector<DescentHint> none;
    std::vector<Case> cases{
        {&c3(), kappa_c3(), &c3_hints, 0, 0, "kappa_C (Z/2)^3"},
        {&d3(), m_d3(), &none, 0, 0, "M"},
        {&d3(), -m_d3(), &none, 0, 8, "-M"},
        {&c4(), kappa_c4(), &c4_hints, 2, 2, "kappa_C"},
        {&d4(), kappa_d4(), &d4_hints, 2, 2, "kappa_D"},
        {&c4(), kappa_c4() + eta_c4(), &c4_hints, 2, 2, "kappa_C + eta_C"},
        {&d4(), kappa_d4() + eta_d4(), &d4_hints, 0, 0, "kappa_D + eta_D"},
        {&d4(), kappa_d4() - eta_d4(), &d4_hints, 0, 0, "kappa_D - eta_D"},
        {&c4(), eta_c4(), &none, 0, 4, "eta_C"},
        {&d4(), eta_d4(), &none, 0, 4, "eta_D"},
        {&c4(), -kappa_c4(), &none, 0, 8, "-kappa_C"},
        {&c3(), DivisorExpr(), &none, 1, 3, "O_C"},
    };
    for (const auto& k : cases) {
        CAPTURE(k.what);
        auto r = cohomology_dims(*k.c, evaluate(*k.c, k.l), *k.hints);
        CAPTURE(r.route_summary());
        CHECK(r.h0 == k.h0);
        CHECK(r.h1 == k.h1);
    }
}

TEST_CASE("Serre duality is consistent with independently computed duals") {
    const std::vector<DescentHint> c4_hints{{e4("e2"), 1}};
    Divisor k = c4().canonical_divisor();
    for (auto expr : {kappa_c4(), eta_c4(), kappa_c4() + eta_c4(), -kappa_c4()}) {
        Divisor l = evaluate(c4(), expr);
        auto a = cohomology_dims(c4(), l, c4_hints);
        auto b = cohomology_dims(c4(), CurveModel::subtract(k, l), c4_hints);
        CHECK(a.h1 == b.h0);
        CHECK(a.h0 == b.h1);
    }
}

TEST_CASE("hints with the wrong base type are rejected") {
    std::vector<DescentHint> wrong{{e4("e2"), 0}};
    CHECK_THROWS_AS(cohomology_dims(c4(), evaluate(c4(), kappa_c4()), wrong), std::invalid_argument);
}

TEST_CASE("without hints the theta characteristic kappa_D + eta_D is stuck") {
    CHECK_THROWS_AS(cohomology_dims(d4(), evaluate(d4(), kappa_d4() + eta_d4())), CohomologyStuck);
}

TEST_CASE("atom cocycles reproduce the shipped tables") {
    const auto& fx = fixtures();
    CHECK(expr_cocycle(c3(), kappa_c3()) == fx.table("prop53_kappa"));
    CHECK(atom_cocycle(d3(), half_fiber_pair(d3(), el(3, "e1+e2"), el(3, "e1+e3"), el(3, "e1+e2+e3"))) == fx.table("prop53_eta1"));
    CHECK(atom_cocycle(d3(), half_fiber_pair(d3(), el(3, "e1+e3"), el(3, "e1+e2+e3"), el(3, "e1+e2"))) == fx.table("prop53_eta2"));
    CHECK(atom_cocycle(d3(), half_fiber_pair(d3(), el(3, "e1+e2+e3"), el(3, "e1+e3"), el(3, "e1+e2"))) == fx.table("prop53_eta3"));
    CHECK(expr_cocycle(c4(), kappa_c4()) == fx.table("table1"));
    CHECK(atom_cocycle(c4(), pullback_atom(c4(), e4("e1"), e4("e2"), E, e4("e3"))) == fx.table("table2"));
    CHECK(atom_cocycle(c4(), pullback_atom(c4(), e4("e2"), E, e4("e4"), e4("e1"))) == fx.table("table3"));
    CHECK(expr_cocycle(d4(), kappa_d4()) == fx.table("table4"));
    CHECK(atom_cocycle(d4(), pullback_atom(d4(), e4("e1+e3"), e4("e2+e4"), E ^ 1u, E ^ 2u)) == fx.table("table5"));
    CHECK(atom_cocycle(d4(), pullback_atom(d4(), E ^ 2u, e4("e2+e4"), e4("e1+e3"), e4("e3+e4"))) == fx.table("table6"));
}

TEST_CASE("the default swap element matches the explicit choice for kappa_C") {
    PullbackPoint implicit{{el(3, "e1")}, 1, 0, -1, std::nullopt};
    CHECK(atom_cocycle(c3(), implicit) == fixtures().table("prop53_kappa"));
}

TEST_CASE("malformed atoms are rejected") {
    CHECK_THROWS_AS(atom_divisor(c4(), PullbackPoint{{e4("e1"), e4("e1")}, 0, 0, 1, std::nullopt}), std::invalid_argument);
    CHECK_THROWS_AS(atom_divisor(c4(), PullbackPoint{{e4("e2"), e4("e4")}, 1, 0, 1, std::nullopt}), std::invalid_argument);
    CHECK_THROWS_AS(fiber_with_stabilizer(c4(), e4("e1+e2")), std::invalid_argument);
}
