#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <schur/surface.hpp>

#include <random>

using namespace schur;
using testsupport::fixtures;

namespace {

const Scenario& z3() {
    static const Scenario sc = find_scenario(testsupport::source_dir() / "scenarios", "z2_3");
    return sc;
}
const Scenario& z4() {
    static const Scenario sc = find_scenario(testsupport::source_dir() / "scenarios", "z2_4");
    return sc;
}

CohomologyResult dims(std::int64_t h0, std::int64_t h1) {
    CohomologyResult r;
    r.h0 = h0;
    r.h1 = h1;
    return r;
}

const PairReport& pair(const SequenceReport& r, std::size_t i, std::size_t j) {
    for (const auto& p : r.pairs)
        if (p.i == i && p.j == j) return p;
    throw std::logic_error("missing pair");
}

std::array<std::int64_t, 3> totals(const PairReport& p) {
    return {p.total[0].value_or(-1), p.total[1].value_or(-1), p.total[2].value_or(-1)};
}

} // namespace

TEST_CASE("numerical invariants agree with the Euler number of the quotient") {
    for (const Scenario* sc : {&z3(), &z4()}) {
        auto inv = surface_invariants(*sc);
        // A free quotient has e(S) = e(C) e(D) / |G|.
        std::int64_t e = std::int64_t(2 - 2 * inv.genus_c) * (2 - 2 * inv.genus_d) / inv.group_order;
        CHECK(inv.euler_number == e);
        CHECK(12 * inv.chi == inv.k_squared + inv.euler_number);
        CHECK(inv.free_action);
        CHECK(inv.irregularity == 0);
        CHECK(inv.geometric_genus == 0);
        CHECK(inv.chi == 1);
        CHECK(inv.k_squared == 8);
        CHECK(inv.b2 == 2);
    }
}

TEST_CASE("free action matches a fixed point count") {
    for (const Scenario* sc : {&z3(), &z4()}) {
        auto fixes = [](const CurveModel& c, std::uint32_t g) {
            std::int64_t n = 0;
            for (std::size_t p = 0; p < c.point_count(); ++p)
                if (c.point_index(c.fiber_of(p), c.rep_of(p) ^ g) == p && c.stabilizers()[c.fiber_of(p)] != 0) ++n;
            return n;
        };
        bool free = true;
        for (std::uint32_t g = 1; g < sc->group.order(); ++g) free = free && (fixes(*sc->c, g) == 0 || fixes(*sc->d, g) == 0);
        CHECK(free == surface_invariants(*sc).free_action);
    }
    auto bad = parse_scenario(R"({"name": "bad", "group_rank": 2,
      "curves": {"C": {"stabilizers": ["e1", "e2", "e1+e2", "e1", "e1"]},
                 "D": {"stabilizers": ["e1", "e2", "e1+e2", "e2", "e2"]}},
      "bundles": {}, "sequences": {"s": {"members": [{"C": "0", "D": "0"}]}}})");
    auto inv = surface_invariants(bad);
    CHECK_FALSE(inv.free_action);
    CHECK(inv.shared_stabilizers.size() == 3);
    CHECK_THROWS_AS(verify_exceptional_sequence(bad, bad.sequence("s"), CharacterMode::Symbolic), std::invalid_argument);
}

TEST_CASE("K-theory rank and torsion") {
    auto k3 = k_theory(z3());
    CHECK(k3.rank == 4);
    CHECK(k3.torsion_label() == "(Z/2)^4 + (Z/4)^2");
    auto k4 = k_theory(z4());
    CHECK(k4.rank == 4);
    CHECK(k4.torsion_label() == "(Z/4)^4");
    CHECK(KTheory{}.torsion_label() == "0");
}

TEST_CASE("descent of box products") {
    // kappa_C alone does not descend; its cocycle is not symmetric.
    auto k = descent_check(z3(), z3().bundle("kappa_C").expr, DivisorExpr{});
    CHECK_FALSE(k.descends);
    REQUIRE(k.asymmetry);
    CHECK_FALSE(k.witness);
    auto [g, h] = *k.asymmetry;
    CHECK(k.cocycle.exponent(g, h) != k.cocycle.exponent(h, g));

    for (const Scenario* sc : {&z3(), &z4()})
        for (const auto& seq : sc->sequences)
            for (const auto& m : seq.members) {
                auto r = descent_check(*sc, m.c, m.d);
                CAPTURE(m.c_text);
                CHECK(r.descends);
                REQUIRE(r.witness);
                CHECK(differing_cells(delta(*r.witness), r.cocycle).empty());
            }
}

TEST_CASE("member cocycles match their fixtures") {
    for (const Scenario* sc : {&z3(), &z4()}) {
        auto r = verify_exceptional_sequence(*sc, sc->sequence("main"), CharacterMode::Symbolic);
        attach_fixture_matches(r, fixtures());
        int linked = 0;
        for (const auto& m : r.members)
            if (m.fixture) {
                ++linked;
                CHECK(m.fixture_matches == std::optional<bool>(true));
            } else {
                CHECK_FALSE(m.fixture_matches);
            }
        CHECK(linked == (sc == &z3() ? 1 : 2));
    }
}

TEST_CASE("Kunneth dimensions") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(0, 9);
    for (int t = 0; t < 200; ++t) {
        std::int64_t a0 = d(rng), a1 = d(rng), b0 = d(rng), b1 = d(rng);
        auto k = kunneth_dims(dims(a0, a1), dims(b0, b1));
        CHECK(k[0] == a0 * b0);
        CHECK(k[1] == a0 * b1 + a1 * b0);
        CHECK(k[2] == a1 * b1);
    }
    // An unknown factor only matters where the other factor is nonzero.
    auto z = kunneth_dims(dims(0, 0), std::nullopt);
    for (const auto& x : z) CHECK(x == std::optional<std::int64_t>(0));
    auto half = kunneth_dims(dims(0, 3), std::nullopt);
    CHECK(half[0] == std::optional<std::int64_t>(0));
    CHECK_FALSE(half[1]);
    CHECK_FALSE(half[2]);
    CHECK(dims_string(half) == "(0,?,?)");
}

TEST_CASE("invariant verdicts from total dimensions") {
    KunnethDims zero{0, 0, 0}, mid{0, 8, 8}, small{0, 3, 3}, big{0, 16, 16}, unknown{0, std::nullopt, std::nullopt};
    for (auto s : {CharState::Trivial, CharState::ConcreteNontrivial, CharState::Symbolic})
        for (const auto& v : invariant_dims(zero, s, false, 16)) CHECK(v.kind == VerdictKind::Vanishes);

    auto sym = invariant_dims(mid, CharState::Symbolic, false, 16);
    CHECK(sym[0].kind == VerdictKind::Vanishes);
    CHECK(sym[1].kind == VerdictKind::ExistsByCount);
    CHECK(sym[1].value == 8);
    CHECK(sym[2].value == 8);
    CHECK(invariant_dims(small, CharState::Symbolic, false, 16)[2].value == 13);
    CHECK(invariant_dims(big, CharState::Symbolic, false, 16)[2].kind == VerdictKind::Undecided);
    CHECK(invariant_dims(mid, CharState::ConcreteNontrivial, false, 16)[1].kind == VerdictKind::Undecided);
    CHECK(invariant_dims(unknown, CharState::Symbolic, false, 16)[2].kind == VerdictKind::Undecided);

    // Structure sheaf pairs.
    KunnethDims o{1, 10, 25};
    auto triv = invariant_dims(o, CharState::Trivial, true, 16);
    CHECK(triv[0].kind == VerdictKind::Nonzero);
    CHECK(triv[0].value == 1);
    CHECK(triv[1].kind == VerdictKind::VanishesInvariant);
    CHECK(triv[2].kind == VerdictKind::VanishesInvariant);
    auto twisted = invariant_dims(o, CharState::ConcreteNontrivial, true, 16);
    CHECK(twisted[0].kind == VerdictKind::VanishesInvariant);
    CHECK(twisted[2].kind == VerdictKind::Undecided);
    auto symbolic = invariant_dims(o, CharState::Symbolic, true, 16);
    CHECK(symbolic[0].kind == VerdictKind::ExistsByCount);
    CHECK(symbolic[0].value == 15);
}

TEST_CASE("joint existence agrees with a brute-force search") {
    // Random conditions on two or three symbols over (Z/2)^2. When the bound
    // says characters exist, an explicit search must find them for random
    // excluded sets of the stated sizes.
    std::mt19937 rng(11);
    const std::int64_t order = 4;
    int certified = 0;
    for (int t = 0; t < 300; ++t) {
        std::size_t ns = 2 + rng() % 2;
        std::vector<std::string> names;
        for (std::size_t s = 0; s < ns; ++s) names.push_back("x" + std::to_string(s));
        std::vector<ExistenceCondition> conds;
        std::vector<std::set<std::uint32_t>> excluded;
        std::size_t nc = 1 + rng() % 3;
        for (std::size_t c = 0; c < nc; ++c) {
            ExistenceCondition e;
            e.chi.symbols = 1 + rng() % ((1u << ns) - 1);
            e.chi.constant = rng() % order;
            e.excluded = 1 + rng() % 2;
            std::set<std::uint32_t> bad;
            while (std::int64_t(bad.size()) < e.excluded) bad.insert(rng() % order);
            conds.push_back(e);
            excluded.push_back(bad);
        }
        std::string summary;
        bool claimed = joint_existence(conds, names, order, summary);
        CHECK_FALSE(summary.empty());
        if (!claimed) continue;
        ++certified;
        bool found = false;
        std::int64_t total = 1;
        for (std::size_t s = 0; s < ns; ++s) total *= order;
        for (std::int64_t idx = 0; idx < total && !found; ++idx) {
            std::vector<std::uint32_t> v(ns);
            std::int64_t rest = idx;
            for (auto& x : v) {
                x = std::uint32_t(rest % order);
                rest /= order;
            }
            bool ok = true;
            for (std::size_t c = 0; c < nc && ok; ++c) {
                std::uint32_t value = conds[c].chi.constant;
                for (std::size_t s = 0; s < ns; ++s)
                    if (conds[c].chi.symbols >> s & 1u) value ^= v[s];
                ok = !excluded[c].count(value);
            }
            found = ok;
        }
        CHECK(found);
    }
    CHECK(certified > 50);
}

TEST_CASE("rank 3 sequence is exceptional for every character assignment") {
    const auto& seq = z3().sequence("main");
    auto sym = verify_exceptional_sequence(z3(), seq, CharacterMode::Symbolic);
    CHECK(sym.verdict == SequenceVerdict::Exceptional);
    CHECK(sym.pairs.size() == 6);
    for (const auto& p : sym.pairs) CHECK(totals(p) == std::array<std::int64_t, 3>{0, 0, 0});
    CHECK(sym.maximal);
    CHECK(sym.length == 4);

    auto all = verify_exceptional_sequence(z3(), seq, CharacterMode::All);
    CHECK(all.verdict == SequenceVerdict::Exceptional);
    CHECK(all.assignments_checked == 4096);
    CHECK(all.assignments_exceptional == 4096);
    CHECK_FALSE(all.first_failing_assignment);

    auto conc = verify_exceptional_sequence(z3(), seq, CharacterMode::Concrete, {1, 2, 3, 4});
    CHECK(conc.verdict == SequenceVerdict::Exceptional);
    CHECK(conc.members[2].chi == CharExpr{0, 3});
    CHECK_THROWS_AS(verify_exceptional_sequence(z3(), seq, CharacterMode::Concrete, {1}), std::invalid_argument);
}

TEST_CASE("rank 4 sequence pair bundles") {
    const auto& seq = z4().sequence("main");
    auto r = verify_exceptional_sequence(z4(), seq, CharacterMode::Symbolic);
    using T = std::array<std::int64_t, 3>;
    CHECK(totals(pair(r, 2, 1)) == T{0, 8, 8});
    CHECK(totals(pair(r, 4, 3)) == T{0, 8, 8});
    CHECK(totals(pair(r, 3, 1)) == T{0, 8, 8});
    CHECK(totals(pair(r, 4, 2)) == T{0, 8, 8});
    CHECK(totals(pair(r, 4, 1)) == T{0, 0, 0});
    CHECK(totals(pair(r, 3, 2)) == T{0, 0, 0});
    CHECK(pair(r, 2, 1).c_label == "kappa_C");
    CHECK(pair(r, 2, 1).d_label == "-eta_D");
    CHECK(pair(r, 4, 2).c_label == "-eta_C");
    CHECK(pair(r, 4, 2).d_label == "kappa_D");
    CHECK(pair(r, 2, 1).chi == CharExpr{0b01u, 0});
    CHECK(pair(r, 3, 1).chi == CharExpr{0b10u, 0});
    for (auto [i, j] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{4, 2}, std::pair{4, 3}}) {
        const auto& p = pair(r, std::size_t(i), std::size_t(j));
        CHECK(p.verdicts[0].kind == VerdictKind::Vanishes);
        CHECK(p.verdicts[1].kind == VerdictKind::ExistsByCount);
        CHECK(p.verdicts[2].kind == VerdictKind::ExistsByCount);
        CHECK(p.verdicts[2].value == 8);
    }
    CHECK(r.verdict == SequenceVerdict::ExceptionalByExistence);
    // Identical pair bundles are merged: one condition per symbol.
    REQUIRE(r.existence.size() == 2);
    for (const auto& c : r.existence) {
        CHECK(c.pairs.size() == 2);
        CHECK(c.excluded == 8);
    }
    CHECK(r.existence_summary.find("chi1") != std::string::npos);

    // Concrete characters cannot be decided from total dimensions alone.
    auto all = verify_exceptional_sequence(z4(), seq, CharacterMode::All);
    CHECK(all.assignments_checked == 256);
    CHECK(all.verdict == SequenceVerdict::Undecided);
}

TEST_CASE("a repeated member is detected") {
    for (const Scenario* sc : {&z3(), &z4()}) {
        const auto& seq = sc->sequence("degenerate-repeat");
        for (auto mode : {CharacterMode::Symbolic, CharacterMode::All}) {
            auto r = verify_exceptional_sequence(*sc, seq, mode);
            CHECK(r.verdict == SequenceVerdict::NotExceptional);
            CHECK_FALSE(r.maximal);
            const auto& p = pair(r, 3, 2);
            CHECK(p.structure_sheaf);
            CHECK(p.verdicts[0].kind == VerdictKind::Nonzero);
            REQUIRE_FALSE(r.offending.empty());
            CHECK(r.offending[0].find("Hom(E3, E2[0])") != std::string::npos);
        }
    }
}

TEST_CASE("Ext table and height") {
    auto ext = ext_table(z4(), z4().sequence("main"));
    REQUIRE(ext.size() == 6);
    for (const auto& e : ext) {
        CHECK(e.a < e.b);
        CHECK(e.total[0] == std::optional<std::int64_t>(0));
    }
    CHECK(ext[3].a == 2);
    CHECK(ext[3].b == 3);
    CHECK(ext[3].total[1] == std::optional<std::int64_t>(16));

    for (const Scenario* sc : {&z3(), &z4()}) {
        auto h = height_report(*sc, sc->sequence("main"));
        CHECK(h.forward_hom_free);
        CHECK(h.twisted_hom_free);
        CHECK(h.no_ext1_cycle);
        CHECK(h.failures.empty());
        CHECK(h.bicanonical_genus == 9);
        CHECK(h.pseudoheight_lower_bound == 4);
        CHECK(h.pseudoheight == std::optional<std::int64_t>(4));
        CHECK(h.height == std::optional<std::int64_t>(4));

        auto bad = height_report(*sc, sc->sequence("degenerate-repeat"));
        CHECK_FALSE(bad.forward_hom_free);
        CHECK_FALSE(bad.pseudoheight);
    }
}

TEST_CASE("full report and cited consequences") {
    auto r = full_report(z3(), z3().sequence("main"), CharacterMode::All);
    REQUIRE(r.height);
    CHECK(r.ext_table.size() == 6);
    REQUIRE(r.cited.size() == 5);
    CHECK(r.cited[1].find("(Z/2)^4 + (Z/4)^2") != std::string::npos);
    auto bad = full_report(z3(), z3().sequence("degenerate-repeat"), CharacterMode::Symbolic);
    CHECK_FALSE(bad.height);
    CHECK(bad.cited.empty());
}

TEST_CASE("quasiphantom report needs a maximal exceptional sequence") {
    auto q3 = quasiphantom_report(verify_exceptional_sequence(z3(), z3().sequence("main"), CharacterMode::Symbolic));
    CHECK(q3.k0_label == "(Z/2)^4 + (Z/4)^2");
    auto q4 = quasiphantom_report(verify_exceptional_sequence(z4(), z4().sequence("main"), CharacterMode::Symbolic));
    CHECK(q4.k0_label == "(Z/4)^4");
    CHECK(q4.k0_torsion == std::vector<std::int64_t>{4, 4, 4, 4});
    auto bad = verify_exceptional_sequence(z3(), z3().sequence("degenerate-repeat"), CharacterMode::Symbolic);
    CHECK_THROWS_AS(quasiphantom_report(bad), std::invalid_argument);
    // A verified but short sequence is rejected for not being maximal.
    auto short_seq = z3().sequence("main");
    short_seq.members.resize(3);
    auto r = verify_exceptional_sequence(z3(), short_seq, CharacterMode::Symbolic);
    CHECK(r.verdict == SequenceVerdict::Exceptional);
    CHECK_FALSE(r.maximal);
    CHECK_THROWS_WITH_AS(quasiphantom_report(r), doctest::Contains("not maximal"), std::invalid_argument);
}
