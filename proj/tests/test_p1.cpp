#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <schur/p1_equivariant.hpp>

using namespace schur;
using testsupport::fixtures;
using testsupport::symmetric;

namespace {
const P1Action sign_swap({P1Behavior::SignFlip, P1Behavior::Swap});
const P1Action swap_sign({P1Behavior::Swap, P1Behavior::SignFlip});

} // namespace

TEST_CASE("the basic structure reproduces the 4x4 table exactly") {
    auto s = default_theta(sign_swap, 1, 0);
    auto a = cocycle_of(s);
    CHECK(a == fixtures().table("basic"));
    // Sign flip fixes the local generator at [1:0]; swap has coefficient 1 on U.
    CHECK(s.at(1, ChartU).coeff.is_one());
    CHECK(s.at(2, ChartU).coeff.is_one());
    CHECK(s.at(2, ChartU).exponent == 1);
    CHECK(s.at(2, ChartV).exponent == -1);
}

TEST_CASE("structure sheaf gives identity maps and the trivial cocycle") {
    auto s = default_theta(sign_swap, 0, 0);
    for (std::uint32_t g = 0; g < 4; ++g)
        for (Chart w : {ChartU, ChartV}) {
            CHECK(s.at(g, w).coeff.is_one());
            CHECK(s.at(g, w).exponent == 0);
        }
    CHECK(cocycle_of(s).is_trivial());
}

TEST_CASE("the invariant divisor [1:0] + [0:1] has a symmetric cocycle") {
    CHECK(symmetric(cocycle_of(default_theta(sign_swap, 1, 1))));
}

TEST_CASE("O(-1) is cohomologous to the inverse of O(1)") {
    auto plus = cocycle_of(default_theta(sign_swap, 1, 0));
    auto minus = cocycle_of(default_theta(sign_swap, -1, 0));
    CHECK(symmetric(multiply(minus, plus)));
    CHECK(cohomologous(minus, inverse(plus)));
}

TEST_CASE("all faithful actions and small divisors give cocycles") {
    std::vector<P1Action> actions{P1Action({P1Behavior::SignFlip}), P1Action({P1Behavior::Swap}), sign_swap, swap_sign};
    for (const auto& act : actions)
        for (int m = -2; m <= 2; ++m)
            for (int mp = -2; mp <= 2; ++mp) {
                auto a = cocycle_of(default_theta(act, m, mp));
                CHECK(is_cocycle(a));
                CHECK(a.normalized());
                // Nontrivial pairing exactly for a rank-2 action and odd total degree.
                bool expect_nontrivial = act.generators.size() == 2 && ((m + mp) % 2 != 0);
                CHECK(pairing(a).all_one() == !expect_nontrivial);
            }
}

TEST_CASE("tensor compatibility at class level") {
    for (int m1 = -2; m1 <= 2; ++m1)
        for (int m2 = -2; m2 <= 2; ++m2)
            for (int p1 = -1; p1 <= 1; ++p1)
                for (int p2 = -1; p2 <= 1; ++p2) {
                    auto a = cocycle_of(default_theta(swap_sign, m1, p1));
                    auto b = cocycle_of(default_theta(swap_sign, m2, p2));
                    auto ab = cocycle_of(default_theta(swap_sign, m1 + m2, p1 + p2));
                    CHECK(pairing(multiply(a, b)) == pairing(ab));
                }
}

TEST_CASE("the sign-flip/swap pair is what makes the pairing nontrivial") {
    auto b = pairing(cocycle_of(default_theta(sign_swap, 1, 0)));
    CHECK(b.at(1, 2) == -1);
    auto b2 = pairing(cocycle_of(default_theta(swap_sign, 1, 0)));
    CHECK(b2.at(1, 2) == -1);
    CHECK(pairing(cocycle_of(default_theta(P1Action({P1Behavior::Swap}), 1, 0))).all_one());
}

TEST_CASE("invalid actions") {
    CHECK_THROWS(P1Action({P1Behavior::Swap, P1Behavior::Swap}));
    CHECK_THROWS(P1Action({P1Behavior::Swap, P1Behavior::SignFlip, P1Behavior::Swap}));
}

TEST_CASE("description lists every element on both charts") {
    auto text = describe(default_theta(sign_swap, 1, 0));
    CHECK(text.find("theta_e1+e2") != std::string::npos);
    CHECK(text.find("V: f -> v^-1") != std::string::npos);
}
