// Shared helpers for the test executables.
#pragma once

#include <schur/fixtures.hpp>

#include <filesystem>
#include <random>
#include <string>

namespace testsupport {

inline std::filesystem::path source_dir() { return std::filesystem::path(SCHUR_SOURCE_DIR); }
inline std::filesystem::path fixture_dir() { return source_dir() / "fixtures"; }

inline const schur::FixtureSet& fixtures() {
    static const schur::FixtureSet fs = schur::load_fixtures(fixture_dir());
    return fs;
}

/// A +-1 table on (Z/2)^r with -1 exactly at the listed cells.
inline schur::TwoCochain sign_table(unsigned rank, std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> minus) {
    schur::TwoCochain t(schur::GroupSpec(rank), 2);
    for (auto [g, h] : minus) t.set_exponent(g, h, 1);
    return t;
}

/// Random normalized mu_n 1-cochain.
inline schur::OneCochain random_cochain(schur::GroupSpec g, std::uint32_t n, std::mt19937& rng) {
    schur::OneCochain t(g, n);
    std::uniform_int_distribution<std::uint32_t> d(0, n - 1);
    for (std::uint32_t x = 1; x < g.order(); ++x) t.set_exponent(x, d(rng));
    return t;
}

/// Direct symmetry scan, written independently of the pairing.
inline bool symmetric(const schur::TwoCochain& a) {
    for (std::uint32_t g = 0; g < a.size(); ++g)
        for (std::uint32_t h = 0; h < a.size(); ++h)
            if (!(a.at(g, h) == a.at(h, g))) return false;
    return true;
}

/// The +-1 bilinear form on T x N with matrix entry (i, j) at bit i * n_rank + j.
inline std::vector<std::vector<schur::RootOfUnity>> bilinear_sign(unsigned t_rank, unsigned n_rank, std::uint32_t matrix_bits) {
    std::vector<std::vector<schur::RootOfUnity>> out(1u << t_rank, std::vector<schur::RootOfUnity>(1u << n_rank));
    for (std::uint32_t t = 0; t < (1u << t_rank); ++t)
        for (std::uint32_t n = 0; n < (1u << n_rank); ++n) {
            int parity = 0;
            for (unsigned i = 0; i < t_rank; ++i)
                for (unsigned j = 0; j < n_rank; ++j)
                    if ((t >> i & 1u) && (n >> j & 1u) && (matrix_bits >> (i * n_rank + j) & 1u)) parity ^= 1;
            out[t][n] = schur::RootOfUnity(2, parity);
        }
    return out;
}

} // namespace testsupport
