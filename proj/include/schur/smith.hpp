/**
 * @file smith.hpp
 * @brief Exact integer linear algebra: diagonalization over Z/M with transforms,
 *        linear solving modulo M, Smith invariants and lattice membership over Z.
 *
 * The modular routines work on int64 residues in [0, M) and never overflow
 * for M < 2^31. The integer routines are templates and are instantiated with
 * boost::multiprecision::cpp_int, so entry growth during elimination is safe.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace schur {

using BigInt = boost::multiprecision::cpp_int;
using Matrix64 = std::vector<std::vector<std::int64_t>>;

namespace detail {

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
}

/// Extended gcd: returns g and s, t with s*a + t*b = g.
template <class T>
T ext_gcd(const T& a, const T& b, T& s, T& t) {
    T old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
    while (r != 0) {
        T q = old_r / r;
        T tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * cur_s;
        old_s = cur_s;
        cur_s = tmp;
        tmp = old_t - q * cur_t;
        old_t = cur_t;
        cur_t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

/// As ext_gcd, but keeps the pivot a (s = 1, t = 0) whenever a divides b, so
/// a pivot is only replaced by one of strictly smaller absolute value.
template <class T>
T pivot_gcd(const T& a, const T& b, T& s, T& t) {
    if (b % a == 0) {
        s = 1;
        t = 0;
        return a;
    }
    return ext_gcd(a, b, s, t);
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

} // namespace detail

/**
 * Diagonal form over Z/M. After run(): left * A * right = D (mod M), with D
 * diagonal and left, right invertible modulo M.
 */
class ModularDiagonalizer {
public:
    ModularDiagonalizer(Matrix64 a, std::int64_t modulus) : a_(std::move(a)), m_(modulus) {
        if (m_ < 2) throw std::invalid_argument("modulus must be at least 2");
        rows_ = a_.size();
        cols_ = rows_ ? a_[0].size() : 0;
        for (auto& row : a_) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix");
            for (auto& x : row) x = detail::mod(x, m_);
        }
        left_ = identity(rows_);
        right_ = identity(cols_);
        run();
    }

    const Matrix64& diagonal_form() const { return a_; }
    const Matrix64& left() const { return left_; }
    const Matrix64& right() const { return right_; }
    std::size_t rank_bound() const { return std::min(rows_, cols_); }

    /// Solves A x = b (mod M). Free coordinates are set to 0; returns nullopt if inconsistent.
    std::optional<std::vector<std::int64_t>> solve(const std::vector<std::int64_t>& b) const {
        if (b.size() != rows_) throw std::invalid_argument("right-hand side has wrong length");
        std::vector<std::int64_t> c(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::int64_t acc = 0;
            for (std::size_t k = 0; k < rows_; ++k)
                if (left_[i][k]) acc = detail::mod(acc + detail::mulmod(left_[i][k], detail::mod(b[k], m_), m_), m_);
            c[i] = acc;
        }
        std::vector<std::int64_t> y(cols_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::int64_t d = i < cols_ ? a_[i][i] : 0;
            if (d == 0) {
                if (c[i] != 0) return std::nullopt;
                continue;
            }
            std::int64_t s = 0, t = 0;
            std::int64_t g = detail::ext_gcd<std::int64_t>(d, m_, s, t);
            if (c[i] % g != 0) return std::nullopt;
            std::int64_t reduced_m = m_ / g;
            y[i] = detail::mod(detail::mulmod(detail::mod(s, reduced_m), (c[i] / g) % reduced_m, reduced_m), reduced_m);
        }
        std::vector<std::int64_t> x(cols_, 0);
        for (std::size_t i = 0; i < cols_; ++i) {
            std::int64_t acc = 0;
            for (std::size_t k = 0; k < cols_; ++k)
                if (right_[i][k] && y[k]) acc = detail::mod(acc + detail::mulmod(right_[i][k], y[k], m_), m_);
            x[i] = acc;
        }
        return x;
    }

private:
    static Matrix64 identity(std::size_t n) {
        Matrix64 id(n, std::vector<std::int64_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
        return id;
    }

    // Row transform on rows p and q: [rp; rq] <- [[s, t], [u, v]] [rp; rq]
    void row_op(Matrix64& m, std::size_t p, std::size_t q, std::int64_t s, std::int64_t t, std::int64_t u, std::int64_t v) const {
        for (std::size_t j = 0; j < m[p].size(); ++j) {
            std::int64_t x = m[p][j], y = m[q][j];
            if (x == 0 && y == 0) continue;
            m[p][j] = detail::mod(detail::mulmod(s, x, m_) + detail::mulmod(t, y, m_), m_);
            m[q][j] = detail::mod(detail::mulmod(u, x, m_) + detail::mulmod(v, y, m_), m_);
        }
    }

    void col_op(Matrix64& m, std::size_t p, std::size_t q, std::int64_t s, std::int64_t t, std::int64_t u, std::int64_t v) const {
        for (auto& row : m) {
            std::int64_t x = row[p], y = row[q];
            if (x == 0 && y == 0) continue;
            row[p] = detail::mod(detail::mulmod(s, x, m_) + detail::mulmod(t, y, m_), m_);
            row[q] = detail::mod(detail::mulmod(u, x, m_) + detail::mulmod(v, y, m_), m_);
        }
    }

    // Coefficients of a determinant-one transform sending (a, b) to (g, 0).
    void gcd_transform(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t, std::int64_t& u, std::int64_t& v) const {
        std::int64_t g = detail::ext_gcd<std::int64_t>(a, b, s, t);
        u = detail::mod(-(b / g), m_);
        v = detail::mod(a / g, m_);
        s = detail::mod(s, m_);
        t = detail::mod(t, m_);
    }

    void run() {
        std::size_t n = std::min(rows_, cols_);
        for (std::size_t p = 0; p < n; ++p) {
            // Choose any nonzero entry in the remaining block as pivot.
            std::size_t pr = rows_, pc = cols_;
            for (std::size_t i = p; i < rows_ && pr == rows_; ++i)
                for (std::size_t j = p; j < cols_; ++j)
                    if (a_[i][j] != 0) {
                        pr = i;
                        pc = j;
                        break;
                    }
            if (pr == rows_) return;
            if (pr != p) {
                std::swap(a_[pr], a_[p]);
                std::swap(left_[pr], left_[p]);
            }
            if (pc != p) {
                for (auto& row : a_) std::swap(row[pc], row[p]);
                for (auto& row : right_) std::swap(row[pc], row[p]);
            }
            bool dirty = true;
            while (dirty) {
                dirty = false;
                for (std::size_t i = p + 1; i < rows_; ++i) {
                    std::int64_t a = a_[p][p], b = a_[i][p];
                    if (b == 0) continue;
                    std::int64_t s, t, u, v;
                    if (b % a == 0) {
                        s = 1; t = 0; u = detail::mod(-(b / a), m_); v = 1;
                    } else {
                        gcd_transform(a, b, s, t, u, v);
                    }
                    row_op(a_, p, i, s, t, u, v);
                    row_op(left_, p, i, s, t, u, v);
                }
                for (std::size_t j = p + 1; j < cols_; ++j) {
                    std::int64_t a = a_[p][p], b = a_[p][j];
                    if (b == 0) continue;
                    std::int64_t s, t, u, v;
                    if (b % a == 0) {
                        s = 1; t = 0; u = detail::mod(-(b / a), m_); v = 1;
                    } else {
                        gcd_transform(a, b, s, t, u, v);
                        dirty = true;
                    }
                    col_op(a_, p, j, s, t, u, v);
                    col_op(right_, p, j, s, t, u, v);
                }
                if (dirty) {
                    dirty = false;
                    for (std::size_t i = p + 1; i < rows_; ++i) dirty = dirty || a_[i][p] != 0;
                }
            }
        }
    }

    Matrix64 a_;
    std::int64_t m_;
    std::size_t rows_ = 0, cols_ = 0;
    Matrix64 left_, right_;
};

inline std::optional<std::vector<std::int64_t>> solve_mod(const Matrix64& a, const std::vector<std::int64_t>& b, std::int64_t modulus) {
    return ModularDiagonalizer(a, modulus).solve(b);
}

/**
 * Invariant factors of an integer matrix (the nonzero diagonal of its Smith
 * normal form, each dividing the next).
 */
template <class T = BigInt>
std::vector<T> smith_invariants(std::vector<std::vector<T>> a) {
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<T> diag;
    for (std::size_t p = 0; p < std::min(rows, cols); ++p) {
        std::size_t pr = rows, pc = cols;
        for (std::size_t i = p; i < rows && pr == rows; ++i)
            for (std::size_t j = p; j < cols; ++j)
                if (a[i][j] != 0) {
                    pr = i;
                    pc = j;
                    break;
                }
        if (pr == rows) break;
        std::swap(a[pr], a[p]);
        if (pc != p)
            for (auto& row : a) std::swap(row[pc], row[p]);
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t i = p + 1; i < rows; ++i) {
                if (a[i][p] == 0) continue;
                T s, t;
                T g = detail::pivot_gcd<T>(a[p][p], a[i][p], s, t);
                T u = -(a[i][p] / g), v = a[p][p] / g;
                for (std::size_t j = p; j < cols; ++j) {
                    T x = a[p][j], y = a[i][j];
                    a[p][j] = s * x + t * y;
                    a[i][j] = u * x + v * y;
                }
            }
            for (std::size_t j = p + 1; j < cols; ++j) {
                if (a[p][j] == 0) continue;
                T s, t;
                T g = detail::pivot_gcd<T>(a[p][p], a[p][j], s, t);
                T u = -(a[p][j] / g), v = a[p][p] / g;
                for (std::size_t i = p; i < rows; ++i) {
                    T x = a[i][p], y = a[i][j];
                    a[i][p] = s * x + t * y;
                    a[i][j] = u * x + v * y;
                }
                dirty = true;
            }
            if (dirty) {
                dirty = false;
                for (std::size_t i = p + 1; i < rows; ++i) dirty = dirty || a[i][p] != 0;
            }
        }
        diag.push_back(a[p][p] < 0 ? T(-a[p][p]) : a[p][p]);
    }
    // Enforce the divisibility chain.
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j) {
            T s, t;
            T g = detail::ext_gcd<T>(diag[i], diag[j], s, t);
            T l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l < 0 ? T(-l) : l;
        }
    return diag;
}

namespace detail {

struct Overflow : std::overflow_error {
    Overflow() : std::overflow_error("int64 overflow in lattice reduction") {}
};

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow();
    return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow();
    return r;
}
inline BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt checked_add(const BigInt& a, const BigInt& b) { return a + b; }

/// Row echelon form over Z (pivots positive, entries above pivots reduced).
template <class T>
std::vector<std::vector<T>> hermite_rows(std::vector<std::vector<T>> work, std::size_t dim) {
    auto leading = [dim](const std::vector<T>& v) {
        for (std::size_t j = 0; j < dim; ++j)
            if (v[j] != 0) return j;
        return dim;
    };
    std::vector<std::vector<T>> out;
    for (std::size_t c = 0; c < dim && !work.empty(); ++c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < work.size(); ++i)
            if (work[i][c] != 0) idx.push_back(i);
        if (idx.empty()) continue;
        std::vector<T> pivot = work[idx[0]];
        std::vector<std::vector<T>> rest;
        for (std::size_t k = 1; k < idx.size(); ++k) {
            auto& other = work[idx[k]];
            T s, t;
            T g = ext_gcd<T>(pivot[c], other[c], s, t);
            T u = -(other[c] / g), v = pivot[c] / g;
            std::vector<T> np(dim), no(dim);
            for (std::size_t j = c; j < dim; ++j) {
                np[j] = checked_add(checked_mul(s, pivot[j]), checked_mul(t, other[j]));
                no[j] = checked_add(checked_mul(u, pivot[j]), checked_mul(v, other[j]));
            }
            pivot = std::move(np);
            bool zero = true;
            for (auto& x : no) zero = zero && x == 0;
            if (!zero) rest.push_back(std::move(no));
        }
        for (std::size_t i = 0; i < work.size(); ++i)
            if (work[i][c] == 0) rest.push_back(std::move(work[i]));
        if (pivot[c] < 0)
            for (auto& x : pivot) x = -x;
        out.push_back(std::move(pivot));
        work = std::move(rest);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t c = leading(out[i]);
        for (std::size_t k = 0; k < i; ++k) {
            T q = out[k][c] / out[i][c];
            if (out[k][c] - q * out[i][c] < 0) q -= 1;
            if (q != 0)
                for (std::size_t j = c; j < dim; ++j) out[k][j] = checked_add(out[k][j], -checked_mul(q, out[i][j]));
        }
    }
    return out;
}

} // namespace detail

/**
 * A sublattice of Z^n given by generating rows, kept in Hermite normal form
 * for exact membership tests. Reduction runs in int64 with overflow checks
 * and is redone with arbitrary precision if an intermediate overflows.
 */
class IntegerLattice {
public:
    IntegerLattice() = default;
    IntegerLattice(std::size_t dim, const std::vector<std::vector<std::int64_t>>& generators) : dim_(dim) {
        for (const auto& g : generators)
            if (g.size() != dim) throw std::invalid_argument("lattice vector has wrong length");
        try {
            auto rows = detail::hermite_rows<std::int64_t>(generators, dim);
            for (auto& r : rows) rows_.emplace_back(r.begin(), r.end());
        } catch (const detail::Overflow&) {
            std::vector<std::vector<BigInt>> big;
            for (const auto& g : generators) big.emplace_back(g.begin(), g.end());
            rows_ = detail::hermite_rows<BigInt>(std::move(big), dim);
        }
    }

    std::size_t dimension() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<std::vector<BigInt>>& basis() const { return rows_; }

    bool contains(const std::vector<std::int64_t>& v) const {
        if (v.size() != dim_) throw std::invalid_argument("lattice vector has wrong length");
        std::vector<BigInt> w(v.begin(), v.end());
        for (const auto& r : rows_) {
            std::size_t c = 0;
            while (r[c] == 0) ++c;
            for (std::size_t j = 0; j < c; ++j)
                if (w[j] != 0) return false;
            if (w[c] == 0) continue;
            if (w[c] % r[c] != 0) return false;
            BigInt q = w[c] / r[c];
            for (std::size_t j = c; j < dim_; ++j) w[j] -= q * r[j];
        }
        for (const auto& x : w)
            if (x != 0) return false;
        return true;
    }

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<BigInt>> rows_;
};

} // namespace schur
