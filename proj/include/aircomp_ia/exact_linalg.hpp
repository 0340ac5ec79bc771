#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "aircomp_ia/dense.hpp"
#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/scalar.hpp"

namespace aircomp_ia {

enum class RankVerdict { FullRank, Deficient, NotRun };

inline const char* rank_verdict_name(RankVerdict v) {
    switch (v) {
        case RankVerdict::FullRank: return "FullRank";
        case RankVerdict::Deficient: return "Deficient";
        default: return "NotRun";
    }
}

namespace detail {

/*
 * Fraction-free (Bareiss) elimination over integers.
 *
 * Rational input rows are first scaled by the LCM of their denominators;
 * that is a nonzero row scaling, so rank and solution sets are unaffected
 * (the right-hand side, when present, is scaled along). Inside the network
 * constructions every entry of a row is a product of powers of the same few
 * base scalars, so those LCMs stay small in practice.
 *
 * The two-term Bareiss recurrence keeps every intermediate an exact minor of
 * the input (exact divisions only, no gcd churn), and the pivot is the
 * largest-bit-length candidate with lowest row index, which is deterministic.
 */
struct IntegerMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;  // main columns; an augmented column may follow
    bool augmented = false;
    std::vector<std::vector<mpz_class>> a;

    mpz_class& at(std::size_t i, std::size_t j) { return a[i][j]; }
};

inline IntegerMatrix clear_denominators(const ColMatrix<Rational>& m, const std::vector<Rational>* rhs) {
    IntegerMatrix w;
    w.rows = static_cast<std::size_t>(m.rows());
    w.cols = static_cast<std::size_t>(m.cols());
    w.augmented = rhs != nullptr;
    const std::size_t width = w.cols + (w.augmented ? 1 : 0);
    w.a.assign(w.rows, std::vector<mpz_class>(width));
    mpz_class lcm, scaled;
    for (std::size_t i = 0; i < w.rows; ++i) {
        lcm = 1;
        for (std::size_t j = 0; j < w.cols; ++j) {
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(static_cast<std::int64_t>(i),
                                                         static_cast<std::int64_t>(j)).get_den_mpz_t());
        }
        if (rhs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), (*rhs)[i].get_den_mpz_t());
        for (std::size_t j = 0; j < w.cols; ++j) {
            const Rational& v = m(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j));
            mpz_divexact(scaled.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
            w.a[i][j] = v.get_num() * scaled;
        }
        if (rhs) {
            const Rational& v = (*rhs)[i];
            mpz_divexact(scaled.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
            w.a[i][w.cols] = v.get_num() * scaled;
        }
    }
    return w;
}

/// Forward Bareiss elimination in place. Returns true when all main columns
/// received a nonzero pivot (full column rank).
inline bool bareiss_forward(IntegerMatrix& w) {
    const std::size_t width = w.cols + (w.augmented ? 1 : 0);
    mpz_class prev(1), tmp;
    for (std::size_t k = 0; k < w.cols; ++k) {
        if (k >= w.rows) return false;
        std::size_t pivot_row = w.rows;
        std::size_t pivot_bits = 0;
        for (std::size_t i = k; i < w.rows; ++i) {
            if (sgn(w.a[i][k]) == 0) continue;
            const std::size_t bits = mpz_sizeinbase(w.a[i][k].get_mpz_t(), 2);
            if (pivot_row == w.rows || bits > pivot_bits) {
                pivot_row = i;
                pivot_bits = bits;
            }
        }
        if (pivot_row == w.rows) return false;  // column k depends on earlier columns
        if (pivot_row != k) std::swap(w.a[pivot_row], w.a[k]);
        for (std::size_t i = k + 1; i < w.rows; ++i) {
            for (std::size_t j = k + 1; j < width; ++j) {
                // w[i][j] = (w[k][k]*w[i][j] - w[i][k]*w[k][j]) / prev, exactly
                tmp = w.a[i][k] * w.a[k][j];
                w.a[i][j] *= w.a[k][k];
                w.a[i][j] -= tmp;
                mpz_divexact(w.a[i][j].get_mpz_t(), w.a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            w.a[i][k] = 0;
        }
        prev = w.a[k][k];
    }
    return true;
}

}  // namespace detail

/// Exact full-column-rank verdict for a square or tall rational matrix.
/// No tolerance is involved; Deficient means a genuine linear dependence.
inline RankVerdict rank_check_exact(const ColMatrix<Rational>& m, std::int64_t max_columns = 256) {
    if (m.cols() > m.rows()) throw DimensionError("matrix must be square or tall for the exact rank check");
    if (m.cols() > max_columns) {
        throw SizeOverflow("matrix exceeds the exact-mode column cap of " + std::to_string(max_columns));
    }
    if (m.cols() == 0) return RankVerdict::FullRank;
    detail::IntegerMatrix w = detail::clear_denominators(m, nullptr);
    return detail::bareiss_forward(w) ? RankVerdict::FullRank : RankVerdict::Deficient;
}

inline bool determinant_is_nonzero(const ColMatrix<Rational>& m) {
    if (m.rows() != m.cols()) throw DimensionError("determinant requires a square matrix");
    return rank_check_exact(m, m.cols()) == RankVerdict::FullRank;
}

/// Exact solve by fraction-free forward elimination plus rational back
/// substitution. Handles square and tall consistent systems; throws
/// RankDeficient on dependence and NumericalFailure when a tall system turns
/// out inconsistent.
inline std::vector<Rational> solve_exact_bareiss(const ColMatrix<Rational>& a, const std::vector<Rational>& rhs) {
    if (static_cast<std::int64_t>(rhs.size()) != a.rows()) {
        throw DimensionError("right-hand side length does not match matrix rows");
    }
    if (a.cols() > a.rows()) throw DimensionError("system must be square or tall");
    detail::IntegerMatrix w = detail::clear_denominators(a, &rhs);
    if (!detail::bareiss_forward(w)) throw RankDeficient("matrix does not have full column rank");

    const std::size_t n = w.cols;
    for (std::size_t i = n; i < w.rows; ++i) {
        if (sgn(w.a[i][n]) != 0) throw NumericalFailure("tall system is inconsistent");
    }

    std::vector<Rational> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Rational acc(w.a[ii][n]);
        for (std::size_t j = ii + 1; j < n; ++j) {
            acc -= Rational(w.a[ii][j]) * x[j];
        }
        x[ii] = acc / Rational(w.a[ii][ii]);
    }
    return x;
}

namespace detail {

/*
 * Dixon p-adic lifting for square systems. The elimination route above is
 * exact but its intermediates are determinant-sized; when the solution itself
 * is small (zero-forcing solutions are scaled sums of a few lattice
 * amplitudes), lifting digit by digit modulo a word prime and reconstructing
 * is orders of magnitude cheaper. Every reconstructed candidate is verified
 * against the integer system before it is returned, so a wrong early
 * acceptance is impossible.
 */

inline constexpr std::uint64_t kLiftPrimes[] = {
    2305843009213693951ull,   // 2^61 - 1
    9223372036854775783ull,   // largest prime below 2^63
    18446744073709551557ull,  // largest prime below 2^64
};

inline mpz_class make_mpz(std::uint64_t v) {
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

struct WordPrimeLu {
    std::uint64_t p = 0;
    std::size_t n = 0;
    std::vector<std::uint64_t> lu;  // row-major, L strictly below diagonal
    std::vector<std::size_t> perm;

    static std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }
    static std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
        // extended Euclid on signed 128-bit intermediates
        __int128 t = 0, new_t = 1;
        __int128 r = static_cast<__int128>(p), new_r = static_cast<__int128>(a);
        while (new_r != 0) {
            const __int128 q = r / new_r;
            const __int128 tmp_t = t - q * new_t;
            t = new_t;
            new_t = tmp_t;
            const __int128 tmp_r = r - q * new_r;
            r = new_r;
            new_r = tmp_r;
        }
        if (t < 0) t += static_cast<__int128>(p);
        return static_cast<std::uint64_t>(t);
    }

    std::uint64_t& at(std::size_t i, std::size_t j) { return lu[i * n + j]; }
    const std::uint64_t& at(std::size_t i, std::size_t j) const { return lu[i * n + j]; }

    /// Returns false when the matrix is singular modulo p.
    bool factor(const IntegerMatrix& w) {
        n = w.cols;
        p = 0;
        for (std::uint64_t candidate : kLiftPrimes) {
            p = candidate;
            lu.assign(n * n, 0);
            perm.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                perm[i] = i;
                for (std::size_t j = 0; j < n; ++j) {
                    at(i, j) = mpz_fdiv_ui(w.a[i][j].get_mpz_t(), p);
                }
            }
            bool singular = false;
            for (std::size_t k = 0; k < n && !singular; ++k) {
                std::size_t pivot = k;
                while (pivot < n && at(pivot, k) == 0) ++pivot;
                if (pivot == n) {
                    singular = true;
                    break;
                }
                if (pivot != k) {
                    for (std::size_t j = 0; j < n; ++j) std::swap(at(pivot, j), at(k, j));
                    std::swap(perm[pivot], perm[k]);
                }
                const std::uint64_t pivot_inv = inv(at(k, k), p);
                for (std::size_t i = k + 1; i < n; ++i) {
                    const std::uint64_t factor = mul(at(i, k), pivot_inv, p);
                    at(i, k) = factor;
                    if (factor == 0) continue;
                    for (std::size_t j = k + 1; j < n; ++j) {
                        const std::uint64_t sub = mul(factor, at(k, j), p);
                        at(i, j) = at(i, j) >= sub ? at(i, j) - sub : at(i, j) + p - sub;
                    }
                }
            }
            if (!singular) return true;
        }
        return false;
    }

    std::vector<std::uint64_t> solve(const std::vector<std::uint64_t>& rhs) const {
        std::vector<std::uint64_t> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = rhs[perm[i]];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const std::uint64_t sub = mul(at(i, j), y[j], p);
                y[i] = y[i] >= sub ? y[i] - sub : y[i] + p - sub;
            }
        }
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t j = ii + 1; j < n; ++j) {
                const std::uint64_t sub = mul(at(ii, j), y[j], p);
                y[ii] = y[ii] >= sub ? y[ii] - sub : y[ii] + p - sub;
            }
            y[ii] = mul(y[ii], inv(at(ii, ii), p), p);
        }
        return y;
    }
};

/// Wang rational reconstruction: value n/d with |n|, d <= sqrt(m/2)
/// congruent to x mod m, if one exists.
inline bool rational_reconstruct(const mpz_class& x, const mpz_class& m, Rational& out) {
    mpz_class bound;
    mpz_sqrt(bound.get_mpz_t(), mpz_class(m / 2).get_mpz_t());
    mpz_class r0 = m, r1 = x % m;
    if (r1 < 0) r1 += m;
    mpz_class s0 = 0, s1 = 1, q, tmp;
    while (r1 > bound) {
        q = r0 / r1;
        tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
    }
    if (sgn(s1) == 0) return false;
    mpz_class num = r1, den = s1;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (den > bound) return false;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1) return false;
    out = Rational(num, den);
    return true;
}

inline bool verify_integer_solution(const IntegerMatrix& w, const std::vector<Rational>& x) {
    // Common denominator keeps the check in integer arithmetic.
    mpz_class lcm(1);
    for (const Rational& v : x) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
    std::vector<mpz_class> scaled(x.size());
    mpz_class factor;
    for (std::size_t j = 0; j < x.size(); ++j) {
        mpz_divexact(factor.get_mpz_t(), lcm.get_mpz_t(), x[j].get_den_mpz_t());
        scaled[j] = x[j].get_num() * factor;
    }
    mpz_class acc, term;
    for (std::size_t i = 0; i < w.rows; ++i) {
        acc = 0;
        for (std::size_t j = 0; j < w.cols; ++j) {
            term = w.a[i][j] * scaled[j];
            acc += term;
        }
        if (acc != w.a[i][w.cols] * lcm) return false;
    }
    return true;
}

}  // namespace detail

/// Exact solve of a square (or tall, consistent) full-column-rank system.
/// Square systems go through verified p-adic lifting with the elimination
/// route as fallback; tall systems use the elimination route directly.
inline std::vector<Rational> solve_exact(const ColMatrix<Rational>& a, const std::vector<Rational>& rhs) {
    if (static_cast<std::int64_t>(rhs.size()) != a.rows()) {
        throw DimensionError("right-hand side length does not match matrix rows");
    }
    if (a.cols() > a.rows()) throw DimensionError("system must be square or tall");
    if (a.rows() != a.cols() || a.cols() == 0) return solve_exact_bareiss(a, rhs);

    detail::IntegerMatrix w = detail::clear_denominators(a, &rhs);
    detail::WordPrimeLu lu;
    if (!lu.factor(w)) {
        // Singular modulo every lifting prime: decide exactly.
        return solve_exact_bareiss(a, rhs);
    }

    const std::size_t n = w.cols;
    const mpz_class prime = detail::make_mpz(lu.p);

    // Iteration budget from the Hadamard bound: numerator and denominator of
    // any Cramer solution fit in prod_i |row_i|, so p^m past twice that bound
    // guarantees reconstruction succeeds if it ever will.
    double hadamard_bits = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row_bits = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const std::size_t bits = mpz_sizeinbase(w.a[i][j].get_mpz_t(), 2);
            row_bits = std::max(row_bits, static_cast<double>(bits));
        }
        hadamard_bits += row_bits + 1.0;
    }
    const auto max_iterations =
        static_cast<std::size_t>((2.0 * hadamard_bits + 128.0) / 61.0) + 4;

    std::vector<mpz_class> residual(n), lifted(n, mpz_class(0));
    for (std::size_t i = 0; i < n; ++i) residual[i] = w.a[i][n];
    mpz_class modulus(1);
    std::vector<std::uint64_t> digit_rhs(n);
    std::vector<Rational> candidate(n);
    std::size_t next_attempt = 1;  // geometric schedule keeps attempts cheap

    for (std::size_t iteration = 1; iteration <= max_iterations; ++iteration) {
        for (std::size_t i = 0; i < n; ++i) digit_rhs[i] = mpz_fdiv_ui(residual[i].get_mpz_t(), lu.p);
        const std::vector<std::uint64_t> digit = lu.solve(digit_rhs);
        for (std::size_t i = 0; i < n; ++i) {
            if (digit[i] != 0) lifted[i] += modulus * detail::make_mpz(digit[i]);
        }
        // residual = (residual - A * digit) / p, exactly
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (digit[j] != 0) residual[i] -= w.a[i][j] * detail::make_mpz(digit[j]);
            }
            mpz_divexact(residual[i].get_mpz_t(), residual[i].get_mpz_t(), prime.get_mpz_t());
        }
        modulus *= prime;

        if (iteration < next_attempt && iteration != max_iterations) continue;
        next_attempt = iteration + 1 + iteration / 2;
        bool reconstructed = true;
        for (std::size_t i = 0; i < n && reconstructed; ++i) {
            reconstructed = detail::rational_reconstruct(lifted[i], modulus, candidate[i]);
        }
        if (reconstructed && detail::verify_integer_solution(w, candidate)) {
            return candidate;
        }
    }
    return solve_exact_bareiss(a, rhs);
}

}  // namespace aircomp_ia
