#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "klein/errors.hpp"

namespace klein {

using Int = mpz_class;
using Rat = mpq_class;

inline Int isqrt_floor(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const Int& n, Int* root = nullptr) {
    if (n < 0) return false;
    Int r = isqrt_floor(n);
    if (r * r == n) {
        if (root) *root = r;
        return true;
    }
    return false;
}

/// floor of the b-th root.
inline Int iroot_floor(const Int& n, unsigned long b) {
    Int r;
    mpz_root(r.get_mpz_t(), n.get_mpz_t(), b);
    return r;
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

/// Floor division (rounds toward -infinity).
inline Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int mod_floor(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool divides(const Int& d, const Int& a) {
    if (d == 0) return a == 0;
    return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Int divexact(const Int& a, const Int& d) {
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    return q;
}

inline Int pow_int(const Int& a, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

inline Int abs_int(const Int& a) { return a >= 0 ? a : Int(-a); }

inline Rat abs_rat(const Rat& a) { return a >= 0 ? a : Rat(-a); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Rat make_rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p" or "p/q"; exact, arbitrary precision.
inline Rat parse_rat(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) fail(ErrorCode::BadInput, "cannot parse rational '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rat& q) {
    return q.get_str();
}

inline bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

/// Primes up to and including `bound`, by sieve.
std::vector<long> primes_up_to(long bound);

/// Trial-division factorization of |n| as (prime, exponent) pairs, ascending.
std::vector<std::pair<Int, int>> factorize(const Int& n);

bool is_squarefree(const Int& n);

/// Kronecker symbol (a|n).
inline int kronecker(const Int& a, const Int& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

// ---------------------------------------------------------------------------
// Integer matrices and Hermite normal form. Matrices are stored row-major;
// the HNF here is the column-style one (column operations only), used for
// Z-lattices whose generators are given as columns.

struct IntMat {
    int rows = 0, cols = 0;
    std::vector<Int> a;

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

/// In-place column HNF: column operations reduce M to lower "staircase" form
/// with non-negative pivots and entries right of a pivot reduced mod it.
/// Zero columns are moved to the end and dropped. If `transform` is non-null
/// it receives a square unimodular U with M_in * U = [H | 0].
void column_hnf(IntMat& m, IntMat* transform = nullptr);

/// Z-kernel of M (columns x of M x = 0), returned as columns of a basis.
/// The kernel of an integer matrix is saturated by construction.
IntMat integer_kernel(const IntMat& m);

/// True if v lies in the Z-span of the columns of H, where H is a column HNF.
bool in_column_span(const IntMat& h, const std::vector<Int>& v);

/// Solves H x = v over Z for H in column HNF form. Returns std::nullopt if no
/// integral solution exists.
std::optional<std::vector<Int>> solve_column_hnf(const IntMat& h, const std::vector<Int>& v);

} // namespace klein
