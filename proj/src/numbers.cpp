#include "klein/numbers.hpp"

#include <algorithm>

namespace klein {

std::vector<long> primes_up_to(long bound) {
    std::vector<long> out;
    if (bound < 2) return out;
    std::vector<bool> sieve(static_cast<size_t>(bound) + 1, true);
    sieve[0] = sieve[1] = false;
    for (long p = 2; p * p <= bound; ++p)
        if (sieve[static_cast<size_t>(p)])
            for (long q = p * p; q <= bound; q += p) sieve[static_cast<size_t>(q)] = false;
    for (long p = 2; p <= bound; ++p)
        if (sieve[static_cast<size_t>(p)]) out.push_back(p);
    return out;
}

std::vector<std::pair<Int, int>> factorize(const Int& n) {
    std::vector<std::pair<Int, int>> out;
    Int m = abs_int(n);
    if (m <= 1) return out;
    for (Int p = 2; p * p <= m;) {
        if (divides(p, m)) {
            int e = 0;
            while (divides(p, m)) {
                m = divexact(m, p);
                ++e;
            }
            out.emplace_back(p, e);
        }
        p += (p == 2) ? 1 : 2;
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

bool is_squarefree(const Int& n) {
    if (n == 0) return false;
    for (const auto& [p, e] : factorize(n))
        if (e >= 2) return false;
    return true;
}

void column_hnf(IntMat& m, IntMat* transform) {
    const int rows = m.rows, cols = m.cols;
    if (transform) {
        *transform = IntMat(cols, cols);
        for (int i = 0; i < cols; ++i) transform->at(i, i) = 1;
    }
    auto colswap = [&](int j, int k) {
        if (j == k) return;
        for (int i = 0; i < rows; ++i) std::swap(m.at(i, j), m.at(i, k));
        if (transform)
            for (int i = 0; i < cols; ++i) std::swap(transform->at(i, j), transform->at(i, k));
    };
    // col_k += q * col_j
    auto coladd = [&](int k, int j, const Int& q) {
        if (q == 0) return;
        for (int i = 0; i < rows; ++i) m.at(i, k) += q * m.at(i, j);
        if (transform)
            for (int i = 0; i < cols; ++i) transform->at(i, k) += q * transform->at(i, j);
    };
    auto colneg = [&](int j) {
        for (int i = 0; i < rows; ++i) m.at(i, j) = -m.at(i, j);
        if (transform)
            for (int i = 0; i < cols; ++i) transform->at(i, j) = -transform->at(i, j);
    };

    int pivot_col = 0;
    for (int row = 0; row < rows && pivot_col < cols; ++row) {
        // Euclidean elimination across columns pivot_col..cols-1 on this row.
        while (true) {
            int nz = -1;
            for (int j = pivot_col; j < cols; ++j)
                if (m.at(row, j) != 0) {
                    if (nz == -1 || abs_int(m.at(row, j)) < abs_int(m.at(row, nz))) nz = j;
                }
            if (nz == -1) break; // row is zero from pivot_col on
            colswap(pivot_col, nz);
            bool cleared = true;
            for (int j = pivot_col + 1; j < cols; ++j) {
                if (m.at(row, j) == 0) continue;
                Int q = fdiv(m.at(row, j), m.at(row, pivot_col));
                coladd(j, pivot_col, -q);
                if (m.at(row, j) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (pivot_col < cols && m.at(row, pivot_col) != 0) {
            if (m.at(row, pivot_col) < 0) colneg(pivot_col);
            // Reduce the entries to the LEFT of the pivot in this row.
            for (int j = 0; j < pivot_col; ++j) {
                Int q = fdiv(m.at(row, j), m.at(row, pivot_col));
                coladd(j, pivot_col, -q);
            }
            ++pivot_col;
        }
    }
}

IntMat integer_kernel(const IntMat& m) {
    IntMat h = m, u;
    column_hnf(h, &u);
    // Kernel basis: columns of u whose image column in h is zero.
    std::vector<int> zero_cols;
    for (int j = 0; j < h.cols; ++j) {
        bool z = true;
        for (int i = 0; i < h.rows && z; ++i)
            if (h.at(i, j) != 0) z = false;
        if (z) zero_cols.push_back(j);
    }
    IntMat k(m.cols, static_cast<int>(zero_cols.size()));
    for (size_t t = 0; t < zero_cols.size(); ++t)
        for (int i = 0; i < m.cols; ++i) k.at(i, static_cast<int>(t)) = u.at(i, zero_cols[t]);
    return k;
}

std::optional<std::vector<Int>> solve_column_hnf(const IntMat& h, const std::vector<Int>& v) {
    std::vector<Int> rem = v;
    std::vector<Int> x(static_cast<size_t>(h.cols), Int(0));
    int j = 0;
    for (int i = 0; i < h.rows; ++i) {
        if (j < h.cols && h.at(i, j) != 0) {
            if (!divides(h.at(i, j), rem[static_cast<size_t>(i)])) return std::nullopt;
            Int q = divexact(rem[static_cast<size_t>(i)], h.at(i, j));
            for (int r = 0; r < h.rows; ++r) rem[static_cast<size_t>(r)] -= q * h.at(r, j);
            x[static_cast<size_t>(j)] = q;
            ++j;
        } else if (rem[static_cast<size_t>(i)] != 0) {
            return std::nullopt;
        }
    }
    for (int i = 0; i < h.rows; ++i)
        if (rem[static_cast<size_t>(i)] != 0) return std::nullopt;
    return x;
}

bool in_column_span(const IntMat& h, const std::vector<Int>& v) {
    return solve_column_hnf(h, v).has_value();
}

} // namespace klein
