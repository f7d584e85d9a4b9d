#pragma once
// Independent reference implementations used only by tests.

#include "koszulkit/scalars.hpp"

#include <random>
#include <vector>

namespace oracle {

// plain dense Gaussian elimination over Q (mpq) or GF(p) (int64), no pivot strategy
inline int dense_rank_q(std::vector<std::vector<mpq_class>> a) {
    int n = (int)a.size(), m = n ? (int)a[0].size() : 0, r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int p = -1;
        for (int i = r; i < n; ++i)
            if (a[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(a[p], a[r]);
        for (int i = 0; i < n; ++i) {
            if (i == r || a[i][c] == 0) continue;
            mpq_class f = a[i][c] / a[r][c];
            for (int j = c; j < m; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

inline int64_t powmod(int64_t b, int64_t e, int64_t p) {
    int64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline int dense_rank_p(std::vector<std::vector<int64_t>> a, int64_t p) {
    int n = (int)a.size(), m = n ? (int)a[0].size() : 0, r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (a[i][c] % p) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(a[piv], a[r]);
        int64_t inv = powmod(((a[r][c] % p) + p) % p, p - 2, p);
        for (int i = 0; i < n; ++i) {
            if (i == r || a[i][c] % p == 0) continue;
            int64_t f = ((a[i][c] % p + p) % p) * inv % p;
            for (int j = c; j < m; ++j) a[i][j] = ((a[i][j] - f * a[r][j]) % p + p) % p;
        }
        ++r;
    }
    return r;
}

inline int dense_rank(const kk::SparseMatrix& s) {
    auto d = s.dense();
    if (s.field().kind == kk::Field::Rationals) {
        std::vector<std::vector<mpq_class>> a(d.size());
        for (size_t i = 0; i < d.size(); ++i)
            for (auto& x : d[i]) a[i].push_back(x.to_mpq());
        return dense_rank_q(a);
    }
    std::vector<std::vector<int64_t>> a(d.size());
    for (size_t i = 0; i < d.size(); ++i)
        for (auto& x : d[i]) a[i].push_back(x.residue());
    return dense_rank_p(a, s.field().p);
}

// random sparse matrix with small integer entries
inline kk::SparseMatrix random_matrix(std::mt19937_64& rng, kk::Field f, int rows, int cols, double density) {
    kk::SparseMatrix m(f, rows, cols);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> v(-3, 3);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (u(rng) < density) m.set(i, j, kk::Scalar(f, v(rng)));
    return m;
}

// homology dimension of a complex given dense differentials d_k : C_k -> C_{k+1}
// betti_k = dim C_k - rank d_k - rank d_{k-1}
inline std::vector<int> dense_betti(const std::vector<int>& dims, const std::vector<kk::SparseMatrix>& d) {
    std::vector<int> b(dims.size());
    for (size_t k = 0; k < dims.size(); ++k) {
        int out = k < d.size() ? dense_rank(d[k]) : 0;
        int in = k > 0 ? dense_rank(d[k - 1]) : 0;
        b[k] = dims[k] - out - in;
    }
    return b;
}

}  // namespace oracle
