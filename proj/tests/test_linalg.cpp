#include <algorithm>
#include <random>

#include "doctest.h"
#include "pmlab/linalg.hpp"

using namespace pmlab;

namespace {

ZpMatrix random_unimodular(const ZpRing& R, int n, std::mt19937_64& rng) {
    ZpMatrix M = ZpMatrix::identity(R, n);
    for (int i = 0; i < n; ++i) {
        u64 u;
        do u = rng() % R.modulus();
        while (!R.is_unit(u));
        M.at(i, i) = u;
    }
    for (int t = 0; t < 4 * n; ++t) {
        int i = static_cast<int>(rng() % n), k = static_cast<int>(rng() % n);
        if (i == k) continue;
        M.row_axpy(i, k, rng() % R.modulus());
    }
    return M;
}

i64 det_int(std::vector<std::vector<i64>> m) {
    // Bareiss fraction-free elimination, exact over Z.
    const int n = static_cast<int>(m.size());
    i64 sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int s = k + 1;
            while (s < n && m[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(m[s], m[k]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

int vp(i64 x, i64 p) {
    if (x == 0) return kValInf;
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

}  // namespace

TEST_CASE("snf small examples") {
    ZpRing R(3, 6);
    ZpMatrix A(R, 2, 2);
    A.at(0, 0) = 2;
    A.at(1, 1) = 3;
    CHECK(snf(A).diag == std::vector<int>{0, 1});
    CHECK(snf(ZpMatrix::identity(R, 4)).diag == std::vector<int>(4, 0));
    std::mt19937_64 rng(1);
    ZpMatrix P(R, 2, 2);
    P.at(0, 0) = 3;
    P.at(1, 1) = 3;
    ZpMatrix C = random_unimodular(R, 2, rng) * P * random_unimodular(R, 2, rng);
    CHECK(snf(C).diag == std::vector<int>{1, 1});
}

TEST_CASE("snf transforms diagonalise exactly") {
    ZpRing R(5, 8);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        int r = 2 + static_cast<int>(rng() % 5), c = 2 + static_cast<int>(rng() % 5);
        ZpMatrix A(R, r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) A.at(i, j) = R.mul(rng() % 7, R.p_pow(static_cast<int>(rng() % 3)));
        SnfResult s = snf(A, {true, true, 2});
        ZpMatrix D = s.U * A * s.V;
        CHECK(D == s.D);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (i != j) CHECK(D.at(i, j) == 0);
        CHECK(std::is_sorted(s.diag.begin(), s.diag.end()));
    }
}

TEST_CASE("snf is invariant under unimodular changes of basis") {
    ZpRing R(3, 10);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        const int n = 4;
        ZpMatrix A(R, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A.at(i, j) = R.mul(rng() % 9, R.p_pow(static_cast<int>(rng() % 3)));
        auto base = snf(A).diag;
        auto moved = snf(random_unimodular(R, n, rng) * A * random_unimodular(R, n, rng)).diag;
        CHECK(base == moved);
    }
}

TEST_CASE("elementary divisors match determinantal divisors") {
    std::mt19937_64 rng(4);
    const i64 p = 3;
    ZpRing R(3, 12);
    for (int t = 0; t < 40; ++t) {
        std::vector<std::vector<i64>> m(3, std::vector<i64>(3));
        for (auto& row : m)
            for (auto& x : row) x = static_cast<i64>(rng() % 19) - 9;
        ZpMatrix A(R, 3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A.at(i, j) = R.reduce(m[i][j]);
        auto diag = snf(A, {false, false, 0}).diag;
        // d_k = min valuation over k x k minors = e_1 + ... + e_k
        int d1 = kValInf;
        for (auto& row : m)
            for (i64 x : row) d1 = std::min(d1, vp(x, p));
        int d2 = kValInf;
        for (int r0 = 0; r0 < 3; ++r0)
            for (int r1 = r0 + 1; r1 < 3; ++r1)
                for (int c0 = 0; c0 < 3; ++c0)
                    for (int c1 = c0 + 1; c1 < 3; ++c1)
                        d2 = std::min(d2, vp(m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0], p));
        int d3 = vp(det_int(m), p);
        CHECK(diag[0] == d1);
        if (d2 != kValInf) CHECK(diag[0] + diag[1] == d2);
        if (d3 != kValInf) CHECK(diag[0] + diag[1] + diag[2] == d3);
    }
}

TEST_CASE("kernel, membership and quotients") {
    ZpRing R(3, 10);
    std::mt19937_64 rng(5);
    ZpMatrix B(R, 5, 3);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) B.at(i, j) = rng() % 10;
    // A has a third column equal to 2*col0 - col1, so its kernel has rank 1.
    ZpMatrix A(R, 5, 4);
    for (int i = 0; i < 5; ++i) {
        A.at(i, 0) = B.at(i, 0);
        A.at(i, 1) = B.at(i, 1);
        A.at(i, 2) = R.sub(R.mul(2, B.at(i, 0)), B.at(i, 1));
        A.at(i, 3) = R.mul(9, B.at(i, 2));
    }
    ZpMatrix K = kernel_basis(A);
    CHECK(K.cols() == 1);
    ZpMatrix AK = A * K;
    for (int i = 0; i < AK.rows(); ++i) CHECK(AK.at(i, 0) == 0);

    std::vector<u64> x{1, 2, 3, 4};
    CHECK(in_column_span(A, A.apply(x)));
    CHECK(!in_column_span(A, B.column(2)));
    std::vector<u64> b9 = B.column(2);
    for (auto& v : b9) v = R.mul(v, 9);
    CHECK(in_column_span(A, b9));

    ZpMatrix Dg(R, 4, 4);
    Dg.at(0, 0) = 1;
    Dg.at(1, 1) = 3;
    Dg.at(2, 2) = 9;
    auto inv = cokernel_invariants(Dg);
    CHECK(inv.rank == 1);
    CHECK(inv.torsion == std::vector<int>{1, 2});

    ZpMatrix S(R, 2, 2);
    S.at(0, 0) = 3;
    S.at(1, 1) = 27;
    auto q = quotient_invariants(ZpMatrix::identity(R, 2), S);
    CHECK(q.rank == 0);
    CHECK(q.torsion == std::vector<int>{1, 3});
    ZpMatrix L(R, 3, 2);
    L.at(0, 0) = 3;
    L.at(1, 1) = 3;
    ZpMatrix S2(R, 3, 1);
    S2.at(0, 0) = 9;
    auto q2 = quotient_invariants(L, S2);
    CHECK(q2.rank == 1);
    CHECK(q2.torsion == std::vector<int>{1});
}

TEST_CASE("ambiguous pivots raise PrecisionExhausted") {
    ZpRing R(3, 6);
    ZpMatrix A(R, 2, 2);
    A.at(0, 0) = 1;
    A.at(1, 1) = R.p_pow(5);
    auto s = snf(A);
    CHECK(s.ambiguous);
    CHECK_THROWS_AS(kernel_basis(A), PrecisionExhausted);
}
