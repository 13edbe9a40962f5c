#include "doctest.h"
#include "pmlab/group_ring.hpp"

using namespace pmlab;

namespace {

// Rank of the multiplication matrix over F_p by plain Gaussian elimination.
int rank_mod_p(const GroupRingElt& x) {
    const int m = x.order();
    const i64 p = static_cast<i64>(x.ring().p());
    std::vector<std::vector<i64>> a(m, std::vector<i64>(m));
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) a[i][k] = static_cast<i64>(x[((i - k) % m + m) % m] % x.ring().p());
    int rank = 0;
    for (int c = 0; c < m && rank < m; ++c) {
        int piv = -1;
        for (int r = rank; r < m; ++r)
            if (a[r][c] != 0) piv = r;
        if (piv < 0) continue;
        std::swap(a[piv], a[rank]);
        i64 inv = 1;
        while (a[rank][c] * inv % p != 1) ++inv;
        for (int r = 0; r < m; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            i64 f = a[r][c] * inv % p;
            for (int k = 0; k < m; ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

bool same_lattice(const std::vector<GroupRingElt>& a, const std::vector<GroupRingElt>& b) {
    if (a.empty() || b.empty()) return a.empty() && b.empty();
    const ZpRing& R = a[0].ring();
    const int m = a[0].order();
    std::vector<std::vector<u64>> ca, cb;
    for (auto& x : a) ca.push_back(x.coeffs());
    for (auto& x : b) cb.push_back(x.coeffs());
    ZpMatrix A = ZpMatrix::from_columns(R, m, ca), B = ZpMatrix::from_columns(R, m, cb);
    for (auto& v : cb)
        if (!in_column_span(A, v)) return false;
    for (auto& v : ca)
        if (!in_column_span(B, v)) return false;
    return true;
}

IntPoly naive_power(const IntPoly& f, unsigned long e) {
    IntPoly r = poly_const(1);
    for (unsigned long i = 0; i < e; ++i) r = poly_mul(r, f);
    return r;
}

}  // namespace

TEST_CASE("phi + phi^{-1}") {
    ZpRing R(3, 5);
    CHECK(phi_plus_phi_inv(1, R) == GroupRingElt::one(R, 1).scaled(2));
    CHECK(phi_plus_phi_inv(2, R) == GroupRingElt::monomial(R, 2, 1, 2));
    CHECK(phi_plus_phi_inv(4, R) == GroupRingElt::monomial(R, 4, 1) + GroupRingElt::monomial(R, 4, 3));
}

TEST_CASE("unit test of phi + phi^{-1}") {
    ZpRing R(3, 6);
    auto u3 = is_unit(phi_plus_phi_inv(3, R));
    REQUIRE(u3.unit);
    CHECK(phi_plus_phi_inv(3, R) * *u3.inverse == GroupRingElt::one(R, 3));
    CHECK(!is_unit(phi_plus_phi_inv(4, R)).unit);
    CHECK(!is_unit(GroupRingElt::one(R, 5).scaled(3)).unit);
    CHECK(!is_unit(GroupRingElt(R, 5)).unit);
}

TEST_CASE("unit and annihilator dichotomy for 1 <= d <= 16") {
    for (u64 p : {3ULL, 5ULL, 7ULL}) {
        ZpRing R(p, 6);
        for (int d = 1; d <= 16; ++d) {
            GroupRingElt psi = phi_plus_phi_inv(d, R);
            auto u = is_unit(psi);
            const bool expect_unit = d % 4 != 0;
            CHECK(u.unit == expect_unit);
            CHECK((rank_mod_p(psi) == d) == expect_unit);
            if (u.unit) CHECK(psi * *u.inverse == GroupRingElt::one(R, d));
            Annihilator ann = annihilator(psi);
            CHECK(ann.rank == (d % 4 == 0 ? 2 : 0));
            for (auto& g : ann.generators) CHECK((psi * g).is_zero());
            if (d % 2 == 0) {
                GroupRingElt alpha = alternating_square_sum(d, R);
                CHECK((psi * alpha).is_zero() == (d % 4 == 0));
                if (d % 4 == 0) {
                    std::vector<GroupRingElt> span{alpha, alpha * GroupRingElt::monomial(R, d, 1)};
                    CHECK(same_lattice(ann.generators, span));
                }
            }
        }
    }
}

TEST_CASE("annihilator examples") {
    ZpRing R(3, 6);
    CHECK(annihilator(phi_plus_phi_inv(2, R)).rank == 0);
    Annihilator a4 = annihilator(phi_plus_phi_inv(4, R));
    CHECK(a4.rank == 2);
    GroupRingElt g = GroupRingElt::one(R, 4) - GroupRingElt::monomial(R, 4, 2);
    CHECK(same_lattice(a4.generators, {g, g * GroupRingElt::monomial(R, 4, 1)}));
    CHECK(annihilator(GroupRingElt(R, 5)).rank == 5);
}

TEST_CASE("omega polynomials") {
    OmegaFamily f0 = omega_family(3, 0);
    CHECK(f0.omega == poly_x());
    CHECK(f0.plus_tilde == poly_const(1));
    CHECK(f0.minus_tilde == poly_const(1));
    CHECK(f0.plus == poly_x());
    CHECK(f0.minus == poly_x());

    OmegaFamily f2 = omega_family(3, 2);
    CHECK(degree(f2.plus) == 7);
    CHECK(degree(f2.minus_tilde) == 2);
    CHECK(degree(f2.cyclotomic[1]) == 6);

    for (u64 p : {3ULL, 5ULL}) {
        for (int n = 0; n <= 3; ++n) {
            OmegaFamily f = omega_family(p, n);
            unsigned long pn = 1;
            for (int i = 0; i < n; ++i) pn *= p;
            CHECK(f.omega == poly_sub(naive_power(poly_add(poly_const(1), poly_x()), pn), poly_const(1)));
            IntPoly all = poly_x();
            for (auto& c : f.cyclotomic) all = poly_mul(all, c);
            CHECK(all == f.omega);
            CHECK(poly_mul(f.plus_tilde, f.minus) == f.omega);
            CHECK(poly_mul(f.minus_tilde, f.plus) == f.omega);
        }
    }
}

TEST_CASE("degrees of omega^+ and tilde omega^- are q^+ and q^-") {
    struct Range {
        u64 p;
        int nmax;
    };
    for (Range r : {Range{3, 6}, Range{5, 4}, Range{7, 3}}) {
        for (int n = 0; n <= r.nmax; ++n) {
            OmegaFamily f = omega_family(r.p, n);
            QValues q = q_values(r.p, n);
            CHECK(degree(f.plus) == q.plus);
            CHECK(degree(f.minus_tilde) == q.minus);
        }
    }
}

TEST_CASE("q values") {
    CHECK(q_values(3, 0).q == 1);
    CHECK(q_values(3, 1).q == 2);
    CHECK(q_values(3, 2).q == 7);
    CHECK(q_values(3, 3).q == 20);
    CHECK(q_values(3, 2).plus == 7);
    CHECK(q_values(3, 2).minus == 2);
    // q_{-1} = 0 keeps q_0^+ + q_0^- = 1 and deg tilde omega_0^- = 0.
    CHECK(q_values(3, -1).q == 0);
    CHECK(q_values(3, 0).minus == 0);
    for (u64 p : {3ULL, 5ULL, 7ULL})
        for (int n = 0; n <= 6; ++n) {
            QValues q = q_values(p, n);
            i64 pn = 1;
            for (int i = 0; i < n; ++i) pn *= static_cast<i64>(p);
            CHECK(q.plus + q.minus == pn);
            if (n >= 1) CHECK(q.q + q_values(p, n - 1).q == pn);
        }
}

TEST_CASE("character idempotents") {
    for (u64 p : {3ULL, 5ULL, 7ULL}) {
        ZpRing R(p, 3);
        auto es = idempotents(R);
        const int m = static_cast<int>(p - 1);
        REQUIRE(es.size() == static_cast<size_t>(m));
        GroupRingElt sum(R, m);
        for (size_t i = 0; i < es.size(); ++i) {
            CHECK(es[i].element * es[i].element == es[i].element);
            sum = sum + es[i].element;
            for (size_t j = 0; j < es.size(); ++j)
                if (i != j) CHECK((es[i].element * es[j].element).is_zero());
        }
        CHECK(sum == GroupRingElt::one(R, m));
        GroupRingElt triv(R, m);
        for (int k = 0; k < m; ++k) triv.coeffs()[k] = R.inv(p - 1);
        CHECK(es[0].element == triv);
    }
}

TEST_CASE("delta") {
    CHECK(delta_of(4, 0) == 2);
    CHECK(delta_of(4, 1) == 0);
    CHECK(delta_of(6, 0) == 0);
    CHECK(delta_of(8, 0) == 2);
}
