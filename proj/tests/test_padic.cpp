#include <random>

#include "doctest.h"
#include "pmlab/padic.hpp"

using namespace pmlab;

namespace {

// Order of zeta by repeated multiplication, no binary exponentiation.
u64 brute_order(const UnramifiedElt& z, u64 bound) {
    UnramifiedElt one = UnramifiedElt::scalar(z.field(), 1);
    UnramifiedElt acc = z;
    for (u64 k = 1; k <= bound; ++k) {
        if (acc == one) return k;
        acc = acc * z;
    }
    return 0;
}

UnramifiedElt random_elt(const FieldPtr& f, std::mt19937_64& rng) {
    std::vector<u64> c(f->d);
    for (auto& x : c) x = rng() % f->ring.modulus();
    return UnramifiedElt(f, c);
}

u64 eval_mod_p(const std::vector<u64>& poly, u64 x, u64 p) {
    u64 r = 0;
    for (size_t i = poly.size(); i-- > 0;) r = (r * x + poly[i] % p) % p;
    return r;
}

}  // namespace

TEST_CASE("ZpRing arithmetic agrees with wide integer arithmetic") {
    std::mt19937_64 rng(7);
    for (u64 p : {3ULL, 5ULL, 7ULL, 101ULL}) {
        ZpRing R(p, 6);
        const unsigned __int128 m = R.modulus();
        for (int t = 0; t < 500; ++t) {
            u64 a = rng() % R.modulus(), b = rng() % R.modulus(), c = rng() % R.modulus();
            CHECK(R.add(a, b) == static_cast<u64>((static_cast<unsigned __int128>(a) + b) % m));
            CHECK(R.mul(a, b) == static_cast<u64>(static_cast<unsigned __int128>(a) * b % m));
            CHECK(R.add(R.sub(a, b), b) == a);
            CHECK(R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c)));
            CHECK(R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c)));
            if (R.is_unit(a)) CHECK(R.mul(a, R.inv(a)) == 1);
        }
    }
}

TEST_CASE("PAdicInt stays reduced") {
    ZpRing R(5, 3);
    PAdicInt a(R, -1), b(R, 130);
    CHECK(a.value() == 124);
    CHECK(b.value() == 5);
    CHECK((a + b).value() == 4);
    CHECK((a * b).value() == 120);
    CHECK(b.valuation() == 1);
    CHECK(PAdicInt(R, 0).valuation() == kValInf);
}

TEST_CASE("teichmuller lifts") {
    CHECK(teichmuller(1, ZpRing(5, 2)) == 1);
    CHECK(teichmuller(2, ZpRing(5, 2)) == 7);
    CHECK(teichmuller(6, ZpRing(7, 3)) == 342);
    CHECK_THROWS(teichmuller(10, ZpRing(5, 2)));
    for (u64 p : {3ULL, 5ULL, 7ULL, 11ULL}) {
        ZpRing R(p, 5);
        for (u64 a = 1; a < p; ++a) {
            u64 t = teichmuller(a, R);
            CHECK(t % p == a);
            CHECK(R.pow(t, p - 1) == 1);
        }
    }
}

TEST_CASE("build_unramified rejects bad primes") {
    CHECK_THROWS_AS(build_unramified(2, 2, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_unramified(9, 2, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_unramified(15, 1, 4), std::invalid_argument);
}

TEST_CASE("degree one field is Z_p") {
    FieldPtr f = build_unramified(3, 1, 4);
    CHECK(f->d == 1);
    CHECK(f->modulus.size() == 2);
    CHECK(f->frobenius_matrix() == std::vector<u64>{1});
    UnramifiedElt z = UnramifiedElt::zeta_pow(f, 1);
    CHECK(frobenius(z, 1) == z);
    CHECK(brute_order(z, 10) == 2);
}

TEST_CASE("generator of O_k has exact order p^d - 1") {
    struct Case {
        u64 p;
        int d, N;
    };
    for (Case c : {Case{3, 2, 4}, Case{3, 3, 3}, Case{5, 2, 3}, Case{3, 4, 3}, Case{7, 2, 2}}) {
        FieldPtr f = build_unramified(c.p, c.d, c.N);
        UnramifiedElt z = UnramifiedElt::zeta_pow(f, 1);
        u64 q = 1;
        for (int i = 0; i < c.d; ++i) q *= c.p;
        CHECK(brute_order(z, q) == q - 1);
        // monic, and the reduction has no root in F_p
        CHECK(f->modulus.back() == 1);
        for (u64 x = 0; x < c.p; ++x) CHECK(eval_mod_p(f->modulus, x, c.p) != 0);
    }
    FieldPtr f = build_unramified(3, 2, 4);
    UnramifiedElt z = UnramifiedElt::zeta_pow(f, 1);
    CHECK(z.pow(8) == UnramifiedElt::scalar(f, 1));
    CHECK(!(z.pow(4) == UnramifiedElt::scalar(f, 1)));
}

TEST_CASE("degree four modulus has no quadratic factor mod p") {
    FieldPtr f = build_unramified(3, 4, 2);
    const u64 p = 3;
    // Brute-force division by every monic quadratic over F_3.
    for (u64 a = 0; a < p; ++a)
        for (u64 b = 0; b < p; ++b) {
            std::vector<i64> r(f->modulus.begin(), f->modulus.end());
            for (auto& x : r) x %= static_cast<i64>(p);
            for (int k = 4; k >= 2; --k) {
                i64 c = r[k];
                r[k] = 0;
                r[k - 1] = ((r[k - 1] - c * static_cast<i64>(a)) % 3 + 3) % 3;
                r[k - 2] = ((r[k - 2] - c * static_cast<i64>(b)) % 3 + 3) % 3;
            }
            CHECK((r[0] != 0 || r[1] != 0));
        }
}

TEST_CASE("frobenius is the p-power map on zeta and has order d") {
    FieldPtr f = build_unramified(5, 4, 3);
    UnramifiedElt z = UnramifiedElt::zeta_pow(f, 1);
    CHECK(frobenius(z, 1) == z.pow(5));
    CHECK(frobenius(z, 4) == z);
    CHECK(!(frobenius(z, 2) == z));
    CHECK(frobenius(z, -1) == z.pow(125));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        UnramifiedElt x = random_elt(f, rng), y = random_elt(f, rng);
        CHECK(frobenius(x * y, 1) == frobenius(x, 1) * frobenius(y, 1));
        CHECK(frobenius(x + y, 3) == frobenius(x, 3) + frobenius(y, 3));
        CHECK(frobenius(x, 4) == x);
        CHECK(frobenius(frobenius(x, 1), -1) == x);
        // x^phi = x^p mod p
        CHECK((frobenius(x, 1) - x.pow(5)).valuation() >= 1);
    }
    for (int e = 1; e < 4; ++e) CHECK(!(frobenius(z, e) == z));
}

TEST_CASE("zeta is a normal element: its conjugates are independent mod p") {
    for (int d : {2, 3, 4}) {
        FieldPtr f = build_unramified(3, d, 3);
        UnramifiedElt z = UnramifiedElt::zeta_pow(f, 1);
        std::vector<std::vector<i64>> m;
        for (int e = 0; e < d; ++e) {
            auto c = frobenius(z, e).coeffs();
            std::vector<i64> row;
            for (u64 v : c) row.push_back(static_cast<i64>(v % 3));
            m.push_back(row);
        }
        int rank = 0;
        for (int col = 0; col < d; ++col) {
            int piv = -1;
            for (int r = rank; r < d; ++r)
                if (m[r][col] != 0) piv = r;
            if (piv < 0) continue;
            std::swap(m[piv], m[rank]);
            for (int r = 0; r < d; ++r) {
                if (r == rank || m[r][col] == 0) continue;
                i64 fct = m[r][col] * m[rank][col] % 3;  // inverse of 1 or 2 mod 3 is itself
                for (int k = 0; k < d; ++k) m[r][k] = ((m[r][k] - fct * m[rank][k]) % 3 + 3) % 3;
            }
            ++rank;
        }
        CHECK(rank == d);
    }
}

TEST_CASE("ring axioms and valuation in O_k") {
    FieldPtr f = build_unramified(3, 2, 4);
    UnramifiedElt z = UnramifiedElt::zeta_pow(f, 1);
    CHECK(valuation(z.scaled(3)) == 1);
    CHECK(valuation(UnramifiedElt::scalar(f, 1) + z) == 0);
    CHECK(valuation(UnramifiedElt(f)) == kValInf);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        UnramifiedElt a = random_elt(f, rng), b = random_elt(f, rng), c = random_elt(f, rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        UnramifiedElt a3 = a.scaled(3), b9 = b.scaled(9);
        int va = valuation(a3), vb = valuation(b9);
        if (va < 4 && vb < 4 && va + vb < 4) CHECK(valuation(a3 * b9) == va + vb);
        if (valuation(a) == 0) CHECK(inverse(a) * a == UnramifiedElt::scalar(f, 1));
    }
}
