#pragma once

// Cyclic group rings Z_p[C_m] = Z_p[F]/(F^m - 1), integer polynomials in X
// (the Iwasawa variable, gamma = 1 + X), and polynomials over the group ring.

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "pmlab/linalg.hpp"
#include "pmlab/padic.hpp"

namespace pmlab {

class GroupRingElt {
public:
    GroupRingElt() = default;
    GroupRingElt(ZpRing ring, int order);  // zero
    static GroupRingElt one(ZpRing ring, int order);
    static GroupRingElt monomial(ZpRing ring, int order, int k, i64 coeff = 1);

    const ZpRing& ring() const { return ring_; }
    int order() const { return static_cast<int>(c_.size()); }
    const std::vector<u64>& coeffs() const { return c_; }
    std::vector<u64>& coeffs() { return c_; }
    u64 operator[](int k) const { return c_[k]; }

    GroupRingElt operator+(const GroupRingElt& o) const;
    GroupRingElt operator-(const GroupRingElt& o) const;
    GroupRingElt operator-() const;
    GroupRingElt operator*(const GroupRingElt& o) const;
    GroupRingElt scaled(u64 s) const;
    bool operator==(const GroupRingElt& o) const { return c_ == o.c_; }
    bool is_zero() const;

private:
    ZpRing ring_;
    std::vector<u64> c_;
};

// F + F^{-1} in Z_p[G_{-1}], d = |G_{-1}|.
GroupRingElt phi_plus_phi_inv(int d, const ZpRing& ring);

// 1 - F^2 + F^4 - ... - F^{d-2}, for even d.
GroupRingElt alternating_square_sum(int d, const ZpRing& ring);

struct UnitResult {
    bool unit = false;
    std::optional<GroupRingElt> inverse;
};

UnitResult is_unit(const GroupRingElt& x);

struct Annihilator {
    std::vector<GroupRingElt> generators;  // a Z_p-basis of the kernel of multiplication
    int rank = 0;
};

Annihilator annihilator(const GroupRingElt& x);

// Multiplication-by-x matrix on the basis 1, F, ..., F^{m-1}.
ZpMatrix multiplication_matrix(const GroupRingElt& x);

// ---- integer polynomials ----

using IntPoly = std::vector<mpz_class>;  // low degree first, trimmed

void trim(IntPoly& a);
int degree(const IntPoly& a);  // -1 for the zero polynomial
IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_add(const IntPoly& a, const IntPoly& b);
IntPoly poly_sub(const IntPoly& a, const IntPoly& b);
IntPoly poly_x();
IntPoly poly_const(long c);
// (1 + X)^k
IntPoly one_plus_x_pow(const mpz_class& k);

struct OmegaFamily {
    int n = 0;
    IntPoly omega;        // (1+X)^{p^n} - 1
    std::vector<IntPoly> cyclotomic;  // cyclotomic[m-1] = Phi_{p^m}(1+X), 1 <= m <= n
    IntPoly plus_tilde, minus_tilde;  // products over even / odd m
    IntPoly plus, minus;  // X times the above
};

OmegaFamily omega_family(u64 p, int n);

// Phi_{p^m}(1+X) = sum_{i<p} (1+X)^{i p^{m-1}}, m >= 1.
IntPoly cyclotomic_shifted(u64 p, int m);

struct QValues {
    i64 q = 0, plus = 0, minus = 0;
};

// q_n = sum_{i=0}^n (-1)^{n-i} p^i with q_{-1} = 0, and the plus/minus variants.
QValues q_values(u64 p, int n);

// ---- characters of Delta = (Z/p)^x ----

struct CharIdempotent {
    int index = 0;  // chi = omega^index, omega the Teichmuller character
    GroupRingElt element;  // in Z_p[Delta], coordinate k is sigma_{g^k}
};

// Delta is indexed by the discrete log with respect to the smallest primitive root g.
std::vector<CharIdempotent> idempotents(const ZpRing& ring);

// chi(sigma_a) = omega(a)^index
u64 character_value(const ZpRing& ring, int index, u64 a);

int delta_of(int d, int chi_index);

// ---- polynomials over Z_p[G] ----

struct GRPoly {
    std::vector<GroupRingElt> c;  // coefficient of X^i

    GRPoly() = default;
    static GRPoly from_int(const IntPoly& f, const ZpRing& ring, int order);
    static GRPoly constant(const GroupRingElt& g);
    void trim();
    int degree() const;
};

}  // namespace pmlab
