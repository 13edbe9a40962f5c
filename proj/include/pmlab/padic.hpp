#pragma once

// Fixed-precision arithmetic in Z_p / p^N and in the unramified ring of
// integers O_k = Z_p[zeta], zeta a Teichmuller (p^d - 1)-th root of unity.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pmlab/errors.hpp"

namespace pmlab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Valuation of something that vanishes modulo p^N.
inline constexpr int kValInf = std::numeric_limits<int>::max();

bool is_prime(u64 n);

// Residues modulo p^N.  p^N must stay below 2^62 so sums never overflow.
class ZpRing {
public:
    ZpRing() = default;
    ZpRing(u64 p, int N);

    u64 p() const { return p_; }
    int precision() const { return N_; }
    u64 modulus() const { return mod_; }

    u64 reduce(i64 a) const;
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= mod_ ? s - mod_ : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + mod_ - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : mod_ - a; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>((u128)a * b % mod_); }
    u64 pow(u64 a, u64 e) const;

    // p-adic valuation of a residue, kValInf for 0.
    int val(u64 a) const;
    bool is_unit(u64 a) const { return a % p_ != 0; }
    u64 inv(u64 a) const;  // throws on non-units
    // p^e mod p^N (0 once e >= N).
    u64 p_pow(int e) const;
    // a / p^e for a residue divisible by p^e; result is meaningful mod p^{N-e}.
    u64 div_p_pow(u64 a, int e) const;
    // Representative in (-p^N/2, p^N/2].
    i64 signed_rep(u64 a) const;

    bool operator==(const ZpRing& o) const { return p_ == o.p_ && N_ == o.N_; }

private:
    u64 p_ = 0;
    int N_ = 0;
    u64 mod_ = 1;
};

class PAdicInt {
public:
    PAdicInt(const ZpRing& ring, i64 v) : ring_(ring), value_(ring.reduce(v)) {}
    static PAdicInt from_residue(const ZpRing& ring, u64 r) {
        PAdicInt x(ring, 0);
        x.value_ = r % ring.modulus();
        return x;
    }

    u64 value() const { return value_; }
    const ZpRing& ring() const { return ring_; }
    int valuation() const { return ring_.val(value_); }

    PAdicInt operator+(const PAdicInt& o) const { return from_residue(ring_, ring_.add(value_, o.value_)); }
    PAdicInt operator-(const PAdicInt& o) const { return from_residue(ring_, ring_.sub(value_, o.value_)); }
    PAdicInt operator*(const PAdicInt& o) const { return from_residue(ring_, ring_.mul(value_, o.value_)); }
    PAdicInt operator-() const { return from_residue(ring_, ring_.neg(value_)); }
    bool operator==(const PAdicInt& o) const { return value_ == o.value_; }

private:
    ZpRing ring_;
    u64 value_;
};

// Teichmuller lift of a unit residue a mod p into Z/p^N.
u64 teichmuller(u64 a, const ZpRing& ring);
PAdicInt teichmuller(const PAdicInt& a);

// Smallest primitive root modulo p.
u64 primitive_root(u64 p);

struct FieldDesc {
    ZpRing ring;
    int d = 1;
    // Monic minimal polynomial of zeta, modulus[d] == 1.
    std::vector<u64> modulus;
    // frob[e] is d x d, column j holds the coordinates of zeta^{j p^e}.
    std::vector<std::vector<u64>> frob;
    // Order of zeta, p^d - 1.
    u64 zeta_order = 1;

    const std::vector<u64>& frobenius_matrix() const { return frob[d > 1 ? 1 : 0]; }
};

using FieldPtr = std::shared_ptr<const FieldDesc>;

// Builds O_k for the unramified extension of degree d.  The generator zeta is
// the Teichmuller lift of a primitive element of F_{p^d} which is also a normal
// element, so its Frobenius conjugates form a Z_p-basis of O_k.
FieldPtr build_unramified(u64 p, int d, int N);

class UnramifiedElt {
public:
    UnramifiedElt() = default;
    explicit UnramifiedElt(FieldPtr f);
    UnramifiedElt(FieldPtr f, std::vector<u64> coeffs);
    static UnramifiedElt scalar(FieldPtr f, i64 a);
    static UnramifiedElt zeta_pow(FieldPtr f, i64 k);

    const FieldPtr& field() const { return f_; }
    const std::vector<u64>& coeffs() const { return c_; }
    std::vector<u64>& coeffs() { return c_; }
    int degree() const { return f_->d; }

    UnramifiedElt operator+(const UnramifiedElt& o) const;
    UnramifiedElt operator-(const UnramifiedElt& o) const;
    UnramifiedElt operator-() const;
    UnramifiedElt operator*(const UnramifiedElt& o) const;
    UnramifiedElt& operator+=(const UnramifiedElt& o);
    UnramifiedElt& operator-=(const UnramifiedElt& o);
    UnramifiedElt scaled(u64 s) const;
    UnramifiedElt pow(u64 e) const;
    bool operator==(const UnramifiedElt& o) const { return c_ == o.c_; }

    bool is_zero() const;
    int valuation() const;

private:
    FieldPtr f_;
    std::vector<u64> c_;
};

// x^{phi^power}; negative powers are reduced mod d.
UnramifiedElt frobenius(const UnramifiedElt& x, i64 power);
inline int valuation(const UnramifiedElt& x) { return x.valuation(); }

// Inverse of a unit of O_k (Newton iteration from the residue field inverse).
UnramifiedElt inverse(const UnramifiedElt& x);

// Field arithmetic helpers used by the tower code on raw coordinate arrays.
void field_mul_acc(const FieldDesc& f, const u64* a, const u64* b, u64* out);
void field_frob_apply(const FieldDesc& f, int e, const u64* a, u64* out);

}  // namespace pmlab
