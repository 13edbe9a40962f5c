#pragma once

// The cyclotomic tower k_n = k(mu_{p^{n+1}}) over the unramified field k.
//
// An element at level n >= 0 is stored in the power basis eta^i zeta^j with
// eta = zeta_{p^{n+1}}, 0 <= i < (p-1)p^n, 0 <= j < d, together with a
// denominator exponent a (the element is p^{-a} times the stored numerator).
// Level -1 is k itself.  The roots of unity are the formal generators of
// O_k[Z]/Phi_{p^{n+1}}(Z); eta_m is eta_n^{p^{n-m}}, so the system is exactly
// compatible.

#include <memory>
#include <vector>

#include "pmlab/padic.hpp"

namespace pmlab {

struct TowerDesc {
    FieldPtr field;
    int n_max = 0;
    u64 p = 0;
    int d = 1;

    int dim(int n) const;              // (p-1)p^n, or 1 at level -1
    int ramification(int n) const { return dim(n); }
    u64 root_order(int n) const;       // p^{n+1}
    u64 p_power(int e) const;          // exact p^e as an integer
    void check_level(int n) const;     // throws LevelOverflow
};

using TowerPtr = std::shared_ptr<const TowerDesc>;

TowerPtr build_tower(FieldPtr field, int n_max);

class TowerElt {
public:
    TowerElt() = default;
    TowerElt(TowerPtr t, int level);  // zero

    static TowerElt from_unramified(TowerPtr t, int level, const UnramifiedElt& x);
    static TowerElt scalar(TowerPtr t, int level, i64 a);
    static TowerElt eta_pow(TowerPtr t, int level, i64 k);

    const TowerPtr& tower() const { return t_; }
    int level() const { return level_; }
    int den_exp() const { return den_; }
    int dim() const { return t_->dim(level_); }
    const std::vector<u64>& numerators() const { return c_; }
    std::vector<u64>& numerators() { return c_; }
    UnramifiedElt coord(int i) const;
    void set_coord(int i, const UnramifiedElt& x);

    TowerElt operator+(const TowerElt& o) const;
    TowerElt operator-(const TowerElt& o) const;
    TowerElt operator-() const;
    TowerElt operator*(const TowerElt& o) const;
    TowerElt& operator+=(const TowerElt& o) { return *this = *this + o; }
    TowerElt& operator-=(const TowerElt& o) { return *this = *this - o; }
    TowerElt times(const UnramifiedElt& s) const;
    TowerElt times_scalar(u64 s) const;
    TowerElt pow(u64 e) const;
    // Equality of the represented elements modulo the common precision.
    bool operator==(const TowerElt& o) const { return (*this - o).numerator_is_zero(); }

    // p^{-e} * this, tracked in the denominator exponent.
    TowerElt divided_by_p(int e = 1) const;
    // Same element written over p^a, a >= den_exp().
    TowerElt with_den(int a) const;
    // The same element viewed at a higher level.
    TowerElt embed(int level) const;

    bool numerator_is_zero() const;
    // Absolute precision of the element: N - den_exp.
    int precision_floor() const;
    // min v_p over coordinates minus den_exp; the floor when the numerator vanishes.
    int residual_valuation() const;
    // Valuation in units of a uniformizer of k_n (so v_p(p) = ramification).
    int valuation_pi() const;

private:
    TowerPtr t_;
    int level_ = -1;
    int den_ = 0;
    std::vector<u64> c_;  // flat, index i*d + j
};

// zeta^{phi^k}
UnramifiedElt zeta_frob(const FieldPtr& f, i64 k);

// eta -> eta^u on roots of unity, phi^f on O_k coefficients.
TowerElt galois_act(u64 u, i64 f, const TowerElt& x);

// Trace from the level of x down to level m (m >= -1).
TowerElt trace(const TowerElt& x, int m);

// Restriction of an element known to lie in k_m.
TowerElt descend(const TowerElt& x, int m);

TowerElt pi_n(const TowerPtr& t, int n);

struct IterateReport {
    bool equal = false;
    int residual_valuation = 0;
    int floor = 0;
};

// (pi_n + zeta')^{p^m} - zeta'^{p^m} against pi_{n-m}, zeta' = zeta^{phi^{-(n+1)}}.
IterateReport check_g_iterate(const TowerPtr& t, int n, int m);

// Units of Gal(k_n/k_m) as residues mod p^{n+1}.
std::vector<u64> relative_galois_units(const TowerDesc& t, int n, int m);

}  // namespace pmlab
