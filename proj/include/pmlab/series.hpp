#pragma once

// Weierstrass curves and the formal group of E: the w-expansion, the invariant
// differential, log/exp over Q, and the group law and [p] over Z/p^N.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "pmlab/padic.hpp"

namespace pmlab {

struct CurveParams {
    long a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    std::string name;
};

CurveParams curve_ss3();   // y^2 = x^3 - x
CurveParams curve_ss23();  // y^2 = x^3 + 1

mpz_class discriminant(const CurveParams& E);
// Number of points of the reduction over F_p, the point at infinity included.
long count_points(const CurveParams& E, u64 p);
long trace_of_frobenius(const CurveParams& E, u64 p);
// Throws std::invalid_argument unless E has good reduction at p.
void require_good_reduction(const CurveParams& E, u64 p);

using RatSeries = std::vector<mpq_class>;  // coefficient of z^k at index k

// w(z) = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3, through degree D.
RatSeries formal_w(const CurveParams& E, int D);
// omega(z)/dz, an integral series with constant term 1, through degree D.
RatSeries invariant_differential(const CurveParams& E, int D);
RatSeries formal_log(const CurveParams& E, int D);
RatSeries formal_exp(const CurveParams& E, int D);

RatSeries rat_mul(const RatSeries& a, const RatSeries& b, int D);
// a(b(z)) with b(0) = 0
RatSeries rat_compose(const RatSeries& a, const RatSeries& b, int D);
// Largest power of p dividing a denominator among the coefficients up to degree D.
int max_denominator_exponent(const RatSeries& a, u64 p);

// Integral series over Z/p^N.
struct ZpSeries {
    ZpRing ring;
    std::vector<u64> c;

    int degree_bound() const { return static_cast<int>(c.size()) - 1; }
};

ZpSeries reduce_series(const RatSeries& a, const ZpRing& ring);

// Bivariate series, coefficient of X^i Y^j at index i*(D+1)+j, zero when i+j > D.
struct BiSeries {
    ZpRing ring;
    int D = 0;
    std::vector<u64> c;

    BiSeries() = default;
    BiSeries(ZpRing r, int deg) : ring(r), D(deg), c(static_cast<size_t>(deg + 1) * (deg + 1), 0) {}
    u64& at(int i, int j) { return c[static_cast<size_t>(i) * (D + 1) + j]; }
    u64 at(int i, int j) const { return c[static_cast<size_t>(i) * (D + 1) + j]; }
};

// F(X, Y) from the chord construction: F = i(z3) with z3 the third intersection point.
BiSeries formal_group_law(const CurveParams& E, int D, const ZpRing& ring);

// Substitute univariate series into F.
ZpSeries compose_bivariate(const BiSeries& F, const ZpSeries& a, const ZpSeries& b);

// [m](T) by iterated addition.
ZpSeries multiplication_series(const BiSeries& F, int m);

}  // namespace pmlab
