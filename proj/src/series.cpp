#include "pmlab/series.hpp"

#include <stdexcept>

namespace pmlab {

CurveParams curve_ss3() {
    CurveParams E;
    E.a4 = -1;
    E.name = "y^2=x^3-x";
    return E;
}

CurveParams curve_ss23() {
    CurveParams E;
    E.a6 = 1;
    E.name = "y^2=x^3+1";
    return E;
}

mpz_class discriminant(const CurveParams& E) {
    mpz_class a1 = E.a1, a2 = E.a2, a3 = E.a3, a4 = E.a4, a6 = E.a6;
    mpz_class b2 = a1 * a1 + 4 * a2;
    mpz_class b4 = 2 * a4 + a1 * a3;
    mpz_class b6 = a3 * a3 + 4 * a6;
    mpz_class b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

long count_points(const CurveParams& E, u64 p) {
    const i64 q = static_cast<i64>(p);
    auto md = [q](i64 v) { return ((v % q) + q) % q; };
    long count = 1;
    for (i64 x = 0; x < q; ++x)
        for (i64 y = 0; y < q; ++y) {
            i64 lhs = md(y * y + E.a1 * x * y + E.a3 * y);
            i64 rhs = md(x * x * x + E.a2 * x * x + E.a4 * x + E.a6);
            if (lhs == rhs) ++count;
        }
    return count;
}

long trace_of_frobenius(const CurveParams& E, u64 p) { return static_cast<long>(p) + 1 - count_points(E, p); }

void require_good_reduction(const CurveParams& E, u64 p) {
    mpz_class disc = discriminant(E);
    if (disc == 0 || mpz_divisible_ui_p(disc.get_mpz_t(), p))
        throw std::invalid_argument("curve " + E.name + " has bad reduction at " + std::to_string(p));
}

RatSeries rat_mul(const RatSeries& a, const RatSeries& b, int D) {
    RatSeries r(D + 1, 0);
    for (size_t i = 0; i < a.size() && static_cast<int>(i) <= D; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && static_cast<int>(i + j) <= D; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

RatSeries rat_compose(const RatSeries& a, const RatSeries& b, int D) {
    if (!b.empty() && b[0] != 0) throw std::invalid_argument("rat_compose: inner series has a constant term");
    RatSeries r(D + 1, 0);
    for (int k = std::min<int>(D, static_cast<int>(a.size()) - 1); k >= 0; --k) {
        r = rat_mul(r, b, D);
        r[0] += a[k];
    }
    return r;
}

namespace {

RatSeries rat_inverse(const RatSeries& a, int D) {
    if (a.empty() || a[0] == 0) throw std::invalid_argument("rat_inverse: constant term vanishes");
    RatSeries r(D + 1, 0);
    r[0] = 1 / a[0];
    for (int k = 1; k <= D; ++k) {
        mpq_class s = 0;
        for (int i = 1; i <= k && i < static_cast<int>(a.size()); ++i) s += a[i] * r[k - i];
        r[k] = -s * r[0];
    }
    return r;
}

}  // namespace

RatSeries formal_w(const CurveParams& E, int D) {
    RatSeries w(D + 1, 0);
    RatSeries z(D + 1, 0);
    if (D >= 1) z[1] = 1;
    // Each pass fixes at least one more coefficient.
    for (int iter = 0; iter <= D; ++iter) {
        RatSeries next(D + 1, 0);
        if (D >= 3) next[3] = 1;
        RatSeries zw = rat_mul(z, w, D);
        RatSeries w2 = rat_mul(w, w, D);
        RatSeries zzw = rat_mul(z, zw, D);
        RatSeries zw2 = rat_mul(z, w2, D);
        RatSeries w3 = rat_mul(w2, w, D);
        for (int k = 0; k <= D; ++k)
            next[k] += E.a1 * zw[k] + E.a2 * zzw[k] + E.a3 * w2[k] + E.a4 * zw2[k] + E.a6 * w3[k];
        if (next == w) break;
        w = std::move(next);
    }
    return w;
}

RatSeries invariant_differential(const CurveParams& E, int D) {
    // w = z^3 u; with x = z^{-2}/u, y = -z^{-3}/u the differential dx/(2y + a1 x + a3)
    // becomes (-2u - z u') / (u(-2 + a1 z) + a3 z^3 u^2) dz.
    const int M = D + 1;
    RatSeries w = formal_w(E, M + 3);
    RatSeries u(M + 1, 0);
    for (int k = 0; k <= M; ++k) u[k] = w[k + 3];
    RatSeries num(M + 1, 0), den(M + 1, 0);
    for (int k = 0; k <= M; ++k) num[k] = -2 * u[k] - k * u[k];
    RatSeries lin(2, 0);
    lin[0] = -2;
    lin[1] = E.a1;
    den = rat_mul(u, lin, M);
    RatSeries u2 = rat_mul(u, u, M);
    for (int k = 3; k <= M; ++k) den[k] += E.a3 * u2[k - 3];
    RatSeries om = rat_mul(num, rat_inverse(den, M), D);
    om.resize(D + 1);
    return om;
}

RatSeries formal_log(const CurveParams& E, int D) {
    RatSeries om = invariant_differential(E, D);
    RatSeries l(D + 1, 0);
    for (int k = 1; k <= D; ++k) l[k] = om[k - 1] / k;
    return l;
}

RatSeries formal_exp(const CurveParams& E, int D) {
    RatSeries l = formal_log(E, D);
    RatSeries e(D + 1, 0);
    if (D >= 1) e[1] = 1;
    // e <- e - (log(e) - z) gains one correct coefficient per pass because log'(0) = 1.
    for (int k = 2; k <= D; ++k) {
        RatSeries le = rat_compose(l, e, k);
        e[k] -= le[k];
    }
    return e;
}

int max_denominator_exponent(const RatSeries& a, u64 p) {
    int worst = 0;
    for (auto& c : a) {
        mpz_class den = c.get_den();
        int v = 0;
        while (mpz_divisible_ui_p(den.get_mpz_t(), p)) {
            den /= p;
            ++v;
        }
        worst = std::max(worst, v);
    }
    return worst;
}

namespace {

u64 reduce_rational(const mpq_class& q, const ZpRing& R) {
    mpz_class m = R.modulus();
    mpz_class num = q.get_num() % m;
    if (num < 0) num += m;
    mpz_class den = q.get_den() % m;
    if (mpz_divisible_ui_p(den.get_mpz_t(), R.p()))
        throw std::domain_error("reduce_rational: denominator divisible by p");
    u64 n = num.get_ui(), dd = den.get_ui();
    return R.mul(n, R.inv(dd));
}

std::vector<u64> zp_mul(const ZpRing& R, const std::vector<u64>& a, const std::vector<u64>& b, int D) {
    std::vector<u64> r(D + 1, 0);
    for (int i = 0; i <= D && i < static_cast<int>(a.size()); ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; i + j <= D && j < static_cast<int>(b.size()); ++j) r[i + j] = R.add(r[i + j], R.mul(a[i], b[j]));
    }
    return r;
}

BiSeries bi_mul(const BiSeries& a, const BiSeries& b) {
    const ZpRing& R = a.ring;
    const int D = a.D;
    BiSeries r(R, D);
    for (int i = 0; i <= D; ++i)
        for (int j = 0; i + j <= D; ++j) {
            u64 x = a.at(i, j);
            if (x == 0) continue;
            for (int k = 0; i + j + k <= D; ++k)
                for (int l = 0; i + j + k + l <= D; ++l) {
                    u64 y = b.at(k, l);
                    if (y != 0) r.at(i + k, j + l) = R.add(r.at(i + k, j + l), R.mul(x, y));
                }
        }
    return r;
}

BiSeries bi_scale_add(const BiSeries& a, u64 s, const BiSeries& b) {
    BiSeries r = a;
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] = a.ring.add(r.c[k], a.ring.mul(s, b.c[k]));
    return r;
}

// sum_k s_k T^k with T a bivariate series without constant term
BiSeries bi_substitute(const std::vector<u64>& s, const BiSeries& T) {
    BiSeries r(T.ring, T.D);
    for (int k = std::min<int>(T.D, static_cast<int>(s.size()) - 1); k >= 0; --k) {
        r = bi_mul(r, T);
        r.at(0, 0) = T.ring.add(r.at(0, 0), s[k]);
    }
    return r;
}

}  // namespace

ZpSeries reduce_series(const RatSeries& a, const ZpRing& ring) {
    ZpSeries s{ring, {}};
    s.c.reserve(a.size());
    for (auto& q : a) s.c.push_back(reduce_rational(q, ring));
    return s;
}

BiSeries formal_group_law(const CurveParams& E, int D, const ZpRing& R) {
    if (D < 2) throw std::invalid_argument("formal_group_law: D must be at least 2");
    require_good_reduction(E, R.p());
    // w has integer coefficients, so its reduction is exact.
    std::vector<u64> w = reduce_series(formal_w(E, D + 1), R).c;
    auto sc = [&R](long v) { return R.reduce(v); };

    // lambda = sum_n w_n (z2^n - z1^n)/(z2 - z1)
    BiSeries lambda(R, D);
    for (int n = 3; n <= D + 1; ++n) {
        if (w[n] == 0) continue;
        for (int i = 0; i <= n - 1; ++i) lambda.at(i, n - 1 - i) = R.add(lambda.at(i, n - 1 - i), w[n]);
    }
    BiSeries z1(R, D);
    z1.at(1, 0) = 1;
    BiSeries wz1(R, D);
    for (int n = 0; n <= D; ++n) wz1.at(n, 0) = w[n];
    BiSeries nu = bi_scale_add(wz1, R.neg(1), bi_mul(lambda, z1));

    BiSeries l2 = bi_mul(lambda, lambda);
    BiSeries l3 = bi_mul(l2, lambda);
    BiSeries lnu = bi_mul(lambda, nu);
    BiSeries l2nu = bi_mul(l2, nu);

    BiSeries num(R, D);
    num = bi_scale_add(num, sc(-E.a1), lambda);
    num = bi_scale_add(num, sc(-E.a3), l2);
    num = bi_scale_add(num, sc(-E.a2), nu);
    num = bi_scale_add(num, sc(-2 * E.a4), lnu);
    num = bi_scale_add(num, sc(-3 * E.a6), l2nu);

    BiSeries den(R, D);
    den.at(0, 0) = 1;
    den = bi_scale_add(den, sc(E.a2), lambda);
    den = bi_scale_add(den, sc(E.a4), l2);
    den = bi_scale_add(den, sc(E.a6), l3);
    // den = 1 + t with t of order >= 2, so 1/den = sum (-t)^k
    BiSeries t = den;
    t.at(0, 0) = 0;
    std::vector<u64> geo(D + 1);
    for (int k = 0; k <= D; ++k) geo[k] = (k % 2 == 0) ? 1 : R.neg(1);
    BiSeries den_inv = bi_substitute(geo, t);

    BiSeries z3 = bi_mul(num, den_inv);
    z3.at(1, 0) = R.sub(z3.at(1, 0), 1);
    z3.at(0, 1) = R.sub(z3.at(0, 1), 1);

    // i(z) = z / (-1 + a1 z + a3 w(z))
    std::vector<u64> idn(D + 1, 0);
    idn[0] = R.neg(1);
    if (D >= 1) idn[1] = sc(E.a1);
    for (int k = 0; k <= D; ++k) idn[k] = R.add(idn[k], R.mul(sc(E.a3), w[k]));
    std::vector<u64> idn_inv(D + 1, 0);
    idn_inv[0] = R.inv(idn[0]);
    for (int k = 1; k <= D; ++k) {
        u64 s = 0;
        for (int i = 1; i <= k; ++i) s = R.add(s, R.mul(idn[i], idn_inv[k - i]));
        idn_inv[k] = R.neg(R.mul(s, idn_inv[0]));
    }
    std::vector<u64> iz(D + 1, 0);
    for (int k = 1; k <= D; ++k) iz[k] = idn_inv[k - 1];
    return bi_substitute(iz, z3);
}

ZpSeries compose_bivariate(const BiSeries& F, const ZpSeries& a, const ZpSeries& b) {
    const ZpRing& R = F.ring;
    const int D = F.D;
    std::vector<std::vector<u64>> ap(D + 1), bp(D + 1);
    ap[0].assign(D + 1, 0);
    ap[0][0] = 1;
    bp[0] = ap[0];
    for (int k = 1; k <= D; ++k) {
        ap[k] = zp_mul(R, ap[k - 1], a.c, D);
        bp[k] = zp_mul(R, bp[k - 1], b.c, D);
    }
    ZpSeries r{R, std::vector<u64>(D + 1, 0)};
    for (int i = 0; i <= D; ++i) {
        std::vector<u64> row(D + 1, 0);
        bool any = false;
        for (int j = 0; i + j <= D; ++j) {
            u64 f = F.at(i, j);
            if (f == 0) continue;
            any = true;
            for (int k = 0; k <= D; ++k) row[k] = R.add(row[k], R.mul(f, bp[j][k]));
        }
        if (!any) continue;
        std::vector<u64> term = zp_mul(R, ap[i], row, D);
        for (int k = 0; k <= D; ++k) r.c[k] = R.add(r.c[k], term[k]);
    }
    return r;
}

ZpSeries multiplication_series(const BiSeries& F, int m) {
    ZpSeries T{F.ring, std::vector<u64>(F.D + 1, 0)};
    T.c[1] = 1;
    if (m <= 0) return ZpSeries{F.ring, std::vector<u64>(F.D + 1, 0)};
    ZpSeries acc = T;
    for (int k = 1; k < m; ++k) acc = compose_bivariate(F, acc, T);
    return acc;
}

}  // namespace pmlab
