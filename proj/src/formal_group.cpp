#include "pmlab/formal_group.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>

namespace pmlab {

namespace {

int vp_int(u64 j, u64 p) {
    int v = 0;
    while (j % p == 0) {
        j /= p;
        ++v;
    }
    return v;
}

int vp_factorial(int D, u64 p) {
    int v = 0;
    for (int j = 2; j <= D; ++j) v += vp_int(static_cast<u64>(j), p);
    return v;
}

int floor_log(u64 D, u64 p) {
    int l = 0;
    for (u64 q = p; q <= D; q *= p) ++l;
    return l;
}

u64 mpz_mod_ring(const mpz_class& x, const ZpRing& R) {
    mpz_class m = R.modulus();
    mpz_class r = x % m;
    if (r < 0) r += m;
    return r.get_ui();
}

// p^e mod (p^d - 1) without overflow
u64 p_power_mod(u64 p, u64 e, u64 mod) {
    if (mod == 1) return 0;
    u128 r = 1, b = p % mod;
    while (e) {
        if (e & 1) r = r * b % mod;
        b = b * b % mod;
        e >>= 1;
    }
    return static_cast<u64>(r);
}

std::vector<UnramifiedElt> ok_mul(const std::vector<UnramifiedElt>& a, const std::vector<UnramifiedElt>& b, int D, const FieldPtr& f) {
    std::vector<UnramifiedElt> r(D + 1, UnramifiedElt(f));
    for (int i = 0; i <= D && i < static_cast<int>(a.size()); ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; i + j <= D && j < static_cast<int>(b.size()); ++j) {
            if (b[j].is_zero()) continue;
            field_mul_acc(*f, a[i].coeffs().data(), b[j].coeffs().data(), r[i + j].coeffs().data());
        }
    }
    return r;
}

// s(y(X)) for y without constant term, through degree D
std::vector<UnramifiedElt> ok_compose(const std::vector<UnramifiedElt>& s, const std::vector<UnramifiedElt>& y, int D, const FieldPtr& f) {
    std::vector<UnramifiedElt> r(D + 1, UnramifiedElt(f));
    for (int k = std::min<int>(D, static_cast<int>(s.size()) - 1); k >= 0; --k) {
        r = ok_mul(r, y, D, f);
        r[0] += s[k];
    }
    return r;
}

std::vector<UnramifiedElt> ok_inverse(const std::vector<UnramifiedElt>& a, int D, const FieldPtr& f) {
    std::vector<UnramifiedElt> r(D + 1, UnramifiedElt(f));
    UnramifiedElt inv0 = inverse(a[0]);
    r[0] = inv0;
    for (int k = 1; k <= D; ++k) {
        UnramifiedElt s(f);
        for (int i = 1; i <= k && i < static_cast<int>(a.size()); ++i) s += a[i] * r[k - i];
        r[k] = -(s * inv0);
    }
    return r;
}

std::vector<UnramifiedElt> lift_series(const ZpSeries& s, const FieldPtr& f) {
    std::vector<UnramifiedElt> r;
    r.reserve(s.c.size());
    for (u64 v : s.c) {
        UnramifiedElt x(f);
        x.coeffs()[0] = v % f->ring.modulus();
        r.push_back(x);
    }
    return r;
}

UnramifiedElt div_p_pow(const UnramifiedElt& x, int e) {
    UnramifiedElt r = x;
    for (auto& c : r.coeffs()) c = x.field()->ring.div_p_pow(c, e);
    return r;
}

// Solves y' = A(X) / B(y(X)), y(0) = 0, checking that the coefficient of X^{j-1}
// is divisible by p^{v_p(j)} before dividing by j.
IntegralityReport solve_ode(const std::vector<UnramifiedElt>& A, const std::vector<UnramifiedElt>& B, int D, const FieldPtr& f) {
    const ZpRing& R = f->ring;
    IntegralityReport rep;
    rep.series.field = f;
    rep.series.c.assign(D + 1, UnramifiedElt(f));
    auto& y = rep.series.c;
    int loss = 0;
    for (int j = 1; j <= D; ++j) {
        std::vector<UnramifiedElt> By = ok_compose(B, y, j - 1, f);
        std::vector<UnramifiedElt> q = ok_mul(A, ok_inverse(By, j - 1, f), j - 1, f);
        UnramifiedElt c = q[j - 1];
        const int v = vp_int(static_cast<u64>(j), R.p());
        loss += v;
        if (v > 0 && c.valuation() < v) {
            if (rep.integral) rep.first_bad_degree = j;
            rep.integral = false;
        }
        const u64 unit = static_cast<u64>(j) / R.p_pow(v);
        y[j] = div_p_pow(c, v).scaled(R.inv(unit % R.modulus()));
    }
    rep.precision = R.precision() - loss;
    return rep;
}

}  // namespace

UnramifiedElt epsilon_n(const FieldPtr& f, int n) {
    const ZpRing& R = f->ring;
    UnramifiedElt e(f);
    for (int i = 1; i <= R.precision(); ++i) {
        UnramifiedElt term = zeta_frob(f, -(n + 1 + 2 * i)).scaled(R.p_pow(i));
        if (i % 2 == 1)
            e += term;
        else
            e -= term;
    }
    return e;
}

OkSeries honda_log(const FieldPtr& f, int n, int D, HondaChecks* checks) {
    const ZpRing& R = f->ring;
    const u64 p = R.p();
    const int N = R.precision();
    const int L = floor_log(static_cast<u64>(D), p);
    const i64 twist = -(n + 1);

    // The coefficient of X^j in the m-th term has valuation m - v_p(j) (j <= p^{2m}),
    // so a = max(v_p(j) - m) clears every denominator.
    int a = 0;
    for (int m = 1; m <= L; ++m)
        for (int e = 0; e <= std::min(L, 2 * m); ++e) a = std::max(a, e - m);
    // Terms with m - L >= N + a vanish after scaling by p^a.
    const int M = N + a + L;

    OkSeries s;
    s.field = f;
    s.den_exp = a;
    s.c.assign(D + 1, UnramifiedElt(f));
    if (D >= 1) s.c[1] = UnramifiedElt::scalar(f, 1).scaled(R.p_pow(a));
    const UnramifiedElt zeta_t = zeta_frob(f, twist);
    int terms = 1;
    for (int m = 1; m <= M; ++m) {
        mpz_class P;
        mpz_ui_pow_ui(P.get_mpz_t(), p, 2 * static_cast<unsigned long>(m));
        const u64 Pmod = p_power_mod(p, 2 * static_cast<u64>(m), f->zeta_order);
        bool any = false;
        for (int j = 1; j <= D; ++j) {
            if (P < j) break;
            if (m - vp_int(static_cast<u64>(j), p) + a >= N) continue;
            mpz_class C;
            mpz_bin_ui(C.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(j));
            // C * p^{a-m}, exact since v_p(C) = 2m - v_p(j) >= m - a
            mpz_class pw;
            if (a >= m) {
                mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(a - m));
                C *= pw;
            } else {
                mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(m - a));
                if (!mpz_divisible_p(C.get_mpz_t(), pw.get_mpz_t())) throw Error("honda_log: denominator bookkeeping failed");
                C /= pw;
            }
            if (m % 2 == 1) C = -C;
            const i64 ord = static_cast<i64>(f->zeta_order);
            i64 ex = (static_cast<i64>(Pmod) - j) % ord;
            if (ex < 0) ex += ord;
            UnramifiedElt z = zeta_t.pow(static_cast<u64>(ex));
            s.c[j] += z.scaled(mpz_mod_ring(C, R));
            any = true;
        }
        if (any) terms = m + 1;
    }

    HondaChecks hc;
    hc.terms = terms;
    // Honda congruence: f^{phi^2}(X^{p^2}) + p f(X), numerators over p^a.
    hc.congruence = true;
    const u64 p2 = p * p;
    for (int k = 1; k <= D; ++k) {
        UnramifiedElt v = s.c[k].scaled(p % R.modulus());
        if (k % static_cast<int>(p2) == 0) v += frobenius(s.c[k / static_cast<int>(p2)], 2);
        if (v.valuation() < a + 1) hc.congruence = false;
    }
    hc.derivative_integral = true;
    for (int k = 1; k <= D; ++k)
        if (s.c[k].scaled(static_cast<u64>(k) % R.modulus()).valuation() < a) hc.derivative_integral = false;
    if (checks) *checks = hc;
    if (!hc.congruence) throw Error("honda_log: Honda congruence fails");
    if (!hc.derivative_integral) throw Error("honda_log: derivative is not integral");
    return s;
}

OkSeries honda_log_derivative(const FieldPtr& f, int n, int D) {
    const ZpRing& R = f->ring;
    const u64 p = R.p();
    const int N = R.precision();
    const UnramifiedElt zeta_t = zeta_frob(f, -(n + 1));
    OkSeries s;
    s.field = f;
    s.c.assign(D + 1, UnramifiedElt(f));
    s.c[0] = UnramifiedElt::scalar(f, 1);
    // (-1)^m p^m (X + zeta')^{p^{2m} - 1}
    for (int m = 1; m < N; ++m) {
        mpz_class P;
        mpz_ui_pow_ui(P.get_mpz_t(), p, 2 * static_cast<unsigned long>(m));
        P -= 1;
        const u64 Pmod = (p_power_mod(p, 2 * static_cast<u64>(m), f->zeta_order) + f->zeta_order - 1) % f->zeta_order;
        const u64 pm = R.p_pow(m);
        for (int k = 0; k <= D; ++k) {
            if (P < k) break;
            mpz_class C;
            mpz_bin_ui(C.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(k));
            u64 c = R.mul(mpz_mod_ring(C, R), pm);
            if (m % 2 == 1) c = R.neg(c);
            const i64 ord = static_cast<i64>(f->zeta_order);
            i64 ex = (static_cast<i64>(Pmod) - k) % ord;
            if (ex < 0) ex += ord;
            s.c[k] += zeta_t.pow(static_cast<u64>(ex)).scaled(c);
        }
    }
    return s;
}

LocalPoint local_point_log(const TowerPtr& t, int n) {
    t->check_level(n);
    LocalPoint lp;
    lp.level = n;
    TowerElt v = TowerElt::from_unramified(t, n, epsilon_n(t->field, n));
    for (int m = 0; n - 2 * m >= 0; ++m) {
        TowerElt term = pi_n(t, n - 2 * m).embed(n).divided_by_p(m);
        if (m % 2 == 0)
            v += term;
        else
            v -= term;
    }
    lp.log_value = v;
    return lp;
}

IntegralityReport exp_e_log_g(const CurveParams& E, const FieldPtr& f, int n, int D) {
    auto A = honda_log_derivative(f, n, D).c;
    auto B = lift_series(reduce_series(invariant_differential(E, D), f->ring), f);
    return solve_ode(A, B, D, f);
}

IntegralityReport exp_g_log_e(const CurveParams& E, const FieldPtr& f, int n, int D) {
    auto A = lift_series(reduce_series(invariant_differential(E, D), f->ring), f);
    auto B = honda_log_derivative(f, n, D).c;
    return solve_ode(A, B, D, f);
}

UnramifiedElt eval_series(const OkSeries& s, const UnramifiedElt& x) {
    UnramifiedElt r(s.field);
    for (int k = s.degree_bound(); k >= 0; --k) r = r * x + s.c[k];
    return r;
}

TowerElt eval_series(const OkSeries& s, const TowerElt& x) {
    TowerElt r(x.tower(), x.level());
    for (int k = s.degree_bound(); k >= 0; --k) r = r * x + TowerElt::from_unramified(x.tower(), x.level(), s.c[k]);
    return r.divided_by_p(s.den_exp);
}

TowerElt eval_series(const ZpSeries& s, const TowerElt& x) {
    TowerElt r(x.tower(), x.level());
    for (int k = s.degree_bound(); k >= 0; --k) r = r * x + TowerElt::scalar(x.tower(), x.level(), static_cast<i64>(s.c[k]));
    return r;
}

TowerElt eval_bivariate(const BiSeries& F, const TowerElt& a, const TowerElt& b) {
    const int level = std::max(a.level(), b.level());
    TowerElt A = a.embed(level), B = b.embed(level);
    std::vector<TowerElt> bp{TowerElt::scalar(a.tower(), level, 1)};
    for (int j = 1; j <= F.D; ++j) bp.push_back(bp.back() * B);
    TowerElt r(a.tower(), level);
    for (int i = F.D; i >= 0; --i) {
        TowerElt row(a.tower(), level);
        for (int j = 0; i + j <= F.D; ++j)
            if (F.at(i, j) != 0) row += bp[j].times_scalar(F.at(i, j));
        r = r * A + row;
    }
    return r;
}

DirectPoint local_point_direct(const CurveParams& E, u64 p, int d, int target, int n, int D) {
    if (n < -1) throw std::invalid_argument("local_point_direct: level below -1");
    require_good_reduction(E, p);
    // Truncation: v(pi_n) = 1/((p-1)p^n); dropped terms of degree > D lose nothing
    // above floor((D+1) v(pi_n)) minus the log_E denominators.
    double vpi = 1.0;
    if (n >= 0) vpi = 1.0 / (static_cast<double>(p - 1) * std::pow(static_cast<double>(p), n));
    int trunc = static_cast<int>(std::floor((D + 1) * vpi + 1e-9));
    int worst_tail = trunc;
    for (int j = D + 1; j <= 4 * (D + 1); ++j)
        worst_tail = std::min(worst_tail, static_cast<int>(std::floor(j * vpi + 1e-9)) - vp_int(static_cast<u64>(j), p));
    trunc = worst_tail;
    if (trunc < target) throw InsufficientDegree("local_point_direct: degree " + std::to_string(D) + " reaches only " + std::to_string(trunc) + " digits");

    const int loss = vp_factorial(D, p);
    const int b = floor_log(static_cast<u64>(D), p);
    const int a = floor_log(static_cast<u64>(D), p) / 2 + 1;
    int Nw = target + loss + b + a + 2;
    {
        long double lim = std::log(static_cast<long double>(1ULL << 62)) / std::log(static_cast<long double>(p));
        if (Nw >= static_cast<int>(lim)) throw PrecisionExhausted("local_point_direct: working precision exceeds word size");
    }
    FieldPtr fw = build_unramified(p, d, Nw);
    TowerPtr tw = build_tower(fw, std::max(n, 0));
    const ZpRing& R = fw->ring;

    OkSeries lg = honda_log(fw, n, D);
    const UnramifiedElt eps = epsilon_n(fw, n);
    // eps_pre = eps - (log(x) - x): log(x) - x is integral on m_k
    UnramifiedElt x = eps;
    for (int it = 0; it < Nw + 2; ++it) {
        UnramifiedElt fx = eval_series(lg, x);
        UnramifiedElt diff = fx - x.scaled(R.p_pow(lg.den_exp));
        x = eps - div_p_pow(diff, lg.den_exp);
    }

    IntegralityReport h = exp_e_log_g(E, fw, n, D);
    if (!h.integral) throw Error("local_point_direct: exp_E o log_G is not integral");
    TowerElt hx = eval_series(h.series, TowerElt::from_unramified(tw, -1, x));
    TowerElt param = hx;
    if (n >= 0) {
        TowerElt hp = eval_series(h.series, pi_n(tw, n));
        BiSeries F = formal_group_law(E, D, R);
        param = eval_bivariate(F, hx.embed(n), hp);
    }
    // log_E with every coefficient scaled by p^b
    RatSeries l = formal_log(E, D);
    mpz_class pb;
    mpz_ui_pow_ui(pb.get_mpz_t(), p, static_cast<unsigned long>(b));
    ZpSeries ls{R, std::vector<u64>(D + 1, 0)};
    for (int k = 0; k <= D; ++k) {
        mpq_class q = l[k] * pb;
        mpz_class den = q.get_den();
        if (mpz_divisible_ui_p(den.get_mpz_t(), p)) throw Error("local_point_direct: log_E denominator exceeds p^b");
        ls.c[k] = R.mul(mpz_mod_ring(q.get_num(), R), R.inv(mpz_mod_ring(den, R)));
    }
    TowerElt logv = eval_series(ls, param).divided_by_p(b);

    DirectPoint out;
    out.point.level = n;
    out.point.log_value = logv;
    out.point.param_value = param;
    out.closed_form = local_point_log(tw, n);
    out.working_precision = Nw;
    out.effective_precision = std::min(Nw - std::max(loss, a) - b, trunc);
    if (out.effective_precision < target) throw InsufficientDegree("local_point_direct: effective precision below target");
    out.residual_valuation = (logv - out.closed_form.log_value).residual_valuation();
    out.matches = out.residual_valuation >= out.effective_precision;
    return out;
}

std::vector<TraceRow> verify_trace_relations(const TowerPtr& t, int n_max) {
    std::vector<TraceRow> rows;
    const int N = t->field->ring.precision();
    std::vector<TowerElt> logs;
    for (int n = -1; n <= n_max; ++n) logs.push_back(local_point_log(t, n).log_value);
    auto L = [&logs](int n) -> const TowerElt& { return logs[n + 1]; };
    {
        TowerElt e = L(-1);
        UnramifiedElt c = e.coord(0);
        TowerElt psi_e = TowerElt::from_unramified(t, -1, frobenius(c, 1) + frobenius(c, -1)).divided_by_p(e.den_exp());
        TowerElt r = trace(L(0), -1) + psi_e;
        TraceRow row;
        row.n = 0;
        row.relation = 2;
        row.residual_valuation = r.residual_valuation();
        row.floor = N;
        row.pass = row.residual_valuation >= row.floor;
        rows.push_back(row);
    }
    for (int n = 1; n <= n_max; ++n) {
        TowerElt r = trace(L(n), n - 1) + L(n - 2).embed(n - 1);
        TraceRow row;
        row.n = n;
        row.relation = 1;
        row.residual_valuation = r.residual_valuation();
        row.floor = N - (n + 1) / 2;
        row.pass = row.residual_valuation >= row.floor;
        rows.push_back(row);
    }
    return rows;
}

bool log_point_matches_pi_mod_lower(const TowerPtr& t, int n) {
    if (n < 0) return true;
    TowerElt diff = local_point_log(t, n).log_value - pi_n(t, n).embed(n);
    // k_{n-1} inside k_n is spanned by eta^i with p | i (k itself when n = 0)
    const int L = t->dim(n);
    const int d = t->d;
    const int N = t->field->ring.precision();
    for (int i = 0; i < L; ++i) {
        const bool lower = (n == 0) ? i == 0 : (i % static_cast<int>(t->p) == 0);
        if (lower) continue;
        for (int j = 0; j < d; ++j) {
            u64 c = diff.numerators()[static_cast<size_t>(i) * d + j];
            if (c != 0 && t->field->ring.val(c) < N) return false;
        }
    }
    return true;
}

TorsionReport torsion_free_check(const CurveParams& E, const TowerPtr& t, int n, int D, int samples, std::mt19937_64& rng) {
    const ZpRing& R = t->field->ring;
    BiSeries F = formal_group_law(E, D, R);
    ZpSeries mp = multiplication_series(F, static_cast<int>(R.p()));
    TorsionReport rep;
    rep.samples = samples;
    rep.min_valuation_pi = kValInf;
    const int e = t->ramification(n);
    rep.floor = static_cast<int>(std::floor(static_cast<double>(D + 1) / e));
    const TowerElt uni = n >= 0 ? pi_n(t, n) : TowerElt::scalar(t, -1, static_cast<i64>(R.p()));
    for (int s = 0; s < samples; ++s) {
        TowerElt u(t, n);
        do {
            for (auto& v : u.numerators()) v = rng() % R.modulus();
        } while (u.valuation_pi() != 0);
        TowerElt x = (uni.embed(n) * u);
        TowerElt y = eval_series(mp, x);
        if (y.residual_valuation() >= std::min(rep.floor, R.precision())) {
            ++rep.zero_results;
        } else {
            rep.min_valuation_pi = std::min(rep.min_valuation_pi, y.valuation_pi());
        }
    }
    return rep;
}

}  // namespace pmlab
