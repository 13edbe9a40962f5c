#include "pmlab/padic.hpp"

#include <algorithm>
#include <array>

namespace pmlab {

namespace {

constexpr int kMaxFieldDegree = 32;

// ---- polynomials over F_p (low degree first) ----

using FpPoly = std::vector<u64>;

void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

u64 fp_inv(u64 a, u64 p) {
    ZpRing r(p, 1);
    return r.inv(a);
}

FpPoly fp_mod(FpPoly a, const FpPoly& b, u64 p) {
    fp_trim(a);
    const size_t db = b.size() - 1;
    const u64 lead_inv = fp_inv(b.back(), p);
    while (a.size() > db) {
        u64 c = a.back() * lead_inv % p;
        size_t shift = a.size() - 1 - db;
        for (size_t i = 0; i <= db; ++i) a[shift + i] = (a[shift + i] + p * p - c * b[i] % p) % p;
        fp_trim(a);
    }
    return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, u64 p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return fp_mod(std::move(c), f, p);
}

FpPoly fp_powmod(FpPoly a, u64 e, const FpPoly& f, u64 p) {
    FpPoly r{1};
    r = fp_mod(r, f, p);
    a = fp_mod(a, f, p);
    while (e) {
        if (e & 1) r = fp_mulmod(r, a, f, p);
        a = fp_mulmod(a, a, f, p);
        e >>= 1;
    }
    return r;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, u64 p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

FpPoly fp_sub(FpPoly a, const FpPoly& b, u64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    fp_trim(a);
    return a;
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

u64 ipow(u64 b, int e) {
    u64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

bool fp_irreducible(const FpPoly& f, u64 p) {
    const int d = static_cast<int>(f.size()) - 1;
    const FpPoly x{0, 1};
    FpPoly xp = fp_powmod(x, ipow(p, d), f, p);
    if (!fp_sub(xp, fp_mod(x, f, p), p).empty()) return false;
    for (u64 q : prime_factors(static_cast<u64>(d))) {
        FpPoly y = fp_powmod(x, ipow(p, d / static_cast<int>(q)), f, p);
        FpPoly g = fp_gcd(f, fp_sub(y, fp_mod(x, f, p), p), p);
        if (g.size() > 1) return false;
    }
    return true;
}

int fp_rank(std::vector<std::vector<u64>> m, u64 p) {
    int rank = 0;
    const size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
        size_t piv = rank;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        u64 inv = fp_inv(m[rank][c], p);
        for (size_t r = 0; r < rows; ++r) {
            if (r == static_cast<size_t>(rank) || m[r][c] == 0) continue;
            u64 f = m[r][c] * inv % p;
            for (size_t k = 0; k < cols; ++k) m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
        }
        ++rank;
    }
    return rank;
}

// ---- Z/p^N[x]/(f) for a monic lift f ----

struct LiftRing {
    ZpRing ring;
    std::vector<u64> f;  // monic, size d+1
    int d;

    std::vector<u64> mul(const std::vector<u64>& a, const std::vector<u64>& b) const {
        std::vector<u64> t(2 * d - 1, 0);
        for (int i = 0; i < d; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < d; ++j) t[i + j] = ring.add(t[i + j], ring.mul(a[i], b[j]));
        }
        for (int k = 2 * d - 2; k >= d; --k) {
            u64 c = t[k];
            if (c == 0) continue;
            for (int j = 0; j < d; ++j) t[k - d + j] = ring.sub(t[k - d + j], ring.mul(c, f[j]));
        }
        t.resize(d);
        return t;
    }
    std::vector<u64> pow(std::vector<u64> a, u64 e) const {
        std::vector<u64> r(d, 0);
        r[0] = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
};

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

// ---------------- ZpRing ----------------

ZpRing::ZpRing(u64 p, int N) : p_(p), N_(N) {
    if (p < 2) throw std::invalid_argument("ZpRing: p must be at least 2");
    if (N < 1) throw std::invalid_argument("ZpRing: precision must be positive");
    u64 m = 1;
    for (int i = 0; i < N; ++i) {
        if (m > (u64{1} << 62) / p) throw std::invalid_argument("ZpRing: p^N exceeds 2^62");
        m *= p;
    }
    mod_ = m;
}

u64 ZpRing::reduce(i64 a) const {
    i64 m = static_cast<i64>(mod_);
    i64 r = a % m;
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

u64 ZpRing::pow(u64 a, u64 e) const {
    u64 r = 1 % mod_;
    a %= mod_;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

int ZpRing::val(u64 a) const {
    if (a == 0) return kValInf;
    int v = 0;
    while (a % p_ == 0) {
        a /= p_;
        ++v;
    }
    return v;
}

u64 ZpRing::inv(u64 a) const {
    if (!is_unit(a)) throw std::domain_error("ZpRing::inv: not a unit");
    // Extended Euclid on (a, p^N).
    i64 t0 = 0, t1 = 1;
    i64 r0 = static_cast<i64>(mod_), r1 = static_cast<i64>(a % mod_);
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    return reduce(t0);
}

u64 ZpRing::p_pow(int e) const {
    if (e >= N_) return 0;
    u64 r = 1;
    for (int i = 0; i < e; ++i) r *= p_;
    return r;
}

u64 ZpRing::div_p_pow(u64 a, int e) const {
    for (int i = 0; i < e; ++i) a /= p_;
    return a;
}

i64 ZpRing::signed_rep(u64 a) const {
    if (a > mod_ / 2) return static_cast<i64>(a) - static_cast<i64>(mod_);
    return static_cast<i64>(a);
}

// ---------------- Teichmuller ----------------

u64 teichmuller(u64 a, const ZpRing& ring) {
    if (a % ring.p() == 0) throw std::invalid_argument("teichmuller: argument divisible by p");
    u64 x = a % ring.modulus();
    for (int i = 0; i < ring.precision(); ++i) x = ring.pow(x, ring.p());
    return x;
}

PAdicInt teichmuller(const PAdicInt& a) {
    return PAdicInt::from_residue(a.ring(), teichmuller(a.value(), a.ring()));
}

u64 primitive_root(u64 p) {
    auto qs = prime_factors(p - 1);
    ZpRing r(p, 1);
    for (u64 g = 1; g < p; ++g) {
        bool ok = true;
        for (u64 q : qs)
            if (r.pow(g, (p - 1) / q) == 1) ok = false;
        if (ok) return g;
    }
    throw Error("primitive_root: none found");
}

// ---------------- build_unramified ----------------

FieldPtr build_unramified(u64 p, int d, int N) {
    if (p == 2) throw std::invalid_argument("build_unramified: p = 2 is not supported");
    if (!is_prime(p)) throw std::invalid_argument("build_unramified: p is not prime");
    if (d < 1 || d > kMaxFieldDegree) throw std::invalid_argument("build_unramified: degree out of range");

    auto fd = std::make_shared<FieldDesc>();
    fd->ring = ZpRing(p, N);
    fd->d = d;
    fd->zeta_order = ipow(p, d) - 1;
    const ZpRing& R = fd->ring;

    if (d == 1) {
        u64 tau = teichmuller(primitive_root(p), R);
        fd->modulus = {R.neg(tau), 1};
        fd->frob = {{1}};
        return fd;
    }

    // Search a monic irreducible f and a primitive normal element a of F_p[x]/f.
    const u64 q = ipow(p, d);
    const auto order_factors = prime_factors(q - 1);
    FpPoly f, a;
    bool found = false;
    for (u64 code = 0; code < q && !found; ++code) {
        FpPoly cand(d + 1, 0);
        u64 c = code;
        for (int i = 0; i < d; ++i) {
            cand[i] = c % p;
            c /= p;
        }
        cand[d] = 1;
        if (cand[0] == 0 || !fp_irreducible(cand, p)) continue;
        for (u64 ecode = 1; ecode < q && !found; ++ecode) {
            FpPoly e(d, 0);
            u64 t = ecode;
            for (int i = 0; i < d; ++i) {
                e[i] = t % p;
                t /= p;
            }
            bool primitive = true;
            for (u64 r : order_factors) {
                FpPoly y = fp_powmod(e, (q - 1) / r, cand, p);
                if (y.size() == 1 && y[0] == 1) {
                    primitive = false;
                    break;
                }
            }
            if (!primitive) continue;
            std::vector<std::vector<u64>> conj;
            FpPoly y = e;
            for (int i = 0; i < d; ++i) {
                FpPoly row = y;
                row.resize(d, 0);
                conj.push_back(row);
                y = fp_powmod(y, p, cand, p);
            }
            if (fp_rank(conj, p) != d) continue;
            f = cand;
            a = e;
            found = true;
        }
    }
    if (!found) throw Error("build_unramified: no primitive normal element found");

    LiftRing L{R, std::vector<u64>(f.begin(), f.end()), d};
    std::vector<u64> t(a.begin(), a.end());
    t.resize(d, 0);
    for (int i = 0; i < N; ++i) t = L.pow(t, q);

    // h(X) = prod_i (X - t^{p^i}); coefficients are elements of L, which must be scalars.
    std::vector<std::vector<u64>> h{std::vector<u64>(d, 0)};
    h[0][0] = 1;
    std::vector<u64> root = t;
    for (int i = 0; i < d; ++i) {
        std::vector<std::vector<u64>> next(h.size() + 1, std::vector<u64>(d, 0));
        for (size_t k = 0; k < h.size(); ++k) {
            for (int j = 0; j < d; ++j) next[k + 1][j] = R.add(next[k + 1][j], h[k][j]);
            auto prod = L.mul(h[k], root);
            for (int j = 0; j < d; ++j) next[k][j] = R.sub(next[k][j], prod[j]);
        }
        h = std::move(next);
        root = L.pow(root, p);
    }
    fd->modulus.assign(d + 1, 0);
    for (int k = 0; k <= d; ++k) {
        for (int j = 1; j < d; ++j)
            if (h[k][j] != 0) throw Error("build_unramified: minimal polynomial is not defined over Z_p");
        fd->modulus[k] = h[k][0];
    }

    fd->frob.assign(d, std::vector<u64>(d * d, 0));
    std::shared_ptr<const FieldDesc> partial = fd;
    for (int e = 0; e < d; ++e) {
        u64 pe = ipow(p, e);
        for (int j = 0; j < d; ++j) {
            u64 k = static_cast<u64>(j) * pe % fd->zeta_order;
            UnramifiedElt z = UnramifiedElt::zeta_pow(partial, static_cast<i64>(k));
            for (int i = 0; i < d; ++i) fd->frob[e][i * d + j] = z.coeffs()[i];
        }
    }
    return fd;
}

// ---------------- raw field helpers ----------------

void field_mul_acc(const FieldDesc& f, const u64* a, const u64* b, u64* out) {
    const int d = f.d;
    const ZpRing& R = f.ring;
    if (d == 1) {
        out[0] = R.add(out[0], R.mul(a[0], b[0]));
        return;
    }
    std::array<u64, 2 * kMaxFieldDegree> t{};
    for (int i = 0; i < d; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < d; ++j) t[i + j] = R.add(t[i + j], R.mul(a[i], b[j]));
    }
    for (int k = 2 * d - 2; k >= d; --k) {
        u64 c = t[k];
        if (c == 0) continue;
        for (int j = 0; j < d; ++j) t[k - d + j] = R.sub(t[k - d + j], R.mul(c, f.modulus[j]));
    }
    for (int i = 0; i < d; ++i) out[i] = R.add(out[i], t[i]);
}

void field_frob_apply(const FieldDesc& f, int e, const u64* a, u64* out) {
    const int d = f.d;
    e %= d;
    if (e < 0) e += d;
    if (e == 0) {
        std::copy(a, a + d, out);
        return;
    }
    const auto& M = f.frob[e];
    const ZpRing& R = f.ring;
    for (int i = 0; i < d; ++i) {
        u64 s = 0;
        for (int j = 0; j < d; ++j)
            if (a[j]) s = R.add(s, R.mul(M[i * d + j], a[j]));
        out[i] = s;
    }
}

// ---------------- UnramifiedElt ----------------

UnramifiedElt::UnramifiedElt(FieldPtr f) : f_(std::move(f)), c_(f_->d, 0) {}

UnramifiedElt::UnramifiedElt(FieldPtr f, std::vector<u64> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != f_->d) throw std::invalid_argument("UnramifiedElt: wrong number of coefficients");
    for (auto& x : c_) x %= f_->ring.modulus();
}

UnramifiedElt UnramifiedElt::scalar(FieldPtr f, i64 a) {
    UnramifiedElt x(f);
    x.c_[0] = f->ring.reduce(a);
    return x;
}

UnramifiedElt UnramifiedElt::zeta_pow(FieldPtr f, i64 k) {
    i64 ord = static_cast<i64>(f->zeta_order);
    k %= ord;
    if (k < 0) k += ord;
    UnramifiedElt z(f);
    if (f->d == 1) {
        z.c_[0] = f->ring.neg(f->modulus[0]);
    } else {
        z.c_[1] = 1;
    }
    return z.pow(static_cast<u64>(k));
}

UnramifiedElt UnramifiedElt::operator+(const UnramifiedElt& o) const {
    UnramifiedElt r(*this);
    r += o;
    return r;
}

UnramifiedElt UnramifiedElt::operator-(const UnramifiedElt& o) const {
    UnramifiedElt r(*this);
    r -= o;
    return r;
}

UnramifiedElt UnramifiedElt::operator-() const {
    UnramifiedElt r(f_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = f_->ring.neg(c_[i]);
    return r;
}

UnramifiedElt& UnramifiedElt::operator+=(const UnramifiedElt& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] = f_->ring.add(c_[i], o.c_[i]);
    return *this;
}

UnramifiedElt& UnramifiedElt::operator-=(const UnramifiedElt& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] = f_->ring.sub(c_[i], o.c_[i]);
    return *this;
}

UnramifiedElt UnramifiedElt::operator*(const UnramifiedElt& o) const {
    UnramifiedElt r(f_);
    field_mul_acc(*f_, c_.data(), o.c_.data(), r.c_.data());
    return r;
}

UnramifiedElt UnramifiedElt::scaled(u64 s) const {
    UnramifiedElt r(f_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = f_->ring.mul(c_[i], s);
    return r;
}

UnramifiedElt UnramifiedElt::pow(u64 e) const {
    UnramifiedElt r = scalar(f_, 1);
    UnramifiedElt b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool UnramifiedElt::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](u64 x) { return x == 0; });
}

int UnramifiedElt::valuation() const {
    int v = kValInf;
    for (u64 x : c_) v = std::min(v, f_->ring.val(x));
    return v;
}

UnramifiedElt frobenius(const UnramifiedElt& x, i64 power) {
    const FieldDesc& f = *x.field();
    i64 e = power % f.d;
    if (e < 0) e += f.d;
    UnramifiedElt r(x.field());
    field_frob_apply(f, static_cast<int>(e), x.coeffs().data(), r.coeffs().data());
    return r;
}

UnramifiedElt inverse(const UnramifiedElt& x) {
    const FieldDesc& f = *x.field();
    if (x.valuation() != 0) throw std::domain_error("inverse: not a unit of O_k");
    // x^{q-2} inverts x modulo p since x^{q-1} = 1 in the residue field.
    UnramifiedElt y = x.pow(f.zeta_order - 1);
    UnramifiedElt two = UnramifiedElt::scalar(x.field(), 2);
    for (int prec = 1; prec < f.ring.precision(); prec *= 2) y = y * (two - x * y);
    return y;
}

}  // namespace pmlab
