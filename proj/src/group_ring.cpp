#include "pmlab/group_ring.hpp"

#include <algorithm>

namespace pmlab {

// ---------------- GroupRingElt ----------------

GroupRingElt::GroupRingElt(ZpRing ring, int order) : ring_(ring), c_(order, 0) {
    if (order < 1) throw std::invalid_argument("GroupRingElt: order must be positive");
}

GroupRingElt GroupRingElt::one(ZpRing ring, int order) { return monomial(ring, order, 0, 1); }

GroupRingElt GroupRingElt::monomial(ZpRing ring, int order, int k, i64 coeff) {
    GroupRingElt g(ring, order);
    k %= order;
    if (k < 0) k += order;
    g.c_[k] = ring.reduce(coeff);
    return g;
}

GroupRingElt GroupRingElt::operator+(const GroupRingElt& o) const {
    GroupRingElt r(*this);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = ring_.add(c_[i], o.c_[i]);
    return r;
}

GroupRingElt GroupRingElt::operator-(const GroupRingElt& o) const {
    GroupRingElt r(*this);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = ring_.sub(c_[i], o.c_[i]);
    return r;
}

GroupRingElt GroupRingElt::operator-() const {
    GroupRingElt r(*this);
    for (auto& v : r.c_) v = ring_.neg(v);
    return r;
}

GroupRingElt GroupRingElt::operator*(const GroupRingElt& o) const {
    if (o.order() != order()) throw std::invalid_argument("GroupRingElt: order mismatch");
    const int m = order();
    GroupRingElt r(ring_, m);
    for (int i = 0; i < m; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < m; ++j) {
            if (o.c_[j] == 0) continue;
            int k = (i + j) % m;
            r.c_[k] = ring_.add(r.c_[k], ring_.mul(c_[i], o.c_[j]));
        }
    }
    return r;
}

GroupRingElt GroupRingElt::scaled(u64 s) const {
    GroupRingElt r(*this);
    for (auto& v : r.c_) v = ring_.mul(v, s);
    return r;
}

bool GroupRingElt::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

GroupRingElt phi_plus_phi_inv(int d, const ZpRing& ring) {
    return GroupRingElt::monomial(ring, d, 1) + GroupRingElt::monomial(ring, d, d - 1);
}

GroupRingElt alternating_square_sum(int d, const ZpRing& ring) {
    if (d % 2 != 0) throw std::invalid_argument("alternating_square_sum: d must be even");
    GroupRingElt a(ring, d);
    for (int i = 0; i < d / 2; ++i) a.coeffs()[2 * i] = ring.reduce(i % 2 == 0 ? 1 : -1);
    return a;
}

ZpMatrix multiplication_matrix(const GroupRingElt& x) {
    const int m = x.order();
    ZpMatrix M(x.ring(), m, m);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i) M.at(i, k) = x[((i - k) % m + m) % m];
    return M;
}

namespace {

using Fp = std::vector<i64>;  // coefficients in [0, p), low first

void fp_trim(Fp& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

i64 fp_inv(i64 a, i64 p) {
    ZpRing r(static_cast<u64>(p), 1);
    return static_cast<i64>(r.inv(static_cast<u64>(a)));
}

// a = q b + r over F_p
void fp_divmod(const Fp& a, const Fp& b, i64 p, Fp& q, Fp& r) {
    r = a;
    fp_trim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
    const i64 li = fp_inv(b.back(), p);
    while (r.size() >= b.size()) {
        i64 c = r.back() * li % p;
        size_t s = r.size() - b.size();
        q[s] = c;
        for (size_t i = 0; i < b.size(); ++i) r[s + i] = ((r[s + i] - c * b[i]) % p + p) % p;
        fp_trim(r);
    }
}

Fp fp_mul(const Fp& a, const Fp& b, i64 p) {
    if (a.empty() || b.empty()) return {};
    Fp c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    fp_trim(c);
    return c;
}

Fp fp_sub(Fp a, const Fp& b, i64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
    fp_trim(a);
    return a;
}

}  // namespace

UnitResult is_unit(const GroupRingElt& x) {
    const ZpRing& R = x.ring();
    const i64 p = static_cast<i64>(R.p());
    const int m = x.order();
    Fp a(m);
    for (int i = 0; i < m; ++i) a[i] = static_cast<i64>(x[i] % R.p());
    fp_trim(a);
    UnitResult res;
    if (a.empty()) return res;
    Fp f(m + 1, 0);
    f[0] = p - 1;
    f[m] = 1;
    // Extended Euclid: track s with s*a = r (mod f).
    Fp r0 = f, r1 = a, s0 = {}, s1 = {1};
    while (!r1.empty()) {
        Fp q, r;
        fp_divmod(r0, r1, p, q, r);
        Fp s = fp_sub(s0, fp_mul(q, s1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r0.size() != 1) return res;  // gcd with F^m - 1 is not constant
    const i64 g = fp_inv(r0[0], p);
    Fp quo, rem;
    fp_divmod(s0, f, p, quo, rem);
    GroupRingElt y(R, m);
    for (size_t i = 0; i < rem.size(); ++i) y.coeffs()[i] = static_cast<u64>(rem[i] * g % p);
    // Newton iteration y <- y (2 - x y) doubles the p-adic precision each step.
    const GroupRingElt two = GroupRingElt::one(R, m).scaled(2);
    for (int prec = 1; prec < R.precision(); prec *= 2) y = y * (two - x * y);
    res.unit = true;
    res.inverse = y;
    return res;
}

Annihilator annihilator(const GroupRingElt& x) {
    ZpMatrix K = kernel_basis(multiplication_matrix(x));
    Annihilator a;
    a.rank = K.cols();
    for (int j = 0; j < K.cols(); ++j) {
        GroupRingElt g(x.ring(), x.order());
        g.coeffs() = K.column(j);
        a.generators.push_back(g);
    }
    return a;
}

// ---------------- integer polynomials ----------------

void trim(IntPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const IntPoly& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[i] != 0) return i;
    return -1;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    trim(c);
    return c;
}

IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
    IntPoly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    trim(c);
    return c;
}

IntPoly poly_sub(const IntPoly& a, const IntPoly& b) {
    IntPoly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    trim(c);
    return c;
}

IntPoly poly_x() { return {0, 1}; }

IntPoly poly_const(long c) {
    IntPoly a{mpz_class(c)};
    trim(a);
    return a;
}

IntPoly one_plus_x_pow(const mpz_class& k) {
    const unsigned long n = k.get_ui();
    IntPoly a(n + 1);
    mpz_class b = 1;
    for (unsigned long i = 0; i <= n; ++i) {
        a[i] = b;
        b = b * (n - i) / (i + 1);
    }
    return a;
}

IntPoly cyclotomic_shifted(u64 p, int m) {
    if (m < 1) throw std::invalid_argument("cyclotomic_shifted: m must be at least 1");
    mpz_class step;
    mpz_ui_pow_ui(step.get_mpz_t(), p, static_cast<unsigned long>(m - 1));
    const unsigned long s = step.get_ui();
    IntPoly acc;
    for (u64 i = 0; i < p; ++i) acc = poly_add(acc, one_plus_x_pow(mpz_class(static_cast<unsigned long>(i * s))));
    return acc;
}

OmegaFamily omega_family(u64 p, int n) {
    if (n < 0) throw std::invalid_argument("omega_family: n must be non-negative");
    OmegaFamily f;
    f.n = n;
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), p, static_cast<unsigned long>(n));
    f.omega = poly_sub(one_plus_x_pow(pn), poly_const(1));
    f.plus_tilde = poly_const(1);
    f.minus_tilde = poly_const(1);
    for (int m = 1; m <= n; ++m) {
        f.cyclotomic.push_back(cyclotomic_shifted(p, m));
        IntPoly& target = (m % 2 == 0) ? f.plus_tilde : f.minus_tilde;
        target = poly_mul(target, f.cyclotomic.back());
    }
    f.plus = poly_mul(poly_x(), f.plus_tilde);
    f.minus = poly_mul(poly_x(), f.minus_tilde);
    if (poly_mul(f.minus_tilde, f.plus) != f.omega || poly_mul(f.plus_tilde, f.minus) != f.omega)
        throw Error("omega_family: factorisation identity failed");
    return f;
}

QValues q_values(u64 p, int n) {
    if (n < -1) throw std::invalid_argument("q_values: n must be at least -1");
    auto q = [p](int k) -> i64 {
        if (k < 0) return 0;
        i64 s = 0, pw = 1;
        for (int i = 0; i <= k; ++i) {
            s += ((k - i) % 2 == 0 ? 1 : -1) * pw;
            pw *= static_cast<i64>(p);
        }
        return s;
    };
    QValues v;
    v.q = q(n);
    if (n < 0) return v;
    v.plus = (n % 2 == 0) ? q(n) : q(n - 1);
    v.minus = (n % 2 == 1) ? q(n) : q(n - 1);
    i64 pn = 1;
    for (int i = 0; i < n; ++i) pn *= static_cast<i64>(p);
    if (v.plus + v.minus != pn) throw Error("q_values: q_n^+ + q_n^- != p^n");
    return v;
}

// ---------------- characters ----------------

u64 character_value(const ZpRing& ring, int index, u64 a) {
    return ring.pow(teichmuller(a % ring.p(), ring), static_cast<u64>(index));
}

std::vector<CharIdempotent> idempotents(const ZpRing& ring) {
    const u64 p = ring.p();
    const int m = static_cast<int>(p - 1);
    const u64 g = primitive_root(p);
    const u64 inv_m = ring.inv(p - 1);
    std::vector<CharIdempotent> out;
    for (int j = 0; j < m; ++j) {
        CharIdempotent e;
        e.index = j;
        e.element = GroupRingElt(ring, m);
        u64 a = 1;  // g^k mod p
        for (int k = 0; k < m; ++k) {
            u64 val = ring.mul(character_value(ring, j, a), inv_m);
            int slot = (m - k) % m;  // sigma^{-1}
            e.element.coeffs()[slot] = ring.add(e.element.coeffs()[slot], val);
            a = a * g % p;
        }
        out.push_back(std::move(e));
    }
    return out;
}

int delta_of(int d, int chi_index) { return (d % 4 == 0 && chi_index == 0) ? 2 : 0; }

// ---------------- GRPoly ----------------

GRPoly GRPoly::from_int(const IntPoly& f, const ZpRing& ring, int order) {
    GRPoly g;
    mpz_class mod(static_cast<unsigned long>(ring.modulus()));
    for (const auto& c : f) {
        mpz_class r = c % mod;
        if (r < 0) r += mod;
        GroupRingElt e(ring, order);
        e.coeffs()[0] = r.get_ui();
        g.c.push_back(e);
    }
    g.trim();
    return g;
}

GRPoly GRPoly::constant(const GroupRingElt& e) {
    GRPoly g;
    g.c.push_back(e);
    g.trim();
    return g;
}

void GRPoly::trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

int GRPoly::degree() const {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (!c[i].is_zero()) return i;
    return -1;
}

}  // namespace pmlab
