#include "pmlab/tower.hpp"

#include <algorithm>
#include <numeric>

namespace pmlab {

int TowerDesc::dim(int n) const {
    if (n < 0) return 1;
    return static_cast<int>((p - 1) * p_power(n));
}

u64 TowerDesc::root_order(int n) const { return p_power(n + 1); }

u64 TowerDesc::p_power(int e) const {
    u64 r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

void TowerDesc::check_level(int n) const {
    if (n > n_max) throw LevelOverflow("level " + std::to_string(n) + " exceeds tower height " + std::to_string(n_max));
}

TowerPtr build_tower(FieldPtr field, int n_max) {
    if (n_max < -1) throw std::invalid_argument("build_tower: n_max must be at least -1");
    auto t = std::make_shared<TowerDesc>();
    t->field = std::move(field);
    t->n_max = n_max;
    t->p = t->field->ring.p();
    t->d = t->field->d;
    if (t->dim(n_max) * t->d > 200000) throw std::invalid_argument("build_tower: tower too large");
    return t;
}

namespace {

// Reduce a length p^{n+1} exponent array modulo Phi_{p^{n+1}} into a TowerElt.
void fold_into(const TowerDesc& t, int n, std::vector<u64>& full, std::vector<u64>& out) {
    const int d = t.d;
    const ZpRing& R = t.field->ring;
    const int pn = static_cast<int>(t.p_power(n));
    const int L = t.dim(n);
    for (int r = 0; r < pn; ++r) {
        const u64* c = &full[(L + r) * d];
        for (int j = 0; j < d; ++j) {
            if (c[j] == 0) continue;
            for (int i = 0; i < static_cast<int>(t.p) - 1; ++i) {
                u64& dst = full[(i * pn + r) * d + j];
                dst = R.sub(dst, c[j]);
            }
        }
    }
    out.assign(full.begin(), full.begin() + static_cast<long>(L) * d);
}

}  // namespace

// ---------------- TowerElt ----------------

TowerElt::TowerElt(TowerPtr t, int level) : t_(std::move(t)), level_(level) {
    if (level < -1) throw std::invalid_argument("TowerElt: level below -1");
    t_->check_level(level);
    c_.assign(static_cast<size_t>(t_->dim(level)) * t_->d, 0);
}

TowerElt TowerElt::from_unramified(TowerPtr t, int level, const UnramifiedElt& x) {
    TowerElt r(std::move(t), level);
    std::copy(x.coeffs().begin(), x.coeffs().end(), r.c_.begin());
    return r;
}

TowerElt TowerElt::scalar(TowerPtr t, int level, i64 a) {
    TowerElt r(std::move(t), level);
    r.c_[0] = r.t_->field->ring.reduce(a);
    return r;
}

TowerElt TowerElt::eta_pow(TowerPtr t, int level, i64 k) {
    TowerElt r(t, level);
    if (level < 0) {
        r.c_[0] = 1;
        return r;
    }
    const i64 P = static_cast<i64>(t->root_order(level));
    k %= P;
    if (k < 0) k += P;
    std::vector<u64> full(static_cast<size_t>(P) * t->d, 0);
    full[static_cast<size_t>(k) * t->d] = 1;
    fold_into(*t, level, full, r.c_);
    return r;
}

UnramifiedElt TowerElt::coord(int i) const {
    const int d = t_->d;
    return UnramifiedElt(t_->field, std::vector<u64>(c_.begin() + i * d, c_.begin() + (i + 1) * d));
}

void TowerElt::set_coord(int i, const UnramifiedElt& x) {
    std::copy(x.coeffs().begin(), x.coeffs().end(), c_.begin() + i * t_->d);
}

TowerElt TowerElt::operator+(const TowerElt& o) const {
    const int lvl = std::max(level_, o.level_);
    const int a = std::max(den_, o.den_);
    TowerElt x = embed(lvl).with_den(a);
    TowerElt y = o.embed(lvl).with_den(a);
    const ZpRing& R = t_->field->ring;
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] = R.add(x.c_[i], y.c_[i]);
    return x;
}

TowerElt TowerElt::operator-(const TowerElt& o) const { return *this + (-o); }

TowerElt TowerElt::operator-() const {
    TowerElt r(*this);
    const ZpRing& R = t_->field->ring;
    for (auto& v : r.c_) v = R.neg(v);
    return r;
}

TowerElt TowerElt::operator*(const TowerElt& o) const {
    const int lvl = std::max(level_, o.level_);
    if (level_ != lvl) return embed(lvl) * o;
    if (o.level_ != lvl) return *this * o.embed(lvl);
    const FieldDesc& F = *t_->field;
    const int d = t_->d;
    TowerElt r(t_, lvl);
    r.den_ = den_ + o.den_;
    if (lvl < 0) {
        field_mul_acc(F, c_.data(), o.c_.data(), r.c_.data());
        return r;
    }
    const int L = t_->dim(lvl);
    const size_t P = t_->root_order(lvl);
    std::vector<u64> full(P * d, 0);
    std::vector<int> nz_a, nz_b;
    for (int i = 0; i < L; ++i) {
        bool za = true, zb = true;
        for (int j = 0; j < d; ++j) {
            za = za && c_[i * d + j] == 0;
            zb = zb && o.c_[i * d + j] == 0;
        }
        if (!za) nz_a.push_back(i);
        if (!zb) nz_b.push_back(i);
    }
    for (int i : nz_a)
        for (int k : nz_b) {
            size_t idx = (static_cast<size_t>(i + k) % P) * d;
            field_mul_acc(F, &c_[i * d], &o.c_[k * d], &full[idx]);
        }
    fold_into(*t_, lvl, full, r.c_);
    return r;
}

TowerElt TowerElt::times(const UnramifiedElt& s) const {
    TowerElt r(t_, level_);
    r.den_ = den_;
    const int d = t_->d;
    for (int i = 0; i < dim(); ++i) field_mul_acc(*t_->field, &c_[i * d], s.coeffs().data(), &r.c_[i * d]);
    return r;
}

TowerElt TowerElt::times_scalar(u64 s) const {
    TowerElt r(*this);
    const ZpRing& R = t_->field->ring;
    for (auto& v : r.c_) v = R.mul(v, s);
    return r;
}

TowerElt TowerElt::pow(u64 e) const {
    TowerElt r = scalar(t_, level_, 1);
    TowerElt b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

TowerElt TowerElt::divided_by_p(int e) const {
    TowerElt r(*this);
    r.den_ += e;
    return r;
}

TowerElt TowerElt::with_den(int a) const {
    if (a < den_) throw std::invalid_argument("TowerElt::with_den: cannot lower the denominator");
    if (a == den_) return *this;
    TowerElt r(*this);
    const ZpRing& R = t_->field->ring;
    u64 s = R.p_pow(a - den_);
    for (auto& v : r.c_) v = R.mul(v, s);
    r.den_ = a;
    return r;
}

TowerElt TowerElt::embed(int level) const {
    if (level == level_) return *this;
    if (level < level_) throw std::invalid_argument("TowerElt::embed: target level below source");
    TowerElt r(t_, level);
    r.den_ = den_;
    const int d = t_->d;
    if (level_ < 0) {
        std::copy(c_.begin(), c_.end(), r.c_.begin());
        return r;
    }
    const int stride = static_cast<int>(t_->p_power(level - level_));
    for (int i = 0; i < dim(); ++i)
        std::copy(c_.begin() + i * d, c_.begin() + (i + 1) * d, r.c_.begin() + i * stride * d);
    return r;
}

bool TowerElt::numerator_is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

int TowerElt::precision_floor() const { return t_->field->ring.precision() - den_; }

int TowerElt::residual_valuation() const {
    const ZpRing& R = t_->field->ring;
    int v = R.precision();
    for (u64 x : c_) v = std::min(v, R.val(x));
    return v - den_;
}

int TowerElt::valuation_pi() const {
    const ZpRing& R = t_->field->ring;
    const int d = t_->d;
    const int L = dim();
    const int e = t_->ramification(level_);
    // Taylor shift eta = 1 + pi by Horner's rule.
    std::vector<u64> s(static_cast<size_t>(L) * d, 0);
    for (int i = L - 1; i >= 0; --i) {
        for (int k = L - 1; k >= 1; --k)
            for (int j = 0; j < d; ++j) s[k * d + j] = R.add(s[k * d + j], s[(k - 1) * d + j]);
        for (int j = 0; j < d; ++j) s[j] = R.add(s[j], c_[i * d + j]);
    }
    long best = kValInf;
    for (int k = 0; k < L; ++k) {
        int v = kValInf;
        for (int j = 0; j < d; ++j) v = std::min(v, R.val(s[k * d + j]));
        if (v == kValInf) continue;
        best = std::min(best, static_cast<long>(v) * e + k);
    }
    if (best == kValInf) return kValInf;
    return static_cast<int>(best - static_cast<long>(den_) * e);
}

// ---------------- Galois action and traces ----------------

UnramifiedElt zeta_frob(const FieldPtr& f, i64 k) {
    UnramifiedElt z = UnramifiedElt::zeta_pow(f, 1);
    return frobenius(z, k);
}

TowerElt galois_act(u64 u, i64 f, const TowerElt& x) {
    const TowerDesc& t = *x.tower();
    if (u % t.p == 0) throw std::invalid_argument("galois_act: u must be prime to p");
    const int d = t.d;
    const FieldDesc& F = *t.field;
    int e = static_cast<int>(((f % d) + d) % d);
    TowerElt r(x.tower(), x.level());
    r = r.divided_by_p(x.den_exp());
    if (x.level() < 0) {
        field_frob_apply(F, e, x.numerators().data(), r.numerators().data());
        return r;
    }
    const size_t P = t.root_order(x.level());
    u %= P;
    std::vector<u64> full(P * d, 0);
    std::vector<u64> tmp(d);
    const ZpRing& R = F.ring;
    for (int i = 0; i < x.dim(); ++i) {
        const u64* src = &x.numerators()[i * d];
        if (std::all_of(src, src + d, [](u64 v) { return v == 0; })) continue;
        field_frob_apply(F, e, src, tmp.data());
        size_t idx = static_cast<size_t>((u128)i * u % P) * d;
        for (int j = 0; j < d; ++j) full[idx + j] = R.add(full[idx + j], tmp[j]);
    }
    fold_into(t, x.level(), full, r.numerators());
    return r;
}

std::vector<u64> relative_galois_units(const TowerDesc& t, int n, int m) {
    std::vector<u64> units;
    if (n < 0) return {1};
    const u64 P = t.root_order(n);
    if (m < 0) {
        for (u64 u = 1; u < P; ++u)
            if (u % t.p != 0) units.push_back(u);
        return units;
    }
    const u64 step = t.root_order(m);
    for (u64 u = 1; u < P; u += step) units.push_back(u);
    return units;
}

TowerElt descend(const TowerElt& x, int m) {
    const TowerDesc& t = *x.tower();
    const int n = x.level();
    if (m == n) return x;
    if (m > n) throw std::invalid_argument("descend: target above source level");
    const int d = t.d;
    TowerElt r(x.tower(), m);
    r = r.divided_by_p(x.den_exp());
    const int stride = m < 0 ? x.dim() : static_cast<int>(t.p_power(n - m));
    for (int i = 0; i < x.dim(); ++i) {
        const u64* src = &x.numerators()[i * d];
        if (i % stride == 0) {
            std::copy(src, src + d, r.numerators().begin() + (i / stride) * d);
        } else if (!std::all_of(src, src + d, [](u64 v) { return v == 0; })) {
            throw Error("descend: element does not lie in the requested subfield");
        }
    }
    return r;
}

TowerElt trace(const TowerElt& x, int m) {
    const int n = x.level();
    if (m > n) throw std::invalid_argument("trace: target level above source");
    if (m == n) return x;
    TowerElt acc(x.tower(), n);
    acc = acc.divided_by_p(x.den_exp());
    for (u64 u : relative_galois_units(*x.tower(), n, m)) acc += galois_act(u, 0, x);
    return descend(acc, m);
}

TowerElt pi_n(const TowerPtr& t, int n) {
    t->check_level(n);
    if (n <= -1) return TowerElt(t, -1);
    TowerElt eta = TowerElt::eta_pow(t, n, 1);
    TowerElt one = TowerElt::scalar(t, n, 1);
    return (eta - one).times(zeta_frob(t->field, -(n + 1)));
}

IterateReport check_g_iterate(const TowerPtr& t, int n, int m) {
    if (m < 0) throw std::invalid_argument("check_g_iterate: m must be non-negative");
    const int lvl = std::max(n, -1);
    UnramifiedElt z = zeta_frob(t->field, -(n + 1));
    u64 pm = t->p_power(m);
    TowerElt zt = TowerElt::from_unramified(t, lvl, z);
    TowerElt lhs = (pi_n(t, n).embed(lvl) + zt).pow(pm) - TowerElt::from_unramified(t, lvl, z.pow(pm));
    TowerElt rhs = n - m >= -1 ? pi_n(t, n - m).embed(lvl) : TowerElt(t, lvl);
    TowerElt diff = lhs - rhs;
    IterateReport rep;
    rep.residual_valuation = diff.residual_valuation();
    rep.floor = diff.precision_floor();
    rep.equal = rep.residual_valuation >= rep.floor;
    return rep;
}

}  // namespace pmlab
