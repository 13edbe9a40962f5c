#include "pmlab/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "pmlab/group_ring.hpp"

namespace pmlab {

int max_precision(u64 p) {
    // largest N with p^N < 2^62
    int N = 0;
    u128 q = 1;
    while (q * p < (static_cast<u128>(1) << 62)) {
        q *= p;
        ++N;
    }
    return N;
}

Lattice::Lattice(TowerPtr t, int level, ZpMatrix gens, int den_exp)
    : t_(std::move(t)), level_(level), den_(den_exp), gens_(std::move(gens)) {}

Lattice Lattice::from_elements(const TowerPtr& t, int level, const std::vector<TowerElt>& xs) {
    int den = 0;
    for (auto& x : xs) den = std::max(den, x.den_exp());
    const int rows = t->dim(level) * t->d;
    std::vector<std::vector<u64>> cols;
    cols.reserve(xs.size());
    for (auto& x : xs) cols.push_back(x.embed(level).with_den(den).numerators());
    if (cols.empty()) return Lattice(t, level, ZpMatrix(t->field->ring, rows, 0), den);
    return Lattice(t, level, ZpMatrix::from_columns(t->field->ring, rows, cols), den);
}

SnfResult Lattice::snf_result() const { return snf(gens_); }

int Lattice::rank() const {
    if (gens_.cols() == 0) return 0;
    SnfResult s = snf(gens_);
    if (s.ambiguous) throw PrecisionExhausted("Lattice::rank: diagonal entry within the precision margin");
    return s.rank;
}

Lattice Lattice::with_den(int a) const {
    if (a < den_) throw std::invalid_argument("Lattice::with_den: cannot lower the denominator");
    if (a == den_) return *this;
    ZpMatrix g = gens_;
    const ZpRing& R = g.ring();
    const u64 s = R.p_pow(a - den_);
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) g.at(i, j) = R.mul(g.at(i, j), s);
    return Lattice(t_, level_, std::move(g), a);
}

namespace {

std::pair<Lattice, Lattice> common(const Lattice& a, const Lattice& b) {
    if (a.level() != b.level()) throw std::invalid_argument("lattices live at different levels");
    const int den = std::max(a.den_exp(), b.den_exp());
    return {a.with_den(den), b.with_den(den)};
}

}  // namespace

bool Lattice::contains(const TowerElt& x) const {
    const int den = std::max(den_, x.den_exp());
    Lattice me = with_den(den);
    std::vector<u64> v = x.embed(level_).with_den(den).numerators();
    if (gens_.cols() == 0) {
        for (u64 c : v)
            if (c != 0) return false;
        return true;
    }
    return in_column_span(me.gens_, v);
}

bool Lattice::contains(const Lattice& o) const {
    auto [a, b] = common(*this, o);
    for (int j = 0; j < b.gens_.cols(); ++j) {
        std::vector<u64> v = b.gens_.column(j);
        if (a.gens_.cols() == 0) {
            if (std::any_of(v.begin(), v.end(), [](u64 c) { return c != 0; })) return false;
            continue;
        }
        if (!in_column_span(a.gens_, v)) return false;
    }
    return true;
}

Lattice Lattice::sum(const Lattice& o) const {
    auto [a, b] = common(*this, o);
    return Lattice(t_, level_, a.gens_.hcat(b.gens_), a.den_);
}

Lattice Lattice::intersection(const Lattice& o) const {
    auto [a, b] = common(*this, o);
    const ZpRing& R = a.gens_.ring();
    if (a.gens_.cols() == 0 || b.gens_.cols() == 0) return Lattice(t_, level_, ZpMatrix(R, a.gens_.rows(), 0), a.den_);
    ZpMatrix nb = b.gens_;
    for (int i = 0; i < nb.rows(); ++i)
        for (int j = 0; j < nb.cols(); ++j) nb.at(i, j) = R.neg(nb.at(i, j));
    ZpMatrix K = kernel_basis(a.gens_.hcat(nb));
    // A x for each kernel vector (x, y)
    ZpMatrix X(R, a.gens_.cols(), K.cols());
    for (int i = 0; i < a.gens_.cols(); ++i)
        for (int j = 0; j < K.cols(); ++j) X.at(i, j) = K.at(i, j);
    return Lattice(t_, level_, a.gens_ * X, a.den_);
}

Lattice Lattice::embedded(int level) const {
    std::vector<TowerElt> xs;
    for (int j = 0; j < gens_.cols(); ++j) {
        TowerElt x(t_, level_);
        x.numerators() = gens_.column(j);
        xs.push_back(x.divided_by_p(den_));
    }
    Lattice r = from_elements(t_, level, xs);
    return r.with_den(std::max(r.den_exp(), den_));
}

Lattice Lattice::projected(const std::vector<int>& rows) const {
    ZpMatrix g(gens_.ring(), static_cast<int>(rows.size()), gens_.cols());
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < gens_.cols(); ++j) g.at(static_cast<int>(i), j) = gens_.at(rows[i], j);
    return Lattice(t_, level_, std::move(g), den_);
}

TowerElt apply_idempotent(const TowerElt& x, int chi_index) {
    const TowerDesc& t = *x.tower();
    if (x.level() < 0) return chi_index == 0 ? x : TowerElt(x.tower(), -1).divided_by_p(x.den_exp());
    const ZpRing& R = t.field->ring;
    auto es = idempotents(R);
    const GroupRingElt& e = es.at(static_cast<size_t>(chi_index)).element;
    const u64 g = primitive_root(t.p);
    ZpRing level_ring(t.p, x.level() + 1);
    TowerElt r = TowerElt(x.tower(), x.level()).divided_by_p(x.den_exp());
    u64 gk = 1;
    for (int k = 0; k < e.order(); ++k) {
        const u64 u = teichmuller(gk, level_ring);
        r += galois_act(u, 0, x).times_scalar(e[k]);
        gk = gk * g % t.p;
    }
    return r;
}

Lattice galois_span(const TowerPtr& t, const std::vector<TowerElt>& gens, int n, std::optional<int> chi) {
    std::vector<TowerElt> orbit;
    for (const TowerElt& x0 : gens) {
        const int m = x0.level();
        if (m > n) throw std::invalid_argument("galois_span: generator above the target level");
        TowerElt x = chi ? apply_idempotent(x0, *chi) : x0;
        // With a character the Delta part only rescales, so Gamma_m suffices.
        std::vector<u64> units = relative_galois_units(*t, m, chi ? 0 : -1);
        for (int f = 0; f < t->d; ++f)
            for (u64 u : units) orbit.push_back(galois_act(u, f, x).embed(n));
    }
    return Lattice::from_elements(t, n, orbit);
}

PointTable::PointTable(TowerPtr t) : t_(std::move(t)) {
    for (int m = -1; m <= t_->n_max; ++m) logs_.push_back(local_point_log(t_, m).log_value);
}

const TowerElt& PointTable::log_d(int m) const {
    if (m < -1 || m > t_->n_max) throw LevelOverflow("PointTable: level " + std::to_string(m) + " not built");
    return logs_[static_cast<size_t>(m + 1)];
}

Lattice norm_lattice(const PointTable& pts, int n, std::optional<int> chi) {
    const int level = std::max(n, -1);
    if (n <= -1) return galois_span(pts.tower(), {pts.log_d(-1)}, -1, chi);
    return galois_span(pts.tower(), {pts.log_d(n), pts.log_d(-1)}, level, chi);
}

Lattice norm_subgroup(const PointTable& pts, int n, Sign sign, std::optional<int> chi) {
    if (n < 0) throw std::invalid_argument("norm_subgroup: n must be non-negative");
    // d_n^+ is d_n or d_{n-1}, whichever has even index; d_n^- the odd one.
    const bool n_even = n % 2 == 0;
    const int m = (sign == Sign::Plus) == n_even ? n : n - 1;
    return galois_span(pts.tower(), {pts.log_d(m), pts.log_d(-1)}, n, chi);
}

Lattice full_lattice(const PointTable& pts, int n, std::optional<int> chi) {
    if (n <= -1) return galois_span(pts.tower(), {pts.log_d(-1)}, -1, chi);
    return galois_span(pts.tower(), {pts.log_d(n), pts.log_d(n - 1)}, n, chi);
}

Lattice maximal_ideal_lattice(const TowerPtr& t, int n) {
    std::vector<TowerElt> gens;
    if (n < 0) {
        for (int j = 0; j < t->d; ++j)
            gens.push_back(TowerElt::from_unramified(t, -1, UnramifiedElt::zeta_pow(t->field, j)).times_scalar(t->p));
        return Lattice::from_elements(t, -1, gens);
    }
    TowerElt pi = TowerElt::eta_pow(t, n, 1) - TowerElt::scalar(t, n, 1);
    for (int i = 0; i < t->dim(n); ++i)
        for (int j = 0; j < t->d; ++j)
            gens.push_back((pi * TowerElt::eta_pow(t, n, i)).times(UnramifiedElt::zeta_pow(t->field, j)));
    return Lattice::from_elements(t, n, gens);
}

int expected_norm_rank(u64 p, int d, int n, int chi) {
    if (n < 0) return chi == 0 ? d : 0;
    const int q = static_cast<int>(q_values(p, n).q);
    return (n % 2 == 1 && chi == 0) ? d * (q + 1) : d * q;
}

int expected_plus_rank(u64 p, int d, int n) { return d * static_cast<int>(q_values(p, n).plus); }

int expected_minus_rank(u64 p, int d, int n, int chi) {
    return d * static_cast<int>(q_values(p, n).minus) + (chi == 0 ? d : 0);
}

ExactSequenceReport check_exact_sequence(const PointTable& pts, int n) {
    ExactSequenceReport rep;
    rep.n = n;
    Lattice cn = norm_lattice(pts, n);
    Lattice cp_up = norm_lattice(pts, n - 1).embedded(n);
    Lattice s = cn.sum(cp_up);
    Lattice in = cn.intersection(cp_up);
    rep.rank_c_n = cn.rank();
    rep.rank_c_prev = cp_up.rank();
    rep.rank_sum = s.rank();
    rep.rank_intersection = in.rank();
    Lattice bottom = galois_span(pts.tower(), {pts.log_d(-1)}, n);
    rep.intersection_is_bottom = in.equals(bottom);
    rep.sum_is_full = s.equals(full_lattice(pts, n));
    rep.additive = rep.rank_sum + rep.rank_intersection == rep.rank_c_n + rep.rank_c_prev;
    rep.pass = rep.intersection_is_bottom && rep.sum_is_full && rep.additive && rep.rank_intersection == pts.tower()->d;
    return rep;
}

bool cyclicity_check(const PointTable& pts, int n) {
    Lattice span = galois_span(pts.tower(), {pts.log_d(n)}, n);
    return span.contains(pts.log_d(-1));
}

GenerationReport generation_check(const PointTable& pts, int n) {
    GenerationReport rep;
    const TowerPtr& t = pts.tower();
    Lattice dn = galois_span(t, {pts.log_d(n)}, n);
    Lattice lower_up = full_lattice(pts, n - 1).embedded(n);
    rep.points = dn.sum(lower_up).equals(full_lattice(pts, n));

    // coordinates of k_n not coming from k_{n-1}
    std::vector<int> rows;
    const int d = t->d;
    for (int i = 0; i < t->dim(n); ++i) {
        const bool low = n == 0 ? i == 0 : i % static_cast<int>(t->p) == 0;
        if (low) continue;
        for (int j = 0; j < d; ++j) rows.push_back(i * d + j);
    }
    Lattice pis = galois_span(t, {pi_n(t, n)}, n).projected(rows);
    Lattice mn = maximal_ideal_lattice(t, n).projected(rows);
    rep.uniformizer = pis.equals(mn);
    rep.log_matches_pi = log_point_matches_pi_mod_lower(t, n);
    return rep;
}

}  // namespace pmlab
