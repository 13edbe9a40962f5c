#include "pmlab/lambda.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>

#include "pmlab/lattice.hpp"

namespace pmlab {

// ---------------- GRPoly arithmetic ----------------

namespace {

GroupRingElt rotate(const GroupRingElt& x, int a) {
    GroupRingElt r(x.ring(), x.order());
    const int d = x.order();
    for (int k = 0; k < d; ++k) r.coeffs()[(k + a) % d] = x[k];
    return r;
}

GRPoly rotate(const GRPoly& f, int a) {
    GRPoly r;
    for (const auto& c : f.c) r.c.push_back(rotate(c, a));
    return r;
}

GRPoly times_x(const GRPoly& f) {
    if (f.c.empty()) return f;
    GRPoly r;
    r.c.push_back(GroupRingElt(f.c[0].ring(), f.c[0].order()));
    r.c.insert(r.c.end(), f.c.begin(), f.c.end());
    return r;
}

bool same_poly(const GRPoly& a, const GRPoly& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return false;
    for (int i = 0; i <= da; ++i)
        if (!(a.c[i] == b.c[i])) return false;
    return true;
}

}  // namespace

GRPoly gr_add(const GRPoly& a, const GRPoly& b) {
    GRPoly r = a.c.size() >= b.c.size() ? a : b;
    const GRPoly& o = a.c.size() >= b.c.size() ? b : a;
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] = r.c[i] + o.c[i];
    r.trim();
    return r;
}

GRPoly gr_sub(const GRPoly& a, const GRPoly& b) {
    GRPoly nb;
    for (const auto& c : b.c) nb.c.push_back(-c);
    return gr_add(a, nb);
}

GRPoly gr_mul(const GRPoly& a, const GRPoly& b) {
    GRPoly r;
    if (a.c.empty() || b.c.empty()) return r;
    const GroupRingElt& z = a.c[0];
    r.c.assign(a.c.size() + b.c.size() - 1, GroupRingElt(z.ring(), z.order()));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

GRPoly gr_scalar(const ZpRing& ring, int d, i64 c) {
    return GRPoly::constant(GroupRingElt::monomial(ring, d, 0, c));
}

GRPoly gr_x_pow(const ZpRing& ring, int d, int k) {
    GRPoly r;
    r.c.assign(k + 1, GroupRingElt(ring, d));
    r.c[k] = GroupRingElt::one(ring, d);
    return r;
}

GRPoly gr_f_pow(const ZpRing& ring, int d, int k) {
    return GRPoly::constant(GroupRingElt::monomial(ring, d, ((k % d) + d) % d));
}

bool gr_is_monic(const GRPoly& f) {
    const int m = f.degree();
    if (m < 0) return false;
    return f.c[m] == GroupRingElt::one(f.c[m].ring(), f.c[m].order());
}

GRPoly gr_mod_monic(const GRPoly& a, const GRPoly& f) {
    const int m = f.degree();
    if (!gr_is_monic(f)) throw std::invalid_argument("gr_mod_monic: divisor is not monic");
    GRPoly r = a;
    r.trim();
    for (int k = r.degree(); k >= m; --k) {
        const GroupRingElt lead = r.c[k];
        if (lead.is_zero()) continue;
        for (int j = 0; j <= m; ++j) r.c[k - m + j] = r.c[k - m + j] - lead * f.c[j];
    }
    r.trim();
    return r;
}

// ---------------- presentations ----------------

Presentation Presentation::free_module(const ZpRing& ring, int d, int gens) {
    Presentation M;
    M.ring = ring;
    M.d = d;
    M.gens = gens;
    return M;
}

void Presentation::add_row(std::vector<GRPoly> row) {
    if (static_cast<int>(row.size()) != gens) throw std::invalid_argument("Presentation::add_row: wrong row length");
    for (auto& e : row) e.trim();
    rows.push_back(std::move(row));
}

void Presentation::kill(int i, const GRPoly& f) {
    std::vector<GRPoly> row(gens);
    row[i] = f;
    add_row(std::move(row));
}

Presentation Presentation::direct_sum(const Presentation& o) const {
    if (o.d != d) throw std::invalid_argument("Presentation::direct_sum: different group orders");
    Presentation r = free_module(ring, d, gens + o.gens);
    for (const auto& row : rows) {
        std::vector<GRPoly> x(r.gens);
        for (int i = 0; i < gens; ++i) x[i] = row[i];
        r.add_row(std::move(x));
    }
    for (const auto& row : o.rows) {
        std::vector<GRPoly> x(r.gens);
        for (int i = 0; i < o.gens; ++i) x[gens + i] = row[i];
        r.add_row(std::move(x));
    }
    return r;
}

std::string Presentation::describe() const {
    std::ostringstream os;
    os << "p=" << ring.p() << " d=" << d << " gens=" << gens << " relations:";
    for (const auto& row : rows) {
        os << " (";
        for (int i = 0; i < gens; ++i) {
            if (i) os << ", ";
            const GRPoly& f = row[i];
            if (f.degree() < 0) {
                os << "0";
                continue;
            }
            bool first = true;
            for (int c = 0; c <= f.degree(); ++c)
                for (int a = 0; a < d; ++a) {
                    const i64 v = ring.signed_rep(f.c[c][a]);
                    if (v == 0) continue;
                    if (!first) os << " + ";
                    first = false;
                    os << v;
                    if (a) os << "*F^" << a;
                    if (c) os << "*X^" << c;
                }
        }
        os << ")";
    }
    return os.str();
}

Presentation present_plus(const ZpRing& ring, int d, int n, int chi) {
    if (n < 0) throw std::invalid_argument("present_plus: n must be non-negative");
    OmegaFamily fam = omega_family(ring.p(), n);
    if (chi != 0) {
        Presentation M = Presentation::free_module(ring, d, 1);
        M.kill(0, GRPoly::from_int(fam.plus, ring, d));
        return M;
    }
    Presentation M = Presentation::free_module(ring, d, 2);
    GRPoly psi = GRPoly::constant(phi_plus_phi_inv(d, ring));
    M.add_row({GRPoly::from_int(fam.plus_tilde, ring, d), gr_sub(GRPoly(), psi)});
    // X (omega~^+, -psi) = (omega^+, 0) once X kills the second generator
    M.add_row({GRPoly::from_int(fam.plus, ring, d), GRPoly()});
    M.add_row({GRPoly(), gr_x_pow(ring, d, 1)});
    return M;
}

Presentation present_minus(const ZpRing& ring, int d, int n, int chi) {
    if (n < 0) throw std::invalid_argument("present_minus: n must be non-negative");
    OmegaFamily fam = omega_family(ring.p(), n);
    Presentation M = Presentation::free_module(ring, d, 1);
    M.kill(0, GRPoly::from_int(chi == 0 ? fam.minus : fam.minus_tilde, ring, d));
    return M;
}

Presentation coinvariants(const Presentation& M, int n) {
    Presentation r = M;
    GRPoly w = GRPoly::from_int(omega_family(M.ring.p(), n).omega, M.ring, M.d);
    for (int i = 0; i < M.gens; ++i) r.kill(i, w);
    return r;
}

namespace {

enum class OmegaPart { PlusTilde, MinusTilde };

// omega~_m^+ or omega~_m^- as a polynomial in T = 1+X modulo T^{p^n} - 1, then in X.
GRPoly omega_part_mod(const ZpRing& ring, int d, int m, int n, OmegaPart part) {
    const u64 p = ring.p();
    u64 L = 1;
    for (int i = 0; i < n; ++i) L *= p;
    std::vector<u64> acc(L, 0);
    acc[0] = 1;
    u64 step = 1 % L;
    for (int j = 1; j <= m; ++j) {
        const bool even = j % 2 == 0;
        if ((part == OmegaPart::PlusTilde) == even) {
            // Phi_{p^j}(T) = sum_{i < p} T^{i p^{j-1}}
            std::vector<u64> next(L, 0);
            for (u64 k = 0; k < L; ++k) {
                if (!acc[k]) continue;
                for (u64 i = 0; i < p; ++i) {
                    const u64 idx = (k + (i * step) % L) % L;
                    next[idx] = ring.add(next[idx], acc[k]);
                }
            }
            acc = std::move(next);
        }
        step = step * p % L;
    }
    // sum_k acc[k] (1+X)^k, binomials by Pascal's rule
    std::vector<u64> out(L, 0), row(L, 0);
    row[0] = 1;
    for (u64 k = 0; k < L; ++k) {
        if (k > 0)
            for (u64 i = k; i > 0; --i) row[i] = ring.add(row[i], row[i - 1]);
        if (!acc[k]) continue;
        for (u64 i = 0; i <= k; ++i) out[i] = ring.add(out[i], ring.mul(acc[k], row[i]));
    }
    GRPoly f;
    for (u64 c : out) {
        GroupRingElt g(ring, d);
        g.coeffs()[0] = c;
        f.c.push_back(g);
    }
    f.trim();
    return f;
}

}  // namespace

Presentation present_coinvariants(const ZpRing& ring, int d, int m, int n, int chi, PmSign sign) {
    if (m < 0 || n < 0) throw std::invalid_argument("present_coinvariants: levels must be non-negative");
    GRPoly x = gr_x_pow(ring, d, 1);
    GRPoly wn = GRPoly::from_int(omega_family(ring.p(), n).omega, ring, d);
    auto times_x_mod = [&](const GRPoly& f) { return gr_mod_monic(gr_mul(x, f), wn); };
    Presentation M;
    if (sign == PmSign::Plus) {
        GRPoly tilde = omega_part_mod(ring, d, m, n, OmegaPart::PlusTilde);
        if (chi != 0) {
            M = Presentation::free_module(ring, d, 1);
            M.kill(0, times_x_mod(tilde));
        } else {
            M = Presentation::free_module(ring, d, 2);
            M.add_row({tilde, gr_sub(GRPoly(), GRPoly::constant(phi_plus_phi_inv(d, ring)))});
            M.add_row({times_x_mod(tilde), GRPoly()});
            M.add_row({GRPoly(), x});
        }
    } else {
        GRPoly tilde = omega_part_mod(ring, d, m, n, OmegaPart::MinusTilde);
        M = Presentation::free_module(ring, d, 1);
        M.kill(0, chi == 0 ? times_x_mod(tilde) : tilde);
    }
    for (int i = 0; i < M.gens; ++i) M.kill(i, wn);
    return M;
}

Presentation truncated(const Presentation& M, int k) {
    Presentation r = M;
    for (int i = 0; i < M.gens; ++i) r.kill(i, gr_x_pow(M.ring, M.d, k));
    return r;
}

// ---------------- flattening to Z_p ----------------

namespace {

// The quotient of R[X]^g by monic single-generator relations is Z_p-free with basis
// F^a X^c e_i, c < deg f_i; the remaining relations become Z_p-columns on it.
struct Flat {
    ZpRing ring;
    int d = 1;
    std::vector<GRPoly> killer;
    std::vector<int> off;
    int B = 0;
    int span = 0;  // degree of the product of the distinct killers
    ZpMatrix rel;

    int block(int i) const { return d * killer[i].degree(); }

    std::vector<GRPoly> reduce(const std::vector<GRPoly>& v) const {
        std::vector<GRPoly> r(v.size());
        for (size_t i = 0; i < v.size(); ++i) r[i] = gr_mod_monic(v[i], killer[i]);
        return r;
    }

    std::vector<GRPoly> times_x_reduced(const std::vector<GRPoly>& v) const {
        std::vector<GRPoly> r(v.size());
        for (size_t i = 0; i < v.size(); ++i) r[i] = gr_mod_monic(times_x(v[i]), killer[i]);
        return r;
    }

    // v must already be reduced.
    std::vector<u64> flatten(const std::vector<GRPoly>& v) const {
        std::vector<u64> out(B, 0);
        for (size_t i = 0; i < v.size(); ++i) {
            const GRPoly& f = v[i];
            for (int c = 0; c <= f.degree(); ++c)
                for (int a = 0; a < d; ++a) out[off[i] + c * d + a] = f.c[c][a];
        }
        return out;
    }

    // Columns F^a X^c v for a < d, c < count.
    void push_multiples(const std::vector<GRPoly>& v, int count, std::vector<std::vector<u64>>& cols) const {
        std::vector<GRPoly> cur = reduce(v);
        for (int c = 0; c < count; ++c) {
            for (int a = 0; a < d; ++a) {
                std::vector<GRPoly> w(cur.size());
                for (size_t i = 0; i < cur.size(); ++i) w[i] = rotate(cur[i], a);
                cols.push_back(flatten(w));
            }
            if (c + 1 < count) cur = times_x_reduced(cur);
        }
    }

    // The basis element F^a X^c e_i as a vector of polynomials.
    std::vector<GRPoly> basis_poly(int gens, int i, int c, int a) const {
        std::vector<GRPoly> v(gens);
        v[i] = gr_mul(gr_x_pow(ring, d, c), gr_f_pow(ring, d, a));
        return v;
    }
};

Flat flatten_presentation(const Presentation& M) {
    Flat F;
    F.ring = M.ring;
    F.d = M.d;
    F.killer.resize(M.gens);
    std::vector<bool> found(M.gens, false);
    for (const auto& row : M.rows) {
        int nz = -1, count = 0;
        for (int i = 0; i < M.gens; ++i)
            if (row[i].degree() >= 0) {
                nz = i;
                ++count;
            }
        if (count != 1 || !gr_is_monic(row[nz])) continue;
        if (!found[nz] || row[nz].degree() < F.killer[nz].degree()) {
            F.killer[nz] = row[nz];
            found[nz] = true;
        }
    }
    for (int i = 0; i < M.gens; ++i)
        if (!found[i])
            throw NotZpFinite("module_report: generator " + std::to_string(i) + " has no monic relation, X does not act nilpotently");
    std::vector<const GRPoly*> distinct;
    for (const auto& k : F.killer)
        if (std::none_of(distinct.begin(), distinct.end(), [&](const GRPoly* q) { return same_poly(*q, k); }))
            distinct.push_back(&k);
    for (const GRPoly* q : distinct) F.span += q->degree();
    for (int i = 0; i < M.gens; ++i) {
        F.off.push_back(F.B);
        F.B += F.block(i);
    }
    std::vector<std::vector<u64>> cols;
    for (const auto& row : M.rows) F.push_multiples(row, F.span, cols);
    F.rel = cols.empty() ? ZpMatrix(M.ring, F.B, 0) : ZpMatrix::from_columns(M.ring, F.B, cols);
    return F;
}

ModuleInvariants cokernel_of(const Flat& F) {
    if (F.B == 0) return {};
    if (F.rel.cols() == 0) return {F.B, {}};
    return cokernel_invariants(F.rel);
}

ModuleInvariants quotient_of(const ZpMatrix& L, const ZpMatrix& S) {
    if (L.rows() == 0 || L.cols() == 0) return {};
    if (S.cols() == 0) {
        SnfResult s = snf(L);
        if (s.ambiguous) throw PrecisionExhausted("quotient rank within precision margin");
        return {s.rank, {}};
    }
    return quotient_invariants(L, S);
}

ZpMatrix negated(const ZpMatrix& A) {
    ZpMatrix r = A;
    const ZpRing& R = A.ring();
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) r.at(i, j) = R.neg(r.at(i, j));
    return r;
}

ZpMatrix top_rows(const ZpMatrix& A, int rows) {
    ZpMatrix r(A.ring(), rows, A.cols());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < A.cols(); ++j) r.at(i, j) = A.at(i, j);
    return r;
}

// ker(X) on a module that is already finite over Z_p.
ModuleInvariants invariants_finite(const Presentation& M, const Flat& F) {
    if (F.B == 0) return {};
    std::vector<std::vector<u64>> xcols;
    for (int i = 0; i < M.gens; ++i)
        for (int c = 0; c < F.killer[i].degree(); ++c)
            for (int a = 0; a < M.d; ++a) xcols.push_back(F.flatten(F.times_x_reduced(F.basis_poly(M.gens, i, c, a))));
    ZpMatrix X = ZpMatrix::from_columns(M.ring, F.B, xcols);
    ZpMatrix sys = F.rel.cols() ? X.hcat(negated(F.rel)) : X;
    ZpMatrix K = top_rows(kernel_basis(sys), F.B);
    if (F.rel.cols()) K = K.hcat(F.rel);
    return quotient_of(K, F.rel);
}

// Image of ker(X on M/X^{k+1}) in M/X^k.
ModuleInvariants invariants_at(const Presentation& M, int k) {
    Flat F1 = flatten_presentation(truncated(M, k + 1));
    Flat F0 = flatten_presentation(truncated(M, k));
    if (F1.B == 0 || F0.B == 0) return {};
    std::vector<std::vector<u64>> xcols, pcols;
    for (int i = 0; i < M.gens; ++i)
        for (int c = 0; c < F1.killer[i].degree(); ++c)
            for (int a = 0; a < M.d; ++a) {
                auto v = F1.basis_poly(M.gens, i, c, a);
                xcols.push_back(F1.flatten(F1.times_x_reduced(v)));
                pcols.push_back(F0.flatten(F0.reduce(v)));
            }
    ZpMatrix X = ZpMatrix::from_columns(M.ring, F1.B, xcols);
    ZpMatrix P = ZpMatrix::from_columns(M.ring, F0.B, pcols);
    ZpMatrix sys = F1.rel.cols() ? X.hcat(negated(F1.rel)) : X;
    ZpMatrix K = top_rows(kernel_basis(sys), F1.B);
    ZpMatrix L = P * K;
    if (F0.rel.cols()) L = L.hcat(F0.rel);
    return quotient_of(L, F0.rel);
}

int max_entry_degree(const Presentation& M) {
    int total = 0;
    for (const auto& row : M.rows) {
        int m = 0;
        for (const auto& e : row) m = std::max(m, e.degree());
        total += m;
    }
    return total;
}

}  // namespace

ModuleReport module_report(const Presentation& M) {
    Flat F = flatten_presentation(M);
    ModuleInvariants inv = cokernel_of(F);
    ModuleReport r;
    r.rank = inv.rank;
    r.torsion = inv.torsion;
    r.ambient = F.B;
    return r;
}

FreenessVerdict freeness_test(const Presentation& M, int k0, int k_max) {
    FreenessVerdict v;
    v.coinvariants = module_report(truncated(M, 1)).invariants();
    std::optional<Flat> finite;
    try {
        finite = flatten_presentation(M);
    } catch (const NotZpFinite&) {
    }
    if (finite) {
        v.invariants = invariants_finite(M, *finite);
        v.no_finite_submodule = v.invariants.torsion.empty();
        v.is_free = v.invariants.rank == 0 && v.no_finite_submodule && v.coinvariants.torsion.empty();
        return v;
    }
    int k = std::min(std::max(k0, max_entry_degree(M) + 2), k_max);
    ModuleInvariants prev = invariants_at(M, k);
    for (;;) {
        if (k > k_max) throw PrecisionExhausted("freeness_test: invariants did not stabilise");
        ModuleInvariants cur = invariants_at(M, k + 2);
        if (cur == prev) break;
        prev = cur;
        k += 2;
    }
    v.invariants = prev;
    v.truncation = k;
    v.no_finite_submodule = prev.torsion.empty();
    v.is_free = prev.rank == 0 && prev.torsion.empty() && v.coinvariants.torsion.empty();
    return v;
}

// ---------------- closed forms ----------------

TorsionCheck torsion_closed_form_check(u64 p, int d, int m, int n, int N) {
    if (m <= n || (m - n) % 2 != 0) throw std::invalid_argument("torsion_closed_form_check: need m > n with m - n even");
    ZpRing ring(p, N);
    TorsionCheck r;
    r.d = d;
    r.m = m;
    r.n = n;
    r.measured = module_report(present_coinvariants(ring, d, m, n, 0, PmSign::Plus)).torsion;

    const int e = (m - n) / 2;
    Presentation Q = Presentation::free_module(ring, d, 1);
    Q.kill(0, GRPoly::from_int(omega_family(p, n).minus_tilde, ring, d));
    Q.kill(0, gr_scalar(ring, d, static_cast<i64>(ring.p_pow(e))));
    r.expected = module_report(Q).torsion;
    const int ann = annihilator(phi_plus_phi_inv(d, ring)).rank;
    for (int i = 0; i < ann; ++i) r.expected.push_back(e);
    std::sort(r.expected.begin(), r.expected.end());
    r.pass = r.measured == r.expected;
    return r;
}

RankLawRow coinvariant_rank_law(u64 p, int d, int n, int chi, PmSign sign, int N) {
    ZpRing ring(p, N);
    RankLawRow row;
    row.p = p;
    row.d = d;
    row.n = n;
    row.chi = chi;
    row.sign = sign;
    auto level = [&](int m) { return module_report(present_coinvariants(ring, d, m, n, chi, sign)); };
    ModuleReport a = level(n + 2), b = level(n + 4);
    row.stable = a.rank == b.rank && a.torsion.size() == b.torsion.size();
    row.rank = b.rank;
    if (row.stable)
        for (size_t i = 0; i < a.torsion.size(); ++i)
            if (b.torsion[i] > a.torsion[i]) ++row.growing_torsion;
    row.total = row.rank + row.growing_torsion;
    i64 pn = 1;
    for (int i = 0; i < n; ++i) pn *= static_cast<i64>(p);
    row.delta = row.total - d * static_cast<int>(pn);
    row.expected = d * static_cast<int>(pn) + (sign == PmSign::Plus ? delta_of(d, chi) : 0);
    row.pass = row.stable && row.total == row.expected;
    return row;
}

SupplementaryReport supplementary_structure_check(u64 p, int d, int chi, PmSign sign, int N) {
    ZpRing ring(p, N);
    SupplementaryReport r;
    r.d = d;
    r.chi = chi;
    r.sign = sign;
    r.delta = sign == PmSign::Plus ? delta_of(d, chi) : 0;

    // Lambda/X as R[X]/(X, F - 1), since R/(F - 1) = Z_p
    GRPoly f_minus_one = gr_sub(gr_f_pow(ring, d, 1), gr_scalar(ring, d, 1));
    auto lambda_mod = [&](const GRPoly& f) {
        Presentation Q = Presentation::free_module(ring, d, 1);
        Q.kill(0, f);
        Q.add_row({f_minus_one});
        return Q;
    };
    Presentation candidate = Presentation::free_module(ring, d, 1);
    for (int i = 0; i < r.delta; ++i) candidate = candidate.direct_sum(lambda_mod(gr_x_pow(ring, d, 1)));

    bool ok = true;
    for (int n = 0; n <= 2; ++n) {
        r.candidate_ranks.push_back(module_report(coinvariants(candidate, n)).rank);
        r.measured_totals.push_back(coinvariant_rank_law(p, d, n, chi, sign, N).total);
        ok = ok && r.candidate_ranks.back() == r.measured_totals.back();
        ok = ok && module_report(coinvariants(candidate, n)).torsion.empty();
    }
    FreenessVerdict fv = freeness_test(candidate);
    r.x_torsion_rank = fv.invariants.rank;
    ok = ok && r.x_torsion_rank == r.delta && fv.no_finite_submodule;

    if (r.delta > 0) {
        // one Lambda/X summand traded for the quotient by the other factor of omega_1
        IntPoly rest = omega_family(p, 1).cyclotomic[0];
        Presentation hybrid = Presentation::free_module(ring, d, 1)
                                  .direct_sum(lambda_mod(gr_x_pow(ring, d, 1)))
                                  .direct_sum(lambda_mod(GRPoly::from_int(rest, ring, d)));
        int mismatches = 0;
        for (int n = 0; n <= 1; ++n)
            if (module_report(coinvariants(hybrid, n)).rank != r.measured_totals[n]) ++mismatches;
        r.hybrid_rejected = mismatches > 0;
    }
    r.consistent = ok && r.hybrid_rejected;
    return r;
}

// ---------------- reference modules ----------------

std::vector<HandModule> reference_modules() {
    const ZpRing R(3, 20);
    std::vector<HandModule> out;
    auto X = [&](int d) { return gr_x_pow(R, d, 1); };
    auto c = [&](int d, i64 v) { return gr_scalar(R, d, v); };
    auto poly = [&](int d, std::vector<i64> co) {
        IntPoly f;
        for (i64 v : co) f.push_back(mpz_class(static_cast<long>(v)));
        return GRPoly::from_int(f, R, d);
    };
    auto cyclic = [&](int d, std::vector<GRPoly> kills) {
        Presentation M = Presentation::free_module(R, d, 1);
        for (auto& f : kills) M.kill(0, f);
        return M;
    };
    auto add = [&](std::string name, Presentation M, bool fr, bool nf) { out.push_back({std::move(name), std::move(M), fr, nf}); };

    add("Lambda", Presentation::free_module(R, 1, 1), true, true);
    add("Lambda^2", Presentation::free_module(R, 1, 2), true, true);
    add("Lambda^3", Presentation::free_module(R, 1, 3), true, true);
    add("Lambda/X", cyclic(1, {X(1)}), false, true);
    add("Lambda/p", cyclic(1, {c(1, 3)}), false, true);
    add("Lambda/(p,X)", cyclic(1, {c(1, 3), X(1)}), false, false);
    add("Lambda/X^2", cyclic(1, {poly(1, {0, 0, 1})}), false, true);
    add("Lambda/(X^2+3X+3)", cyclic(1, {poly(1, {3, 3, 1})}), false, true);
    add("Lambda + Lambda/X", Presentation::free_module(R, 1, 1).direct_sum(cyclic(1, {X(1)})), false, true);
    add("Lambda + Lambda/(p,X)", Presentation::free_module(R, 1, 1).direct_sum(cyclic(1, {c(1, 3), X(1)})), false, false);
    add("Lambda/p + Lambda/X", cyclic(1, {c(1, 3)}).direct_sum(cyclic(1, {X(1)})), false, true);
    add("Lambda/(p^2,X)", cyclic(1, {c(1, 9), X(1)}), false, false);
    add("Lambda/(X-p)", cyclic(1, {poly(1, {-3, 1})}), false, true);
    {
        Presentation I = Presentation::free_module(R, 1, 2);
        I.add_row({X(1), c(1, -3)});
        add("ideal (p,X)", I, false, true);
    }
    add("Lambda/(1+X) = 0", cyclic(1, {poly(1, {1, 1})}), true, true);
    add("Lambda/(pX)", cyclic(1, {poly(1, {0, 3})}), false, true);
    {
        Presentation M = Presentation::free_module(R, 1, 2);
        M.add_row({c(1, 3), X(1)});
        add("Lambda^2/(p,X)", M, false, true);
    }
    add("(Lambda/X)^2", cyclic(1, {X(1)}).direct_sum(cyclic(1, {X(1)})), false, true);
    GRPoly fm1 = gr_sub(gr_f_pow(R, 2, 1), c(2, 1));
    add("R[[X]]/(F-1)", cyclic(2, {fm1}), true, true);
    add("R[[X]]/(X(F-1))", cyclic(2, {gr_mul(X(2), fm1)}), false, true);
    add("R[[X]]/(p,X,F-1)", cyclic(2, {c(2, 3), X(2), fm1}), false, false);
    return out;
}

// ---------------- random harness ----------------

namespace {

constexpr u64 kMersenne61 = (1ULL << 61) - 1;

u64 mulmod61(u64 a, u64 b) { return static_cast<u64>(static_cast<u128>(a) * b % kMersenne61); }

u64 mod61(i64 v) {
    i64 r = v % static_cast<i64>(kMersenne61);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(kMersenne61) : r);
}

u64 pow61(u64 a, u64 e) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mulmod61(r, a);
        a = mulmod61(a, a);
        e >>= 1;
    }
    return r;
}

int rank_mod61(std::vector<std::vector<u64>> a) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows ? static_cast<int>(a[0].size()) : 0;
    int r = 0;
    for (int j = 0; j < cols && r < rows; ++j) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][j]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[r]);
        const u64 inv = pow61(a[r][j], kMersenne61 - 2);
        for (int i = 0; i < rows; ++i) {
            if (i == r || !a[i][j]) continue;
            const u64 f = mulmod61(a[i][j], inv);
            for (int k = j; k < cols; ++k) a[i][k] = (a[i][k] + kMersenne61 - mulmod61(f, a[r][k])) % kMersenne61;
        }
        ++r;
    }
    return r;
}

GRPoly to_grpoly(const IntGR& e, const ZpRing& ring, int d) {
    GRPoly f;
    for (const auto& co : e) {
        GroupRingElt g(ring, d);
        for (int a = 0; a < d && a < static_cast<int>(co.size()); ++a) g.coeffs()[a] = ring.reduce(co[a]);
        f.c.push_back(g);
    }
    f.trim();
    return f;
}

int int_degree(const IntGR& e) {
    for (int c = static_cast<int>(e.size()) - 1; c >= 0; --c)
        for (i64 v : e[c])
            if (v != 0) return c;
    return -1;
}

std::string describe_rows(const std::vector<IntRow>& rows) {
    std::ostringstream os;
    for (const auto& row : rows) {
        os << "[";
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << "; ";
            os << "{";
            for (size_t c = 0; c < row[i].size(); ++c) {
                if (c) os << " | ";
                for (size_t a = 0; a < row[i][c].size(); ++a) os << (a ? "," : "") << row[i][c][a];
            }
            os << "}";
        }
        os << "]";
    }
    return os.str();
}

ZpRing harness_ring(u64 p) { return ZpRing(p, max_precision(p) * 3 / 4); }

// Invariants of Kbar / X Kbar, Kbar the kernel of (R[X]/X^k)^r -> M/X^k.
ModuleInvariants kernel_coinvariants(const Presentation& M, const std::vector<IntRow>& images, int k) {
    Flat F = flatten_presentation(truncated(M, k));
    const int d = M.d;
    const int r = static_cast<int>(images.size());
    const int S = r * d * k;
    std::vector<std::vector<u64>> acols;
    for (int j = 0; j < r; ++j) {
        std::vector<GRPoly> img(M.gens);
        for (int i = 0; i < M.gens; ++i) img[i] = to_grpoly(images[j][i], M.ring, d);
        std::vector<GRPoly> cur = F.reduce(img);
        for (int c = 0; c < k; ++c) {
            for (int a = 0; a < d; ++a) {
                std::vector<GRPoly> w(cur.size());
                for (size_t i = 0; i < cur.size(); ++i) w[i] = rotate(cur[i], a);
                acols.push_back(F.flatten(w));
            }
            cur = F.times_x_reduced(cur);
        }
    }
    ZpMatrix K;
    if (F.B == 0) {
        K = ZpMatrix::identity(M.ring, S);
    } else {
        ZpMatrix A = ZpMatrix::from_columns(M.ring, F.B, acols);
        ZpMatrix sys = F.rel.cols() ? A.hcat(negated(F.rel)) : A;
        K = top_rows(kernel_basis(sys), S);
    }
    // source index (j, c, a) -> j*d*k + c*d + a; X shifts c up
    ZpMatrix shift(M.ring, S, S);
    for (int j = 0; j < r; ++j)
        for (int c = 0; c + 1 < k; ++c)
            for (int a = 0; a < d; ++a) shift.at(j * d * k + (c + 1) * d + a, j * d * k + c * d + a) = 1;
    return quotient_of(K, shift * K);
}

int degree_sum(const std::vector<IntRow>& rows) {
    int s = 0;
    for (const auto& row : rows) {
        int m = 0;
        for (const auto& e : row) m = std::max(m, int_degree(e));
        s += m;
    }
    return s;
}

IntGR random_entry(std::mt19937_64& rng, int d, int degree_bound, u64 p) {
    std::uniform_int_distribution<int> coin(0, 2);
    if (coin(rng) == 0) return {};
    std::uniform_int_distribution<int> deg(0, degree_bound), small(-2, 2), scale(0, 3);
    const int dg = deg(rng);
    IntGR e(dg + 1, std::vector<i64>(d, 0));
    for (int c = 0; c <= dg; ++c)
        for (int a = 0; a < d; ++a) {
            i64 v = small(rng);
            if (scale(rng) == 0) v *= static_cast<i64>(p);
            e[c][a] = v;
        }
    return e;
}

IntRow random_row(std::mt19937_64& rng, int gens, int d, int degree_bound, u64 p) {
    IntRow row;
    for (int i = 0; i < gens; ++i) row.push_back(random_entry(rng, d, degree_bound, p));
    return row;
}

}  // namespace

Presentation IntModule::to_presentation(const ZpRing& ring) const {
    Presentation M = Presentation::free_module(ring, d, gens);
    for (const auto& row : rows) {
        std::vector<GRPoly> r;
        for (const auto& e : row) r.push_back(to_grpoly(e, ring, d));
        M.add_row(std::move(r));
    }
    return M;
}

int generic_rank(const std::vector<IntRow>& rows, int d, std::uint64_t seed) {
    if (rows.empty()) return 0;
    const int gens = static_cast<int>(rows[0].size());
    std::mt19937_64 rng(seed);
    int best = 0;
    for (int trial = 0; trial < 3; ++trial) {
        const u64 x = rng() % kMersenne61;
        // block (row t, generator i) is multiplication by the entry on R = Z_p^d
        std::vector<std::vector<u64>> m(rows.size() * d, std::vector<u64>(gens * d, 0));
        for (size_t t = 0; t < rows.size(); ++t)
            for (int i = 0; i < gens; ++i) {
                const IntGR& e = rows[t][i];
                for (int a = 0; a < d; ++a) {
                    u64 val = 0, xp = 1;
                    for (size_t c = 0; c < e.size(); ++c) {
                        if (a < static_cast<int>(e[c].size())) val = (val + mulmod61(mod61(e[c][a]), xp)) % kMersenne61;
                        xp = mulmod61(xp, x);
                    }
                    for (int b = 0; b < d; ++b) m[t * d + b][i * d + (a + b) % d] = val;
                }
            }
        best = std::max(best, rank_mod61(std::move(m)));
    }
    return best;
}

bool kernel_instance_holds(const IntModule& M, const std::vector<IntRow>& images, std::string* detail) {
    const ZpRing ring = harness_ring(M.p);
    Presentation P = M.to_presentation(ring);
    const int r = static_cast<int>(images.size());
    const int lambda_rank_m = M.gens * M.d - generic_rank(M.rows, M.d, 0x5eedULL);
    const int expected = r * M.d - lambda_rank_m;
    int k = degree_sum(M.rows) + degree_sum(images) + 3;
    ModuleInvariants prev = kernel_coinvariants(P, images, k);
    for (int tries = 0; tries < 8; ++tries) {
        ModuleInvariants cur = kernel_coinvariants(P, images, k + 2);
        if (cur == prev) break;
        prev = cur;
        k += 2;
    }
    const bool ok = prev.rank == expected && prev.torsion.empty();
    if (detail) {
        std::ostringstream os;
        os << "kernel coinvariants rank " << prev.rank << " (expected " << expected << "), torsion " << prev.torsion.size()
           << " at k=" << k;
        *detail = os.str();
    }
    return ok;
}

bool cokernel_instance_holds(const IntModule& M, const std::vector<IntRow>& images, std::string* detail) {
    IntModule C = M;
    for (const auto& row : images) C.rows.push_back(row);
    FreenessVerdict v = freeness_test(C.to_presentation(harness_ring(M.p)));
    if (detail) {
        std::ostringstream os;
        os << "cokernel invariants rank " << v.invariants.rank << ", torsion " << v.invariants.torsion.size() << " at k="
           << v.truncation;
        *detail = os.str();
    }
    return v.no_finite_submodule;
}

namespace {

// A random module over p = 3 with no nontrivial finite submodule.
IntModule draw_module(std::mt19937_64& rng, int degree_bound, bool allow_torsion_rank, int& rejected) {
    for (;;) {
        IntModule M;
        M.p = 3;
        M.d = 1 + static_cast<int>(rng() % 2);
        M.gens = 1 + static_cast<int>(rng() % 2);
        const int max_rows = allow_torsion_rank ? M.gens : M.gens - 1;
        const int t = max_rows > 0 ? static_cast<int>(rng() % (max_rows + 1)) : 0;
        for (int i = 0; i < t; ++i) M.rows.push_back(random_row(rng, M.gens, M.d, degree_bound, M.p));
        try {
            if (freeness_test(M.to_presentation(harness_ring(M.p))).no_finite_submodule) return M;
        } catch (const PrecisionExhausted&) {
        }
        ++rejected;
    }
}

std::string dump(const IntModule& M, const std::vector<IntRow>& images, const std::string& why) {
    std::ostringstream os;
    os << "p=" << M.p << " d=" << M.d << " gens=" << M.gens << " relations " << describe_rows(M.rows) << " map "
       << describe_rows(images) << ": " << why;
    return os.str();
}

}  // namespace

PropertyReport kernel_freeness_property(int trials, std::uint64_t seed, int degree_bound) {
    PropertyReport rep;
    std::mt19937_64 rng(seed);
    while (rep.instances < trials) {
        IntModule M = draw_module(rng, degree_bound, true, rep.rejected);
        // the generators themselves, then up to two random extra images
        std::vector<IntRow> images;
        for (int i = 0; i < M.gens; ++i) {
            IntRow e(M.gens);
            e[i] = IntGR{std::vector<i64>(M.d, 0)};
            e[i][0][0] = 1;
            images.push_back(e);
        }
        const int extra = static_cast<int>(rng() % 3);
        for (int j = 0; j < extra; ++j) images.push_back(random_row(rng, M.gens, M.d, degree_bound, M.p));
        std::string why;
        bool ok;
        try {
            ok = kernel_instance_holds(M, images, &why);
        } catch (const PrecisionExhausted&) {
            ++rep.rejected;
            continue;
        }
        ++rep.instances;
        if (!ok) {
            ++rep.counterexamples;
            rep.dumps.push_back(dump(M, images, why));
        }
    }
    return rep;
}

PropertyReport greenberg_cokernel_property(int trials, std::uint64_t seed, int degree_bound) {
    PropertyReport rep;
    std::mt19937_64 rng(seed);
    while (rep.instances < trials) {
        IntModule M = draw_module(rng, degree_bound, false, rep.rejected);
        const int rank_rel = generic_rank(M.rows, M.d, 0x5eedULL);
        const int lambda_rank = M.gens * M.d - rank_rel;
        const int a = 1 + static_cast<int>(rng() % std::max(1, lambda_rank / M.d));
        std::vector<IntRow> images;
        for (int j = 0; j < a; ++j) images.push_back(random_row(rng, M.gens, M.d, degree_bound, M.p));
        std::vector<IntRow> all = M.rows;
        all.insert(all.end(), images.begin(), images.end());
        if (generic_rank(all, M.d, 0x5eedULL) != rank_rel + a * M.d) {
            ++rep.rejected;
            continue;
        }
        std::string why;
        bool ok;
        try {
            ok = cokernel_instance_holds(M, images, &why);
        } catch (const PrecisionExhausted&) {
            ++rep.rejected;
            continue;
        }
        ++rep.instances;
        if (!ok) {
            ++rep.counterexamples;
            rep.dumps.push_back(dump(M, images, why));
        }
    }
    return rep;
}

}  // namespace pmlab
