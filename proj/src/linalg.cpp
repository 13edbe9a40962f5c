#include "pmlab/linalg.hpp"

#include <algorithm>

namespace pmlab {

ZpMatrix::ZpMatrix(ZpRing ring, int rows, int cols)
    : ring_(ring), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}

ZpMatrix ZpMatrix::identity(ZpRing ring, int n) {
    ZpMatrix m(ring, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

ZpMatrix ZpMatrix::from_columns(ZpRing ring, int rows, const std::vector<std::vector<u64>>& cols) {
    ZpMatrix m(ring, rows, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
        if (static_cast<int>(cols[j].size()) != rows) throw std::invalid_argument("from_columns: ragged input");
        for (int i = 0; i < rows; ++i) m.at(i, static_cast<int>(j)) = cols[j][i] % ring.modulus();
    }
    return m;
}

std::vector<u64> ZpMatrix::column(int j) const {
    std::vector<u64> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
}

ZpMatrix ZpMatrix::operator*(const ZpMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("ZpMatrix: dimension mismatch");
    ZpMatrix r(ring_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            u64 a = at(i, k);
            if (a == 0) continue;
            const u64* src = o.row(k);
            u64* dst = r.row(i);
            for (int j = 0; j < o.cols_; ++j)
                if (src[j]) dst[j] = ring_.add(dst[j], ring_.mul(a, src[j]));
        }
    return r;
}

std::vector<u64> ZpMatrix::apply(const std::vector<u64>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("ZpMatrix::apply: dimension mismatch");
    std::vector<u64> r(rows_, 0);
    for (int i = 0; i < rows_; ++i) {
        const u64* a = row(i);
        u64 s = 0;
        for (int j = 0; j < cols_; ++j)
            if (a[j] && v[j]) s = ring_.add(s, ring_.mul(a[j], v[j]));
        r[i] = s;
    }
    return r;
}

ZpMatrix ZpMatrix::hcat(const ZpMatrix& o) const {
    if (rows_ != o.rows_) throw std::invalid_argument("ZpMatrix::hcat: row mismatch");
    ZpMatrix r(ring_, rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        std::copy(row(i), row(i) + cols_, r.row(i));
        std::copy(o.row(i), o.row(i) + o.cols_, r.row(i) + cols_);
    }
    return r;
}

ZpMatrix ZpMatrix::transpose() const {
    ZpMatrix r(ring_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

void ZpMatrix::swap_rows(int i, int k) {
    if (i == k) return;
    std::swap_ranges(row(i), row(i) + cols_, row(k));
}

void ZpMatrix::swap_cols(int j, int k) {
    if (j == k) return;
    for (int i = 0; i < rows_; ++i) std::swap(at(i, j), at(i, k));
}

void ZpMatrix::row_axpy(int i, int k, u64 f, int from) {
    if (f == 0) return;
    u64* dst = row(i);
    const u64* src = row(k);
    for (int j = from; j < cols_; ++j)
        if (src[j]) dst[j] = ring_.sub(dst[j], ring_.mul(f, src[j]));
}

void ZpMatrix::col_axpy(int j, int k, u64 f, int from) {
    if (f == 0) return;
    for (int i = from; i < rows_; ++i) {
        u64 s = at(i, k);
        if (s) at(i, j) = ring_.sub(at(i, j), ring_.mul(f, s));
    }
}

SnfResult snf(const ZpMatrix& A, SnfOptions opt) {
    const ZpRing& R = A.ring();
    const int N = R.precision();
    const int r = A.rows(), c = A.cols();
    SnfResult res;
    res.margin = opt.margin;
    res.D = A;
    ZpMatrix& D = res.D;
    if (opt.want_u) res.U = ZpMatrix::identity(R, r);
    if (opt.want_v) res.V = ZpMatrix::identity(R, c);
    res.has_transforms = opt.want_u || opt.want_v;

    const int steps = std::min(r, c);
    for (int k = 0; k < steps; ++k) {
        int bi = -1, bj = -1, bv = kValInf;
        for (int i = k; i < r && bv > 0; ++i) {
            const u64* row = D.row(i);
            for (int j = k; j < c; ++j) {
                if (row[j] == 0) continue;
                int v = R.val(row[j]);
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        }
        if (bi < 0) break;
        D.swap_rows(k, bi);
        D.swap_cols(k, bj);
        if (opt.want_u) res.U.swap_rows(k, bi);
        if (opt.want_v) res.V.swap_cols(k, bj);

        const u64 unit = R.div_p_pow(D.at(k, k), bv);
        const u64 uinv = R.inv(unit);
        for (int i = k + 1; i < r; ++i) {
            u64 e = D.at(i, k);
            if (e == 0) continue;
            u64 f = R.mul(R.div_p_pow(e, bv), uinv);
            D.row_axpy(i, k, f, k);
            if (opt.want_u) res.U.row_axpy(i, k, f);
        }
        for (int j = k + 1; j < c; ++j) {
            u64 e = D.at(k, j);
            if (e == 0) continue;
            u64 f = R.mul(R.div_p_pow(e, bv), uinv);
            // Column k is zero outside row k, so only row k of D changes.
            D.at(k, j) = 0;
            if (opt.want_v) res.V.col_axpy(j, k, f);
        }
    }
    res.diag.assign(steps, kValInf);
    for (int k = 0; k < steps; ++k) res.diag[k] = R.val(D.at(k, k));
    std::sort(res.diag.begin(), res.diag.end());
    for (int v : res.diag) {
        if (v < N - opt.margin) ++res.rank;
        else if (v < N) res.ambiguous = true;
    }
    return res;
}

ZpMatrix kernel_basis(const ZpMatrix& A, int margin) {
    SnfResult s = snf(A, {false, true, margin});
    if (s.ambiguous) throw PrecisionExhausted("kernel_basis: rank decision within precision margin");
    const int c = A.cols();
    ZpMatrix K(A.ring(), c, c - s.rank);
    // Pivots come out in non-decreasing valuation order, so the zero pivots are the trailing ones.
    for (int j = s.rank; j < c; ++j)
        for (int i = 0; i < c; ++i) K.at(i, j - s.rank) = s.V.at(i, j);
    return K;
}

namespace {

// Decide y = U b against the diagonal; returns false if b is outside the span.
bool span_test(const SnfResult& s, const std::vector<u64>& y, const ZpRing& R) {
    const int N = R.precision();
    for (size_t i = 0; i < y.size(); ++i) {
        int v = R.val(y[i]);
        if (static_cast<int>(i) < s.rank) {
            if (v < s.diag[i]) return false;
        } else {
            if (v == kValInf) continue;
            if (v >= N - s.margin) throw PrecisionExhausted("membership decided within precision margin");
            return false;
        }
    }
    return true;
}

}  // namespace

bool in_column_span(const ZpMatrix& A, const std::vector<u64>& b, int margin) {
    SnfResult s = snf(A, {true, false, margin});
    if (s.ambiguous) throw PrecisionExhausted("in_column_span: rank decision within precision margin");
    return span_test(s, s.U.apply(b), A.ring());
}

ModuleInvariants cokernel_invariants(const ZpMatrix& R, int margin) {
    SnfResult s = snf(R, {false, false, margin});
    if (s.ambiguous) throw PrecisionExhausted("cokernel_invariants: rank decision within precision margin");
    ModuleInvariants inv;
    inv.rank = R.rows() - s.rank;
    for (int i = 0; i < s.rank; ++i)
        if (s.diag[i] > 0) inv.torsion.push_back(s.diag[i]);
    return inv;
}

ModuleInvariants quotient_invariants(const ZpMatrix& L, const ZpMatrix& S, int margin) {
    const ZpRing& R = L.ring();
    SnfResult s = snf(L, {true, false, margin});
    if (s.ambiguous) throw PrecisionExhausted("quotient_invariants: rank decision within precision margin");
    const int r = s.rank;
    // The pivot rows of U*L are in pivot order, which is the sorted order of diag.
    std::vector<int> piv(r);
    for (int i = 0; i < r; ++i) piv[i] = R.val(s.D.at(i, i));
    int loss = 0;
    for (int v : piv) loss = std::max(loss, v);
    const int N2 = R.precision() - loss;
    if (N2 <= margin) throw PrecisionExhausted("quotient_invariants: not enough precision left after division");
    ZpRing R2(R.p(), N2);
    ZpMatrix C(R2, std::max(r, 0), S.cols());
    for (int j = 0; j < S.cols(); ++j) {
        std::vector<u64> y = s.U.apply(S.column(j));
        for (int i = r; i < static_cast<int>(y.size()); ++i) {
            int v = R.val(y[i]);
            if (v == kValInf) continue;
            if (v >= R.precision() - margin) throw PrecisionExhausted("quotient_invariants: containment within margin");
            throw Error("quotient_invariants: S is not contained in L");
        }
        for (int i = 0; i < r; ++i) {
            if (R.val(y[i]) < piv[i]) throw Error("quotient_invariants: S is not contained in L");
            C.at(i, j) = R.div_p_pow(y[i], piv[i]) % R2.modulus();
        }
    }
    ModuleInvariants inv;
    if (r == 0) return inv;
    SnfResult t = snf(C, {false, false, margin});
    if (t.ambiguous) throw PrecisionExhausted("quotient_invariants: quotient rank within margin");
    inv.rank = r - t.rank;
    for (int i = 0; i < t.rank; ++i)
        if (t.diag[i] > 0) inv.torsion.push_back(t.diag[i]);
    return inv;
}

}  // namespace pmlab
