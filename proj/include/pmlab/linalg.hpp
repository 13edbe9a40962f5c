#pragma once

// Dense matrices over Z/p^N and the Smith normal form over the local ring.

#include <vector>

#include "pmlab/padic.hpp"

namespace pmlab {

class ZpMatrix {
public:
    ZpMatrix() = default;
    ZpMatrix(ZpRing ring, int rows, int cols);
    static ZpMatrix identity(ZpRing ring, int n);
    static ZpMatrix from_columns(ZpRing ring, int rows, const std::vector<std::vector<u64>>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const ZpRing& ring() const { return ring_; }

    u64& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    u64 at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    u64* row(int i) { return &a_[static_cast<size_t>(i) * cols_]; }
    const u64* row(int i) const { return &a_[static_cast<size_t>(i) * cols_]; }

    std::vector<u64> column(int j) const;
    ZpMatrix operator*(const ZpMatrix& o) const;
    std::vector<u64> apply(const std::vector<u64>& v) const;
    ZpMatrix hcat(const ZpMatrix& o) const;
    ZpMatrix transpose() const;
    bool operator==(const ZpMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    void swap_rows(int i, int k);
    void swap_cols(int j, int k);
    // row_i -= f * row_k, restricted to columns >= from
    void row_axpy(int i, int k, u64 f, int from = 0);
    void col_axpy(int j, int k, u64 f, int from = 0);

private:
    ZpRing ring_;
    int rows_ = 0, cols_ = 0;
    std::vector<u64> a_;
};

struct SnfResult {
    // Diagonal valuations in non-decreasing order, kValInf for entries that vanish mod p^N.
    std::vector<int> diag;
    int rank = 0;          // diagonal entries with valuation < N - margin
    int margin = 2;
    bool ambiguous = false;  // some diagonal valuation lies in [N - margin, N)
    bool has_transforms = false;
    ZpMatrix U, V;         // U * A * V = diag(p^{e_i} * unit), exactly mod p^N
    ZpMatrix D;            // the diagonalised matrix

    std::vector<int> elementary_divisors() const {
        return std::vector<int>(diag.begin(), diag.begin() + rank);
    }
};

struct SnfOptions {
    bool want_u = false;
    bool want_v = false;
    int margin = 2;
};

SnfResult snf(const ZpMatrix& A, SnfOptions opt = {});

// Basis of the saturated kernel {x : A x = 0}; throws PrecisionExhausted if the rank is ambiguous.
ZpMatrix kernel_basis(const ZpMatrix& A, int margin = 2);

// Whether b lies in the column span of A.
bool in_column_span(const ZpMatrix& A, const std::vector<u64>& b, int margin = 2);

struct ModuleInvariants {
    int rank = 0;
    std::vector<int> torsion;  // valuations e > 0 of the Z/p^e summands, sorted
    bool operator==(const ModuleInvariants& o) const { return rank == o.rank && torsion == o.torsion; }
};

// Z_p^n / colspan(R).
ModuleInvariants cokernel_invariants(const ZpMatrix& R, int margin = 2);

// L / S for lattices given by generator columns, S contained in L.
ModuleInvariants quotient_invariants(const ZpMatrix& L, const ZpMatrix& S, int margin = 2);

}  // namespace pmlab
