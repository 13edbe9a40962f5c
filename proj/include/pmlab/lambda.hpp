#pragma once

// Finitely presented modules over Z_p[G_{-1}][X], their Z_p-structure at finite
// level, coinvariants, and the freeness / finite-submodule predicates.

#include <cstdint>
#include <string>
#include <vector>

#include "pmlab/group_ring.hpp"
#include "pmlab/linalg.hpp"

namespace pmlab {

// Quotient of R[X]^gens by the R[X]-span of `rows`, R = Z_p[G_{-1}] of order d.
struct Presentation {
    ZpRing ring;
    int d = 1;
    int gens = 0;
    std::vector<std::vector<GRPoly>> rows;  // each row has `gens` entries

    static Presentation free_module(const ZpRing& ring, int d, int gens);
    void add_row(std::vector<GRPoly> row);
    // Adds f * e_i as a relation.
    void kill(int i, const GRPoly& f);
    Presentation direct_sum(const Presentation& o) const;
    std::string describe() const;
};

// Arithmetic on GRPoly used by the presentations.
GRPoly gr_add(const GRPoly& a, const GRPoly& b);
GRPoly gr_sub(const GRPoly& a, const GRPoly& b);
GRPoly gr_mul(const GRPoly& a, const GRPoly& b);
GRPoly gr_scalar(const ZpRing& ring, int d, i64 c);
GRPoly gr_x_pow(const ZpRing& ring, int d, int k);
GRPoly gr_f_pow(const ZpRing& ring, int d, int k);  // F^k as a constant polynomial
// Remainder modulo a polynomial with leading coefficient 1.
GRPoly gr_mod_monic(const GRPoly& a, const GRPoly& f);
bool gr_is_monic(const GRPoly& f);

Presentation present_plus(const ZpRing& ring, int d, int n, int chi);
Presentation present_minus(const ZpRing& ring, int d, int n, int chi);
// Appends omega_n e_i for every generator.
Presentation coinvariants(const Presentation& M, int n);
enum class PmSign { Plus, Minus };

// coinvariants(present_plus / present_minus(m, chi), n) with every entry reduced
// modulo omega_n.  Uses (1+X)^{p^n} = 1 modulo omega_n, so omega_m is never expanded.
Presentation present_coinvariants(const ZpRing& ring, int d, int m, int n, int chi, PmSign sign);

// Appends X^k e_i for every generator.
Presentation truncated(const Presentation& M, int k);

struct ModuleReport {
    int rank = 0;
    std::vector<int> torsion;  // exponents e of the Z/p^e summands, sorted
    int ambient = 0;           // Z_p-rank of the free module the quotient is taken in
    ModuleInvariants invariants() const { return {rank, torsion}; }
};

// Z_p-structure of a quotient that is finitely generated over Z_p.  Every
// generator needs a relation f e_i with f monic; otherwise NotZpFinite.
ModuleReport module_report(const Presentation& M);

struct FreenessVerdict {
    bool is_free = false;
    bool no_finite_submodule = false;
    ModuleInvariants invariants;    // M^Gamma
    ModuleInvariants coinvariants;  // M_Gamma
    int truncation = 0;             // k at which M^Gamma stabilised
};

// M^Gamma is read off from the image of ker(X | M/X^{k+1}) in M/X^k, accepted
// once the answers at k and k + 2 agree.  k starts above the relation degrees.
FreenessVerdict freeness_test(const Presentation& M, int k0 = 4, int k_max = 40);

struct TorsionCheck {
    int d = 0, m = 0, n = 0;
    std::vector<int> measured, expected;
    bool pass = false;
};

// Torsion of coinvariants(present_plus(m, 1), n) against
// Z_p[G_{-1}][X]/(p^e, omega~_n^-) + Ann(F + F^{-1})/p^e, e = (m - n)/2.
TorsionCheck torsion_closed_form_check(u64 p, int d, int m, int n, int N = 16);

struct RankLawRow {
    u64 p = 0;
    int d = 0, n = 0, chi = 0;
    PmSign sign = PmSign::Plus;
    int rank = 0;            // Z_p-rank of the level-m coinvariants
    int growing_torsion = 0;  // cyclic summands whose exponent grows with m
    int total = 0;
    int expected = 0;        // d p^n + delta [sign = +]
    int delta = 0;
    bool stable = false;
    bool pass = false;
};

RankLawRow coinvariant_rank_law(u64 p, int d, int n, int chi, PmSign sign, int N = 16);

struct SupplementaryReport {
    int d = 0, chi = 0, delta = 0;
    PmSign sign = PmSign::Plus;
    std::vector<int> candidate_ranks;  // coinvariant ranks for n = 0, 1, 2
    std::vector<int> measured_totals;
    int x_torsion_rank = 0;
    bool hybrid_rejected = true;
    bool consistent = false;
};

SupplementaryReport supplementary_structure_check(u64 p, int d, int chi, PmSign sign, int N = 16);

struct HandModule {
    std::string name;
    Presentation module;
    bool free = false;
    bool no_finite_submodule = false;
};

// Small modules with known answers, over p = 3.
std::vector<HandModule> reference_modules();

struct PropertyReport {
    int instances = 0;
    int rejected = 0;  // candidates that failed the hypotheses and were redrawn
    int counterexamples = 0;
    std::vector<std::string> dumps;
};

// Integer data for the random harness: entry[c][a] is the coefficient of X^c F^a.
using IntGR = std::vector<std::vector<i64>>;
using IntRow = std::vector<IntGR>;

struct IntModule {
    u64 p = 3;
    int d = 1;
    int gens = 0;
    std::vector<IntRow> rows;
    Presentation to_presentation(const ZpRing& ring) const;
};

// Rank over Q_p(X) of the rows, flattened over Z_p[X], from evaluations
// modulo 2^61 - 1 at random points.
int generic_rank(const std::vector<IntRow>& rows, int d, std::uint64_t seed);

// Ker(f) for f: R[X]^r -> M sending the j-th basis vector to images[j] must be
// free of Lambda-rank r d - rank M.  Returns whether that holds.
bool kernel_instance_holds(const IntModule& M, const std::vector<IntRow>& images, std::string* detail = nullptr);
// M / (images) must have no nontrivial finite submodule.
bool cokernel_instance_holds(const IntModule& M, const std::vector<IntRow>& images, std::string* detail = nullptr);

PropertyReport kernel_freeness_property(int trials, std::uint64_t seed, int degree_bound = 6);
PropertyReport greenberg_cokernel_property(int trials, std::uint64_t seed, int degree_bound = 6);

}  // namespace pmlab
