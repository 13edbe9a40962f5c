#pragma once

// Z_p-lattices inside k_n spanned by Galois orbits of logarithms of local points,
// and the norm-subgroup checks built from them.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pmlab/formal_group.hpp"
#include "pmlab/linalg.hpp"
#include "pmlab/tower.hpp"

namespace pmlab {

// Columns are the flat coordinates of generators at `level`, scaled by p^den_exp.
class Lattice {
public:
    Lattice() = default;
    Lattice(TowerPtr t, int level, ZpMatrix gens, int den_exp);
    static Lattice from_elements(const TowerPtr& t, int level, const std::vector<TowerElt>& xs);

    const TowerPtr& tower() const { return t_; }
    int level() const { return level_; }
    int den_exp() const { return den_; }
    int ambient_dim() const { return gens_.rows(); }
    const ZpMatrix& generators() const { return gens_; }

    int rank() const;  // throws PrecisionExhausted when ambiguous
    SnfResult snf_result() const;
    bool contains(const TowerElt& x) const;
    bool contains(const Lattice& o) const;
    bool equals(const Lattice& o) const { return contains(o) && o.contains(*this); }
    Lattice sum(const Lattice& o) const;
    Lattice intersection(const Lattice& o) const;
    // The same lattice viewed at a higher level.
    Lattice embedded(int level) const;
    // Keep only the listed ambient coordinates.
    Lattice projected(const std::vector<int>& rows) const;
    // Rewritten over p^a, a >= den_exp.
    Lattice with_den(int a) const;

private:
    TowerPtr t_;
    int level_ = -1;
    int den_ = 0;
    ZpMatrix gens_;
};

// chi = omega^index; Delta acts through Teichmuller units mod p^{n+1}.
TowerElt apply_idempotent(const TowerElt& x, int chi_index);

// Z_p-span of {e_chi g x : g in G_n, x in gens}; G_n = Gal(k_n / Q_p) acts by
// eta -> eta^u and phi on O_k.  Each generator's orbit is taken at its own level.
Lattice galois_span(const TowerPtr& t, const std::vector<TowerElt>& gens, int n, std::optional<int> chi = std::nullopt);

// log d_m for -1 <= m <= n, cached per tower.
class PointTable {
public:
    explicit PointTable(TowerPtr t);
    const TowerElt& log_d(int m) const;
    const TowerPtr& tower() const { return t_; }

private:
    TowerPtr t_;
    std::vector<TowerElt> logs_;
};

enum class Sign { Plus, Minus };

// C(m_n) = <d_n, d_{-1}>, C(m_{-1}) = <d_{-1}>.
Lattice norm_lattice(const PointTable& pts, int n, std::optional<int> chi = std::nullopt);
// E^+(m_n) = <d_n^+, d_0^->, E^-(m_n) = <d_n^-, d_0^->; d_0^- = d_{-1}.
Lattice norm_subgroup(const PointTable& pts, int n, Sign sign, std::optional<int> chi = std::nullopt);
// E(m_n) = <d_n, d_{n-1}>, E(m_{-1}) = <d_{-1}>.
Lattice full_lattice(const PointTable& pts, int n, std::optional<int> chi = std::nullopt);
// m_n: generated over Z_p by (eta - 1) zeta^j eta^i; p O_k at level -1.
Lattice maximal_ideal_lattice(const TowerPtr& t, int n);

int expected_norm_rank(u64 p, int d, int n, int chi);
int expected_plus_rank(u64 p, int d, int n);
int expected_minus_rank(u64 p, int d, int n, int chi);

struct ExactSequenceReport {
    int n = 0;
    int rank_c_n = 0, rank_c_prev = 0, rank_sum = 0, rank_intersection = 0;
    bool intersection_is_bottom = false;  // equals the E(m_{-1}) lattice
    bool sum_is_full = false;             // equals the E(m_n) lattice
    bool additive = false;
    bool pass = false;
};

ExactSequenceReport check_exact_sequence(const PointTable& pts, int n);

// Whether log d_{-1} lies in the Galois span of log d_n.
bool cyclicity_check(const PointTable& pts, int n);
inline bool cyclicity_expected(int d, int n) { return !(d % 4 == 0 && n % 2 == 0); }

struct GenerationReport {
    bool points = false;     // <d_n> + E(m_{n-1}) = E(m_n)
    bool uniformizer = false;  // <pi_n> projects onto m_n / m_{n-1}
    bool log_matches_pi = false;  // log d_n = pi_n mod k_{n-1}
};

GenerationReport generation_check(const PointTable& pts, int n);

// Runs f on towers of increasing precision until no PrecisionExhausted is thrown
// and the result agrees at two consecutive precisions.
template <class R>
R with_precision_retry(u64 p, int d, int N0, int n_max, const std::function<R(const TowerPtr&)>& f, int* used_N = nullptr);

int max_precision(u64 p);

}  // namespace pmlab

#include "pmlab/lattice_retry.hpp"
