#pragma once

// The Honda formal groups G_n over O_k, the points d_n of E over the tower, and
// the trace relations they satisfy.

#include <optional>
#include <random>
#include <vector>

#include "pmlab/series.hpp"
#include "pmlab/tower.hpp"

namespace pmlab {

// sum_k (c[k] / p^den_exp) X^k over O_k
struct OkSeries {
    FieldPtr field;
    int den_exp = 0;
    std::vector<UnramifiedElt> c;

    int degree_bound() const { return static_cast<int>(c.size()) - 1; }
};

struct HondaChecks {
    bool congruence = false;           // log^{phi^2}(X^{p^2}) + p log(X) = 0 mod p
    bool derivative_integral = false;  // log'(X) has integral coefficients
    int terms = 0;                     // number of g^{(2m)} terms summed
};

// log_{G_n} = sum_m (-1)^m g^{(2m)}(X)/p^m twisted by phi^{-(n+1)}, through degree D.
// Throws pmlab::Error when either Honda check fails.
OkSeries honda_log(const FieldPtr& f, int n, int D, HondaChecks* checks = nullptr);
// The derivative of log_{G_n}, computed term by term without denominators.
OkSeries honda_log_derivative(const FieldPtr& f, int n, int D);

// eps_n = sum_{i>=1} (-1)^{i-1} zeta^{phi^{-(n+1+2i)}} p^i
UnramifiedElt epsilon_n(const FieldPtr& f, int n);

struct LocalPoint {
    int level = -1;
    TowerElt log_value;
    std::optional<TowerElt> param_value;
};

// log_E(d_n) = eps_n + sum_{m>=0, n-2m>=0} (-1)^m pi_{n-2m} / p^m
LocalPoint local_point_log(const TowerPtr& t, int n);

struct IntegralityReport {
    bool integral = true;
    int first_bad_degree = -1;
    int precision = 0;  // absolute precision of the coefficients
    OkSeries series;
};

// exp_E o log_{G_n} via h' = log_G'(X) / omega_E(h(X)), and its inverse
// exp_{G_n} o log_E via k' = omega_E(X) / log_G'(k(X)).  The field must carry
// enough digits to absorb the division by j at degree j.
IntegralityReport exp_e_log_g(const CurveParams& E, const FieldPtr& f, int n, int D);
IntegralityReport exp_g_log_e(const CurveParams& E, const FieldPtr& f, int n, int D);

struct DirectPoint {
    LocalPoint point;        // computed in the working tower
    LocalPoint closed_form;  // same tower
    int working_precision = 0;
    int effective_precision = 0;
    int residual_valuation = 0;
    bool matches = false;
};

// d_n through the series: eps_n pulled back along log_{G_n}, added to pi_n in
// G_n, pushed to E by exp_E o log_{G_n}, then measured with log_E.  Throws
// InsufficientDegree when D cannot reach `target` digits.
DirectPoint local_point_direct(const CurveParams& E, u64 p, int d, int target, int n, int D);

struct TraceRow {
    int n = 0;         // level of the point being traced
    int relation = 1;  // 1: Tr d_n = -d_{n-2}; 2: Tr d_0 = -(phi + phi^{-1}) d_{-1}
    int residual_valuation = 0;
    int floor = 0;
    bool pass = false;
};

std::vector<TraceRow> verify_trace_relations(const TowerPtr& t, int n_max);

// log d_n is congruent to pi_n modulo k_{n-1}: the coordinates of log d_n - pi_n
// off the sublattice of k_{n-1} vanish.
bool log_point_matches_pi_mod_lower(const TowerPtr& t, int n);

struct TorsionReport {
    int samples = 0;
    int zero_results = 0;
    int min_valuation_pi = 0;
    int floor = 0;
};

// Evaluates [p] on random t in m_n (t != 0) and counts vanishing results.
TorsionReport torsion_free_check(const CurveParams& E, const TowerPtr& t, int n, int D, int samples, std::mt19937_64& rng);

// Evaluation helpers.
UnramifiedElt eval_series(const OkSeries& s, const UnramifiedElt& x);
TowerElt eval_series(const OkSeries& s, const TowerElt& x);
TowerElt eval_series(const ZpSeries& s, const TowerElt& x);
TowerElt eval_bivariate(const BiSeries& F, const TowerElt& a, const TowerElt& b);

}  // namespace pmlab
