#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "zetakit/parallel.hpp"
#include "zetakit/specfun.hpp"
#include "zetakit/zerofind.hpp"

namespace zk {

struct Rect {
    double re_lo = 0.0, re_hi = 0.0;
    double im_lo = 0.0, im_hi = 0.0;
};

// Roots of B_{q+1}, i.e. of z -> zeta(-q, z), sorted by (Re, Im).
std::vector<cx> hurwitz_negative_integer_zeros(int q);

// Root of a -> zeta(s, a) inside a bracket with a sign change.
double hurwitz_real_zero(double s, Interval bracket);

struct ScanRoot {
    cx z;
    double residual = 0.0;
    double psi_gap = -1.0;  // polygamma cross-check, -1 when not applicable
};

// Zeros of an analytic function in a rectangle: argument-principle counts on
// grid cells, quadrisection down to single roots, then Newton.
std::vector<ScanRoot> scan_zeros(const std::function<cx(cx)>& f, const std::function<cx(cx)>& df,
                                 const Rect& region, double grid, const Parallel& par);

// Winding number of f around the rectangle boundary.
int winding_count(const std::function<cx(cx)>& f, const Rect& r);

// Zeros of z -> zeta(q, z).
std::vector<ScanRoot> hurwitz_complex_zero_scan(double q, const Rect& region, double grid, const Parallel& par);

enum class Verdict { confirmed, refuted, inconclusive };
std::string to_string(Verdict v);

struct ClaimAudit {
    std::string claim_id;
    std::string function_tag;
    cx claimed_root;
    double residual = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

constexpr double kConfirmTol = 1e-6;
constexpr double kRefuteTol = 1e-3;

Verdict classify(double residual);

// Tags: zeta, eta, beta, fe, six_power, dh, hurwitz(q), hurwitz_swapped(a),
// epstein(lambda), gzeta(alpha,beta), zeta_scaled(q), dirichlet(c1,...,ck).
// lambda may be written sqrtN. tol_scale scales the evaluation tolerances.
cx evaluate_tag(const std::string& tag, cx z, double tol_scale = 1.0);
ClaimAudit audit_claim(const std::string& function_tag, cx claimed_root, double tol_scale = 1.0);

struct Claim {
    std::string id;
    std::string tag;
    cx root;
};

// Lines claim_id,function_tag,re,im; the tag may itself contain commas.
std::vector<Claim> read_claims(std::istream& is);
std::vector<Claim> read_claims(const std::string& path);
std::vector<ClaimAudit> audit_claims(const std::vector<Claim>& claims, const Parallel& par, double tol_scale = 1.0);
void write_audit_json(std::ostream& os, const std::vector<ClaimAudit>& audits);

// Q(m,n) = a m^2 + b m n + c n^2, positive definite.
struct EpsteinForm {
    double a = 1.0, b = 0.0, c = 1.0;
    double D = 4.0;       // |b^2 - 4ac|
    int d_sign = -1;      // sign of b^2 - 4ac
    double lambda = 1.0;  // sqrt(c/a) when b = 0

    static EpsteinForm quadratic(double a, double b, double c);
    static EpsteinForm rectangular(double lambda);  // m^2 + lambda^2 n^2
};

// Lattice sum over square shells 1..R plus the integral of Q^{-s} outside the
// last shell. reverse sums the shells from R down to 1.
cx epstein_shells(const EpsteinForm& f, cx s, int R, bool reverse = false);

// Doubles R until two successive values agree within tail_tol. The value at
// the final R is returned, with that difference as est_error and R as terms_used.
EvalResult epstein_sum_direct(const EpsteinForm& f, cx s, double tail_tol);

struct EpsteinParts {
    cx zeta_term;
    cx gamma_term;
    cx bessel_term;
};

// The three terms of the Bessel-K expansion; s away from 1/2 and 1.
EpsteinParts epstein_parts(const EpsteinForm& f, cx s, double tol = 1e-16);
EvalResult epstein_continued(const EpsteinForm& f, cx s, bool two_term = false, double tol = 1e-16);

// (sqrt|D| / 2pi)^s Gamma(s) Z(s).
cx epstein_completed(const EpsteinForm& f, cx s);

struct PeriodicSeries {
    int period = 1;
    std::vector<cx> coefficients;  // coefficient of n = 1..period

    PeriodicSeries(std::vector<cx> coeffs);
    EvalResult operator()(cx s) const;

    static PeriodicSeries chi_m3();
    static PeriodicSeries chi_m4();
    static PeriodicSeries chi_m7();
    static PeriodicSeries chi_m8();
};

// Davenport-Heilbronn series with period 5.
double dh_xi();
cx dh_function(cx s);
// f(s) - 5^{1/2-s} chi_2(s) f(1-s).
cx dh_fe_residual(cx s);
ScanRoot dh_newton(cx seed, double tol = 1e-13);

enum class GzetaCase { I, II, III, IV, V, reduction };
std::string to_string(GzetaCase c);
GzetaCase gzeta_case(double alpha, double beta);

// alpha^{-z} zeta(z, q), q = (alpha + beta)/alpha, principal log.
EvalResult gzeta(double alpha, double beta, cx z);

struct GzetaRoot {
    cx z;
    double residual = 0.0;  // |zeta(z, q)|, alpha^{-z} dropped; for q < 0 above the axis |e^{i pi z} zeta(z, q)|
    bool in_strip = false;  // 0 < Re z < 1
};

struct GzetaSearch {
    GzetaCase kind = GzetaCase::I;
    std::vector<GzetaRoot> roots;  // sorted by (Re, Im)
    int certified_count = 0;       // winding number over the region
    int seeded = 0;                // roots reached from generator seeds
};

GzetaSearch gzeta_zero_search(double alpha, double beta, const Rect& region, const Parallel& par);

}  // namespace zk
