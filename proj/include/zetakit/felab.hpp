#pragma once

#include <functional>
#include <vector>

#include "zetakit/specfun.hpp"
#include "zetakit/zerofind.hpp"

namespace zk {

using CxMap = std::function<cx(cx)>;

// 2(2pi)^{s-1} sin(pi s/2) Gamma(1-s).
cx chi_factor(cx s);

// Root of zeta(s) - zeta(1-s).
cx fe_root_newton(cx seed, double tol);

// order-th derivative from the trapezoid rule on a circle.
cx contour_derivative(const CxMap& f, cx center, int order, double radius);

// Solve y = anchor + phi(y) and return F(y). F defaults to the identity.
struct LagrangeProblem {
    CxMap phi;
    cx anchor;
    int k = 0;
    int q = 25;
    double r = 0.0;  // <= 0 means 0.25 |anchor|
    CxMap F;         // optional, with its derivative dF
    CxMap dF;
    CxMap original;  // optional: the equation the returned value should solve
};

struct LagrangeResult {
    cx seed;      // F(anchor)
    cx raw;       // plain order-q series
    cx value;     // after re-anchored refinement
    int refinements = 0;
    double residual = 0.0;           // |y - anchor - phi(y)|
    double original_residual = 0.0;  // |original(value)| when given
    std::vector<double> term_sizes;  // |term_w| of the raw pass
};

LagrangeResult lagrange_solve(const LagrangeProblem& p);

// 6^z + (3/2) 4^z - 3 - 3 (2/3)^z = 0 through y = 6^z, anchored at y = 3.
// Its terms oscillate; orders above 20 trip the growth check.
LagrangeProblem six_power_problem(int k, int q = 8);
// Log forms of the two functional equations and of the symmetric one.
LagrangeProblem type1_problem(int k, int q = 25);
LagrangeProblem type2_problem(int k, int q = 25);
LagrangeProblem half_line_problem(int k, int q = 25);

struct StripInfo {
    double width = 0.0;
    bool overlaps_previous = false;
};

StripInfo strip_geometry(int n);

struct ReBounds {
    double low = 0.0;
    double high = 0.0;
    double mean = 0.0;
};

ReBounds re_bounds();

struct QzMap {
    double critical_line = 0.0;
    std::vector<cx> nontrivial;   // upper half plane; conjugates are implied
    std::vector<double> trivial;  // -2k/q for k = 1..count
};

QzMap qz_zero_map(double q, int count, const std::vector<ZeroRecord>& zeros);

struct PowerSumSeries {
    std::vector<cx> c;             // c[m-1] = Z(m) - P(m)
    int M = 0;
    double cross_check = 0.0;      // largest relative gap between the two routes
};

PowerSumSeries power_sums_from_log_deriv(const std::vector<cx>& zeros, const std::vector<cx>& poles, int M);

struct ExtractedZero {
    double value = 0.0;
    int probe = 0;       // exponent actually used
    double drift = 0.0;  // relative change against probe - 2
};

// Zeros from power sums Z(s) = sum z_k^{-s}, smallest first.
std::vector<ExtractedZero> extract_zeros(const std::function<double(int)>& power_sum, int count, int s_probe);

}  // namespace zk
