#pragma once

#include <array>
#include <vector>

#include "zetakit/parallel.hpp"
#include "zetakit/primes.hpp"
#include "zetakit/zerofind.hpp"

namespace zk {

struct SpacingSample {
    int start = 0;                 // first index n
    int count = 0;                 // number of spacings
    std::vector<double> delta;     // delta_n for n = start .. start+count-1
    double mean = 0.0;
    std::vector<double> edges;     // bins + 1 edges on [0, 4]
    std::vector<double> masses;    // sums to 1; spacings above 4 land in the last bin
};

// delta_n = (gamma_{n+1} - gamma_n) log(gamma_n / 2pi) / 2pi for n in [from, to].
// Needs zeros from..to+1 in the cache.
SpacingSample normalized_spacings(const std::vector<ZeroRecord>& zeros, int from, int to, int bins = 40);

// Pair correlation 1 - (sin pi u / pi u)^2.
double gue_density(double u);
// Integral of gue_density from 0 to u.
double pair_correlation_integral(double u);
// Nearest-neighbour spacing distribution of the sine-kernel process,
// 1 + E'(s) with E(s) = det(I - K) on [0, s].
double gue_cdf(double s);
double gue_spacing_density(double s);

// sup |F_sample - cdf|.
double ks_distance(std::vector<double> sample, double (*cdf)(double));

enum class GapMode { single, pair };
// pi^2/9 d^3 (single) or pi^6/32400 d^8 (pair), d in (0, 1).
double small_gap_probability(double delta, GapMode mode);
// 1 - exp(-pi^2 d^3 M / 9).
double small_gap_exceedance(double delta, double M);

struct GramLaw {
    double mean_gap = 0.0;
    double model_2pi_over_log = 0.0;  // 2 pi / log(n_mid)
    double ratio = 0.0;               // mean_gap / model
};

// Raw gaps gamma_{n+1} - gamma_n for n in [from, to].
GramLaw grams_law_check(const std::vector<ZeroRecord>& zeros, int from, int to);

struct GapCount {
    int k = 0;          // the gap (gamma_k, gamma_{k+1}]
    double lo = 0.0, hi = 0.0;
    std::int64_t primes = 0;
};

struct WindowReport {
    std::int64_t N = 0, delta = 0;
    std::int64_t prime_count = 0;    // primes in (N, N + delta]
    std::int64_t false_measure = 0;  // delta - prime_count
    int kin = 0, kf = 0;             // least gamma >= N, greatest gamma <= N + delta
    std::vector<GapCount> gaps;
    std::int64_t boundary_lo = 0;    // primes in (N, gamma_kin]
    std::int64_t boundary_hi = 0;    // primes in (gamma_kf, N + delta]
    int empty_gaps = 0;              // zero gaps without a prime
};

WindowReport window_report(std::int64_t N, std::int64_t delta, const std::vector<ZeroRecord>& zeros,
                           const SieveTable& table);
// Windows starting at N0, N0 + delta, ..., ordered by N.
std::vector<WindowReport> window_reports(std::int64_t N0, std::int64_t delta, int count,
                                         const std::vector<ZeroRecord>& zeros, const SieveTable& table,
                                         const Parallel& par);

struct FitPoint {
    double x = 0.0, y = 0.0;
};

struct FitResult {
    std::vector<double> params;      // linear: intercept, slope; nonlinear: a, b, c, d
    double rss = 0.0;
    std::vector<double> std_errors;
    int iterations = 0;
};

FitResult linear_fit(const std::vector<FitPoint>& pts);

// y = (a + c x) / log(d + b x), Levenberg-Marquardt from init = {a, b, c, d}.
double fit_model(const std::array<double, 4>& p, double x);
FitResult nonlinear_fit(const std::vector<FitPoint>& pts, const std::array<double, 4>& init);

}  // namespace zk
