#pragma once

#include <cstdint>
#include <vector>

#include "zetakit/parallel.hpp"
#include "zetakit/specfun.hpp"
#include "zetakit/zerofind.hpp"

namespace zk {

struct SieveTable {
    std::int64_t limit = 0;
    std::vector<std::uint64_t> bits;   // bit n set when n is prime
    std::vector<std::uint32_t> primes;
    std::int64_t mu_limit = 0;
    std::vector<std::int8_t> mu;       // mu[n] for n <= mu_limit, mu[0] = 0

    bool is_prime(std::int64_t n) const;
    // Number of primes <= x, x itself counted when prime.
    std::int64_t pi(double x) const;
};

constexpr std::int64_t kSieveMax = 1000000000;
constexpr std::int64_t kSieveMemoryBudget = std::int64_t(1) << 30;  // bytes

// Segmented sieve. mu_limit < 0 picks min(limit, 2^20).
SieveTable sieve(std::int64_t limit, const Parallel& par = Parallel(1), std::int64_t mu_limit = -1,
                 std::int64_t segment = 1 << 18);

// Integral of 1/log u from 2 to x.
double li(double x);

// Gram series R = 1 + sum w^k / (k k! zeta(k+1)) at log-argument w, |w| <= 40.
cx r_gram(cx w);
// R(x) = r_gram(log x).
double riemann_r(double x);
// The same value from the Moebius form sum mu(n)/n li(x^{1/n}), with the two
// slowly convergent parts summed in closed form. Needs table.mu.
double riemann_r_mobius(double x, const SieveTable& table);

// Ei(w) for |w| > 20.
cx r_asymptotic(cx rho_ln_x);

// Sum over m >= 1 of R(x^{-2m}) in closed form.
double trivial_zero_sum(double x);

// R(x) - sum_m R(x^{-2m}) - sum_{k<=K} 2 Re R(x^{rho_k}).
double pi_reconstruct(double x, int K, const std::vector<ZeroRecord>& zeros, const Parallel& par = Parallel(1));

struct RatioScan {
    double max_ratio = 0.0;
    std::int64_t arg_prime = 0;  // p_n at the maximum
    bool bound_holds = false;    // max_ratio < sqrt(pi)
};

RatioScan prime_ratio_scan(std::int64_t limit, const Parallel& par = Parallel(1));

struct GapZero {
    cx s;
    double residual = 0.0;  // |zeta(s)|
};

// s = 1/2 + i k pi / log(p_{n+1}/p_n).
GapZero prime_gap_zero_formula(int n, int k);

}  // namespace zk
