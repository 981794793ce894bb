#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "zetakit/parallel.hpp"
#include "zetakit/specfun.hpp"

namespace zk {

enum class ZeroMethod { bisection, newton, lambert_seed, franca_leclair, xlogx_fixed_point };

std::string to_string(ZeroMethod m);
ZeroMethod parse_zero_method(const std::string& s);

struct ZeroRecord {
    int n = 0;
    double gamma = 0.0;
    double residual = 0.0;
    ZeroMethod method = ZeroMethod::bisection;
    int iterations = 0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct GramPair {
    int n = 0;
    double y_plus = 0.0;   // polished so that theta(y_plus) = (n-1) pi
    double y_minus = 0.0;  // polished so that theta(y_minus) = (n-1/2) pi
    double y_plus_lambert = 0.0;
    double y_minus_lambert = 0.0;
};

enum class IntervalBase { log2pi, logpi, gram };

double hardy_z(double t);

// Continuous arg of zeta(sigma + i t), tracked from 2 + i t.
double arg_zeta(double sigma, double t);

// N(T) = theta(T)/pi + 1 + S(T), rounded; T must not be an ordinate.
int exact_zero_count(double T);

GramPair gram_pair(int n);
double approx_zero(int n);
Interval bisection_intervals(int k, IntervalBase base);

// Upper bound on bisection steps to shrink an interval of width w below tol.
int bisection_step_bound(double w, double tol);

std::vector<ZeroRecord> bisect_zeros(Interval iv, double tol, bool index = true);
ZeroRecord newton_zero(double seed, double tol);
ZeroRecord franca_leclair_zero(int n, double tol);
ZeroRecord xlogx_zero(int n, double tol, bool drop_arg = false);
int count_zeros(double T);

// Left side of the Franca-LeClair equation minus its right side.
double franca_leclair_residual(double t, int n);

struct ZeroTable {
    std::vector<ZeroRecord> records;  // sorted by index
    double max_disagreement = 0.0;    // across methods, when cross-validated
};

// Zeros 1..n_max by bisection over parallel chunks. With cross_validate the
// other three methods are run for every index and the largest deviation kept.
ZeroTable compute_zeros(int n_max, double tol, bool cross_validate, const Parallel& par);

// Cache file: "# zetakit-zeros v1" then n,gamma,residual,method per line.
void write_zero_cache(std::ostream& os, const std::vector<ZeroRecord>& zs);
void write_zero_cache(const std::string& path, const std::vector<ZeroRecord>& zs);
std::vector<ZeroRecord> read_zero_cache(std::istream& is);
std::vector<ZeroRecord> read_zero_cache(const std::string& path);

}  // namespace zk
