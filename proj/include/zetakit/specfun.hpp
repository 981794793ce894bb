#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace zk {

using cx = std::complex<double>;

enum class ErrorKind { pole, domain, parameter, divergence, unresolved, range, io, usage };

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct EvalResult {
    cx value;
    double est_error = 0.0;
    int terms_used = 0;
};

constexpr double kPi = 3.14159265358979323846;
constexpr double kEuler = 0.57721566490153286061;

// Principal branch of log Gamma, continuous in the plane cut along the negative real axis.
EvalResult log_gamma(cx s);
cx gamma_fn(cx s);

EvalResult zeta(cx s);

// log of 2(2pi)^{s-1} sin(pi s/2) Gamma(1-s), continuous off the real axis.
cx log_chi(cx s);
EvalResult hurwitz_zeta(cx s, cx a);

double lambert_w0(double x);
double riemann_siegel_theta(double t);

EvalResult dirichlet_eta(cx s);
EvalResult dirichlet_beta(cx s);
EvalResult dirichlet_lambda(cx s);

// B_0..B_nmax with B_1 = -1/2.
std::vector<double> bernoulli_numbers(int n_max);
double bernoulli_poly(int k, double y);
cx bernoulli_poly(int k, cx y);

EvalResult exp_integral_ei(cx z);
EvalResult bessel_k(cx nu, double y);

// Pairwise summation with a fixed tree shape.
cx pairwise_sum(const cx* v, std::size_t n);
double pairwise_sum(const double* v, std::size_t n);

}  // namespace zk
