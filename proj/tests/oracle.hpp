#pragma once
// Slow, independent reference evaluators used only by the tests.

#include <cmath>
#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace oracle {

using mpf = boost::multiprecision::cpp_bin_float_50;
using mpc = boost::multiprecision::cpp_complex_50;
using cx = std::complex<double>;

inline mpc to_mp(cx z) { return mpc(mpf(z.real()), mpf(z.imag())); }
inline cx to_cx(const mpc& z) { return cx(static_cast<double>(z.real()), static_cast<double>(z.imag())); }

inline mpf mp_pi() { return boost::math::constants::pi<mpf>(); }

// Bernoulli B_{2k} by the Akiyama-Tanigawa table in 50 digits.
inline std::vector<mpf> b2n(int kmax)
{
    int n = 2 * kmax;
    std::vector<mpf> a(n + 1), out(kmax + 1);
    std::vector<mpf> bn(n + 1);
    for (int m = 0; m <= n; ++m) {
        a[m] = mpf(1) / (m + 1);
        for (int j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
        bn[m] = a[0];
    }
    for (int k = 1; k <= kmax; ++k) out[k] = bn[2 * k];
    return out;
}

// log Gamma by shifting to Re >= 40 then 30 Stirling terms.
inline cx log_gamma(cx s)
{
    static const std::vector<mpf> b = b2n(30);
    mpc z = to_mp(s), acc(0);
    while (z.real() < 40) {
        acc += log(z);
        z += 1;
    }
    mpc r = (z - mpf(0.5)) * log(z) - z + log(2 * mp_pi()) / 2;
    mpc zi = mpf(1) / z, p = zi;
    for (int k = 1; k <= 30; ++k) {
        r += b[k] / (mpf(2 * k) * (2 * k - 1)) * p;
        p *= zi * zi;
    }
    return to_cx(r - acc);
}

// Borwein's algorithm for eta, then zeta = eta / (1 - 2^{1-s}).
inline cx zeta(cx s, int n = 0)
{
    if (n == 0) n = 80 + static_cast<int>(2.0 * std::abs(s.imag()));
    mpc z = to_mp(s);
    std::vector<mpf> d(n + 1);
    mpf sum = 0, term = 1;
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    for (int i = 0; i <= n; ++i) {
        if (i == 0)
            term = mpf(1) / n;
        else
            term *= mpf(4) * (n + i - 1) * (n - i + 1) / (mpf(2 * i) * (2 * i - 1));
        sum += term;
        d[i] = n * sum;
    }
    mpc acc(0);
    for (int k = 0; k < n; ++k) {
        mpc t = (d[k] - d[n]) * exp(-z * log(mpf(k + 1)));
        if (k % 2) acc -= t; else acc += t;
    }
    mpc eta = -acc / d[n];
    mpc den = mpf(1) - exp((mpf(1) - z) * log(mpf(2)));
    return to_cx(eta / den);
}

// Ei by the plain power series in 50 digits.
inline cx ei(cx zd, int terms = 400)
{
    mpc z = to_mp(zd), t(1), s(0);
    for (int k = 1; k <= terms; ++k) {
        t *= z / mpf(k);
        s += t / mpf(k);
    }
    mpc lg = zd.imag() == 0.0 ? mpc(log(abs(mpf(zd.real()))), mpf(0)) : log(z);
    return to_cx(boost::math::constants::euler<mpf>() + lg + s);
}

// K_nu(y) by a very fine trapezoid rule on a long range.
inline cx bessel_k(cx nu, double y, double h = 1e-3, double T = 12.0)
{
    long double re = 0, im = 0;
    int n = static_cast<int>(T / h);
    for (int j = 0; j <= n; ++j) {
        double t = j * h;
        cx v = std::exp(-y * std::cosh(t)) * std::cosh(nu * t);
        double w = (j == 0 || j == n) ? 0.5 : 1.0;
        re += w * v.real();
        im += w * v.imag();
    }
    return cx(static_cast<double>(re * h), static_cast<double>(im * h));
}

// Halley iteration in 50 digits.
inline double lambert_w0(double xd)
{
    mpf x = xd, w = xd < 1 ? mpf(xd) / 2 : log(mpf(xd));
    if (xd < -0.3) w = mpf(-0.5);
    for (int i = 0; i < 200; ++i) {
        mpf ew = exp(w), f = w * ew - x;
        w -= f / (ew * (w + 1) - (w + 2) * f / (2 * w + 2));
    }
    return static_cast<double>(w);
}

// Hurwitz zeta for real s > 1, real a > 0 by direct summation with an
// integral tail in 50 digits.
inline double hurwitz_real(double s, double a, int M = 200000)
{
    mpf acc = 0, ms = s;
    for (int k = 0; k < M; ++k) acc += exp(-ms * log(mpf(k + a)));
    mpf w = mpf(M) + a;
    acc += exp((1 - ms) * log(w)) / (ms - 1) + exp(-ms * log(w)) / 2 + ms * exp((-ms - 1) * log(w)) / 12;
    return static_cast<double>(acc);
}

// Hurwitz zeta for complex s and a by Euler-Maclaurin in 50 digits. The head
// uses the principal log, so terms with Re(a+k) < 0 follow that branch.
inline cx hurwitz(cx sd, cx ad)
{
    static const std::vector<mpf> b = b2n(40);
    mpc s = to_mp(sd), a = to_mp(ad), acc(0);
    int N = 60 + static_cast<int>(2.0 * std::abs(sd.imag()) + std::abs(sd.real()));
    for (int k = 0; k < N; ++k) {
        mpc w = a + mpf(k);
        mpc lw = w.imag() == 0 && w.real() < 0 ? mpc(log(-w.real()), mp_pi()) : log(w);
        acc += exp(-s * lw);
    }
    mpc w = a + mpf(N), lw = log(w);
    mpc wms = exp(-s * lw);
    acc += wms * w / (s - mpf(1)) + wms / mpf(2);
    mpc poch = s, wp = wms / w, fact = 2;
    for (int j = 1; j <= 40; ++j) {
        acc += b[j] / fact * poch * wp;
        poch *= (s + mpf(2 * j - 1)) * (s + mpf(2 * j));
        wp /= w * w;
        fact *= mpf(2 * j + 1) * (2 * j + 2);
    }
    return to_cx(acc);
}

// B_n(z) in 50 digits.
inline cx bernoulli_poly(int n, cx zd)
{
    static const std::vector<mpf> b = b2n(30);
    mpc z = to_mp(zd), acc(0);
    std::vector<mpc> zp(n + 1, mpc(1));
    for (int j = 1; j <= n; ++j) zp[j] = zp[j - 1] * z;
    mpf binom = 1;
    for (int k = 0; k <= n; ++k) {
        mpf bk = k == 0 ? mpf(1) : k == 1 ? mpf(-0.5) : k % 2 ? mpf(0) : b[k / 2];
        acc += binom * bk * zp[n - k];
        binom = binom * (n - k) / (k + 1);
    }
    return to_cx(acc);
}

// Ei(w) = -E1(-w) + i pi sgn(Im w), E1 by its even continued fraction
// (modified Lentz) in 50 digits. For large |w| off the positive real axis.
inline cx ei_cf(cx wd)
{
    mpc z = -to_mp(wd);
    const mpf tiny = mpf(1e-300) * mpf(1e-300);
    mpc f = z + mpf(1), C = f, D = 0;
    for (int k = 1; k < 5000; ++k) {
        mpf a = -mpf(k) * k;
        mpc b = z + mpf(2 * k + 1);
        D = b + a * D;
        if (abs(D) < tiny) D = tiny;
        C = b + a / C;
        if (abs(C) < tiny) C = tiny;
        D = mpf(1) / D;
        mpc delta = C * D;
        f *= delta;
        if (abs(delta - mpf(1)) < mpf(1e-45)) break;
    }
    mpc e1 = exp(-z) / f;
    mpf sgn = wd.imag() > 0 ? 1 : -1;
    return to_cx(-e1 + mpc(mpf(0), sgn * mp_pi()));
}

// zeta(j) for integer j >= 2 by Euler-Maclaurin in 50 digits.
inline mpf zeta_int(int j)
{
    static const std::vector<mpf> b = b2n(20);
    const int N = 40;
    mpf acc = 0;
    for (int n = 1; n < N; ++n) acc += pow(mpf(n), -j);
    mpf w = N, wj = pow(w, -j);
    acc += wj * w / (j - 1) + wj / 2;
    mpf poch = j, wp = wj / w, fact = 2;
    for (int k = 1; k <= 20; ++k) {
        acc += b[k] / fact * poch * wp;
        poch *= mpf(j + 2 * k - 1) * (j + 2 * k);
        wp /= w * w;
        fact *= mpf(2 * k + 1) * (2 * k + 2);
    }
    return acc;
}

// Gram series 1 + sum w^k / (k k! zeta(k+1)) in 50 digits; |w| up to about 90.
inline cx riemann_r_gram(cx wd)
{
    static std::vector<mpf> iz = [] {
        std::vector<mpf> v(500);
        for (int k = 1; k < 500; ++k) v[k] = 1 / zeta_int(k + 1);
        return v;
    }();
    mpc w = to_mp(wd), p(1), acc(1);
    for (int k = 1; k < 500; ++k) {
        p *= w / mpf(k);
        acc += p * iz[k] / mpf(k);
    }
    return to_cx(acc);
}

}  // namespace oracle
