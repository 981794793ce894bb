#include "zetakit/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/binomial.hpp>

namespace zk {

namespace {

constexpr double kLn2Pi = 1.83787706640934548356;
constexpr double kHalfLn2Pi = 0.91893853320467274178;
constexpr int kEmCorrections = 14;

// B_{2j}/(2j)! for j = 1..kEmCorrections, built once.
const std::array<double, kEmCorrections + 1>& em_coeffs()
{
    static std::array<double, kEmCorrections + 1> c{};
    static std::once_flag once;
    std::call_once(once, [] {
        for (int j = 1; j <= kEmCorrections; ++j)
            c[j] = boost::math::bernoulli_b2n<double>(j) / std::tgamma(2.0 * j + 1.0);
    });
    return c;
}

bool is_nonpositive_integer(cx s)
{
    return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

// Signed-zero safe principal log: a real negative argument always maps to +i*pi.
cx plog(cx z)
{
    if (z.imag() == 0.0) z = cx(z.real(), 0.0);
    return std::log(z);
}

// A continuous log of sin(pi*z) in the closed upper half plane.
cx log_sin_pi_upper(cx z)
{
    const double x = z.real(), y = z.imag();
    cx e = std::exp(cx(0.0, 2.0 * kPi) * z);
    return cx(kPi * y - std::log(2.0), kPi / 2 - kPi * x) + std::log(1.0 - e);
}

cx stirling(cx z)
{
    static const double b[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
                               7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};
    cx r = (z - 0.5) * std::log(z) - z + kHalfLn2Pi;
    cx zinv = 1.0 / z, z2 = zinv * zinv, p = zinv;
    for (int k = 1; k <= 10; ++k) {
        r += b[k - 1] / (2.0 * k * (2.0 * k - 1)) * p;
        p *= z2;
    }
    return r;
}

void pairwise_into(const cx* v, std::size_t n, cx& out)
{
    if (n <= 8) {
        cx s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        out = s;
        return;
    }
    cx a, b;
    std::size_t h = n / 2;
    pairwise_into(v, h, a);
    pairwise_into(v + h, n - h, b);
    out = a + b;
}

// Euler-Maclaurin tail for sum_{k>=0} (w+k)^{-s}, Re w large.
cx em_tail(cx s, cx w, double& last)
{
    const auto& c = em_coeffs();
    cx lw = plog(w);
    cx wms = std::exp(-s * lw);
    cx r = wms * w / (s - 1.0) + 0.5 * wms;
    cx winv2 = 1.0 / (w * w);
    cx poch = s;           // s(s+1)...(s+2j-2)
    cx wp = wms / w;       // w^{-s-2j+1}
    last = 0.0;
    for (int j = 1; j <= kEmCorrections; ++j) {
        cx t = c[j] * poch * wp;
        r += t;
        last = std::abs(t);
        poch *= (s + (2.0 * j - 1)) * (s + 2.0 * j);
        wp *= winv2;
    }
    return r;
}

int em_cut(cx s)
{
    return std::max(20, static_cast<int>(std::ceil(1.3 * std::abs(s.imag()))));
}

EvalResult zeta_em(cx s)
{
    const int n = em_cut(s);
    std::vector<cx> terms(n - 1);
    for (int k = 1; k < n; ++k) {
        double l = std::log(static_cast<double>(k));
        terms[k - 1] = std::exp(-s.real() * l) * cx(std::cos(s.imag() * l), -std::sin(s.imag() * l));
    }
    cx head = pairwise_sum(terms.data(), terms.size());
    double last = 0.0;
    cx tail = em_tail(s, cx(n, 0.0), last);
    EvalResult r;
    r.value = head + tail;
    r.est_error = last + 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(head) + n);
    r.terms_used = n - 1 + kEmCorrections;
    return r;
}

}  // namespace

cx pairwise_sum(const cx* v, std::size_t n)
{
    cx out = 0.0;
    if (n) pairwise_into(v, n, out);
    return out;
}

double pairwise_sum(const double* v, std::size_t n)
{
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

EvalResult log_gamma(cx s)
{
    if (is_nonpositive_integer(s)) throw Error(ErrorKind::pole, "log_gamma: pole at non-positive integer");
    EvalResult r;
    if (s.imag() == 0.0 && s.real() > 0.0) {
        r.value = std::lgamma(s.real());
        r.est_error = 4e-16 * (1.0 + std::abs(r.value));
        return r;
    }
    if (s.real() < -20.0) {
        if (s.imag() < 0.0) {
            EvalResult c = log_gamma(std::conj(s));
            c.value = std::conj(c.value);
            return c;
        }
        EvalResult g = log_gamma(1.0 - s);
        r.value = std::log(kPi) - log_sin_pi_upper(s) - g.value;
        r.est_error = g.est_error + 4e-16 * std::abs(r.value);
        r.terms_used = g.terms_used;
        return r;
    }
    cx z = s, acc = 0.0;
    int m = 0;
    while (z.real() < 15.0) {
        acc += plog(z);
        z += 1.0;
        ++m;
    }
    r.value = stirling(z) - acc;
    r.est_error = 1e-15 * (std::abs(r.value) + m + 1.0);
    r.terms_used = m + 10;
    return r;
}

cx gamma_fn(cx s)
{
    return std::exp(log_gamma(s).value);
}

cx log_chi(cx s)
{
    cx h = s / 2.0;
    cx ls;
    if (h.imag() > 0.0)
        ls = log_sin_pi_upper(h);
    else if (h.imag() < 0.0)
        ls = std::conj(log_sin_pi_upper(std::conj(h)));
    else
        ls = plog(cx(std::sin(kPi * h.real()), 0.0));
    return std::log(2.0) + (s - 1.0) * kLn2Pi + ls + log_gamma(1.0 - s).value;
}

EvalResult zeta(cx s)
{
    if (s == cx(1.0, 0.0)) throw Error(ErrorKind::pole, "zeta: pole at s=1");
    if (s.real() < 0.0) {
        if (s.imag() == 0.0 && std::fmod(s.real(), 2.0) == 0.0) return EvalResult{0.0, 0.0, 0};
        EvalResult z1 = zeta_em(1.0 - s);
        cx chi = std::exp(log_chi(s));
        EvalResult r;
        r.value = chi * z1.value;
        r.est_error = std::abs(chi) * z1.est_error + 1e-14 * std::abs(r.value);
        r.terms_used = z1.terms_used;
        return r;
    }
    return zeta_em(s);
}

EvalResult hurwitz_zeta(cx s, cx a)
{
    if (s == cx(1.0, 0.0)) throw Error(ErrorKind::pole, "hurwitz_zeta: pole at s=1");
    if (is_nonpositive_integer(a)) throw Error(ErrorKind::parameter, "hurwitz_zeta: a is zero or a negative integer");
    const int base = em_cut(s);
    const int n = std::max(0, static_cast<int>(std::ceil(base - a.real())));
    std::vector<cx> terms(n);
    for (int k = 0; k < n; ++k) terms[k] = std::exp(-s * plog(a + static_cast<double>(k)));
    cx head = pairwise_sum(terms.data(), terms.size());
    double last = 0.0;
    cx tail = em_tail(s, a + static_cast<double>(n), last);
    double hmax = 0.0;
    for (const cx& t : terms) hmax = std::max(hmax, std::abs(t));
    EvalResult r;
    r.value = head + tail;
    r.est_error = last + 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(head) + hmax * (n + 1));
    r.terms_used = n + kEmCorrections;
    return r;
}

double lambert_w0(double x)
{
    const double em1 = -0.36787944117144232160;
    if (std::isnan(x) || x < em1 - 4e-16) throw Error(ErrorKind::domain, "lambert_w0: x < -1/e");
    if (x <= em1) return -1.0;
    if (x == 0.0) return 0.0;
    double w;
    if (x < -0.25) {
        double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x <= 3.0) {
        double l = std::log1p(x);
        w = l * (1.0 - std::log1p(l) / (2.0 + l));
    } else {
        double l1 = std::log(x), l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    for (int it = 0; it < 64; ++it) {
        double ew = std::exp(w);
        double f = w * ew - x;
        double wp1 = w + 1.0;
        if (wp1 == 0.0) break;
        double d = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        double dw = f / d;
        w -= dw;
        if (std::abs(dw) <= 2e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

double riemann_siegel_theta(double t)
{
    if (t == 0.0) return 0.0;
    return log_gamma(cx(0.25, t / 2.0)).value.imag() - 0.5 * t * std::log(kPi);
}

EvalResult dirichlet_eta(cx s)
{
    const double ln2 = std::log(2.0);
    cx d = s - 1.0;
    if (std::abs(d) < 1e-6) {
        double d1 = kEuler * ln2 - 0.5 * ln2 * ln2;
        return EvalResult{ln2 + d1 * d, 1e-11, 0};
    }
    EvalResult z = zeta(s);
    cx f = 1.0 - std::exp((1.0 - s) * ln2);
    return EvalResult{f * z.value, std::abs(f) * z.est_error, z.terms_used};
}

EvalResult dirichlet_beta(cx s)
{
    cx d = s - 1.0;
    if (std::abs(d) < 1e-6) {
        double g14 = std::lgamma(0.25);
        double b1 = kPi / 4.0;
        double db = b1 * (kEuler + 2.0 * std::log(2.0) + 3.0 * std::log(kPi) - 4.0 * g14);
        return EvalResult{b1 + db * d, 1e-11, 0};
    }
    EvalResult a = hurwitz_zeta(s, 0.25), b = hurwitz_zeta(s, 0.75);
    cx f = std::exp(-s * std::log(4.0));
    return EvalResult{f * (a.value - b.value), std::abs(f) * (a.est_error + b.est_error),
                      a.terms_used + b.terms_used};
}

EvalResult dirichlet_lambda(cx s)
{
    EvalResult z = zeta(s);
    cx f = 1.0 - std::exp(-s * std::log(2.0));
    return EvalResult{f * z.value, std::abs(f) * z.est_error, z.terms_used};
}

std::vector<double> bernoulli_numbers(int n_max)
{
    if (n_max < 0) throw Error(ErrorKind::parameter, "bernoulli_numbers: negative order");
    if (n_max > 60) throw Error(ErrorKind::range, "bernoulli_numbers: order above 60 overflows the exact table");
    std::vector<double> b(n_max + 1, 0.0);
    b[0] = 1.0;
    if (n_max >= 1) b[1] = -0.5;
    for (int k = 2; k <= n_max; k += 2) b[k] = boost::math::bernoulli_b2n<double>(k / 2);
    return b;
}

double bernoulli_poly(int k, double y)
{
    return bernoulli_poly(k, cx(y, 0.0)).real();
}

cx bernoulli_poly(int k, cx y)
{
    if (k < 0) throw Error(ErrorKind::parameter, "bernoulli_poly: negative order");
    auto b = bernoulli_numbers(k);
    // Horner in y over coefficients C(k,n) B_n of y^{k-n}.
    cx r = 0.0;
    for (int n = 0; n <= k; ++n) r = r * y + boost::math::binomial_coefficient<double>(k, n) * b[n];
    return r;
}

namespace {

cx ei_series(cx z, int& terms)
{
    cx sum = 0.0, t = 1.0;
    for (int k = 1; k < 400; ++k) {
        t *= z / static_cast<double>(k);
        cx add = t / static_cast<double>(k);
        sum += add;
        terms = k;
        if (std::abs(add) < 1e-17 * std::abs(sum) && k > std::abs(z)) break;
    }
    cx lg = z.imag() == 0.0 ? cx(std::log(std::abs(z.real())), 0.0) : std::log(z);
    return kEuler + lg + sum;
}

// E1(w) by modified Lentz on the even continued fraction; w off the negative real axis.
cx e1_cf(cx w, int& terms)
{
    const double tiny = 1e-300;
    cx b = w + 1.0, f = 1.0 / b, c = 1.0 / tiny, d = 1.0 / b;
    f = d;
    for (int i = 1; i < 20000; ++i) {
        double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        cx del = c * d;
        f *= del;
        terms = i;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return f * std::exp(-w);
}

cx ei_from_cf(cx z, int& terms)
{
    cx w(-z.real(), z.imag() == 0.0 ? 0.0 : -z.imag());
    cx v = -e1_cf(w, terms);
    if (z.imag() > 0.0) v += cx(0.0, kPi);
    if (z.imag() < 0.0) v -= cx(0.0, kPi);
    return v;
}

}  // namespace

EvalResult exp_integral_ei(cx z)
{
    if (z == cx(0.0, 0.0)) throw Error(ErrorKind::domain, "exp_integral_ei: singular at 0");
    const double az = std::abs(z);
    EvalResult r;
    int terms = 0;
    // Cancellation in the power series grows like exp(|z| - Re z).
    const bool series_ok = az <= 4.0 || z.real() >= az - 10.0;
    if (az <= 20.0) {
        r.value = series_ok ? ei_series(z, terms) : ei_from_cf(z, terms);
        r.est_error = 1e-14 * std::abs(r.value) + 1e-16 * std::exp(az - z.real());
        r.terms_used = terms;
        return r;
    }
    int kmax = std::min(30, static_cast<int>(std::floor(az)));
    double trunc = std::exp(std::lgamma(kmax + 1.0) - kmax * std::log(az));
    if (trunc > 1e-15 && series_ok && az < 60.0) {
        r.value = ei_series(z, terms);
        r.est_error = 1e-14 * std::abs(r.value);
        r.terms_used = terms;
        return r;
    }
    if (trunc > 1e-15 && !series_ok) {
        r.value = ei_from_cf(z, terms);
        r.est_error = 1e-14 * std::abs(r.value);
        r.terms_used = terms;
        return r;
    }
    cx zinv = 1.0 / z, t = 1.0, sum = 1.0;
    for (int k = 1; k < kmax; ++k) {
        t *= static_cast<double>(k) * zinv;
        sum += t;
    }
    cx lead = std::exp(z) * zinv;
    r.value = lead * sum;
    if (z.imag() > 0.0) r.value += cx(0.0, kPi);
    if (z.imag() < 0.0) r.value -= cx(0.0, kPi);
    r.est_error = std::abs(lead) * trunc + 1e-15 * std::abs(r.value);
    r.terms_used = kmax;
    return r;
}

EvalResult bessel_k(cx nu, double y)
{
    if (!(y > 0.0)) throw Error(ErrorKind::domain, "bessel_k: y must be positive");
    const double anu = std::abs(nu.real());
    auto logmag = [&](double t) { return -y * std::cosh(t) + anu * t; };
    // Peak of the integrand envelope, then cut where it has dropped by e^-45.
    double tpk = std::asinh(anu / y);
    double lmax = logmag(tpk);
    double tend = tpk + 1.0;
    while (logmag(tend) > lmax - 45.0) tend += 0.5;
    auto f = [&](double t) {
        double e = -y * std::cosh(t);
        return 0.5 * (std::exp(e + nu * t) + std::exp(e - nu * t));
    };
    double h = std::min(0.25, 1.0 / (1.0 + std::abs(nu.imag())));
    cx prev = 0.0;
    EvalResult r;
    for (int level = 0; level < 14; ++level) {
        int n = static_cast<int>(std::ceil(tend / h));
        std::vector<cx> v(n + 1);
        v[0] = 0.5 * f(0.0);
        double scale = std::abs(v[0]);
        for (int j = 1; j <= n; ++j) {
            v[j] = f(j * h);
            scale += std::abs(v[j]);
        }
        cx cur = h * pairwise_sum(v.data(), v.size());
        r.terms_used = n + 1;
        if (level > 0) {
            double diff = std::abs(cur - prev);
            if (diff <= 1e-14 * h * scale || diff <= 1e-15 * std::abs(cur)) {
                r.value = cur;
                r.est_error = diff + 1e-16 * h * scale;
                return r;
            }
        }
        prev = cur;
        h /= 2.0;
    }
    r.value = prev;
    r.est_error = std::abs(prev) * 1e-10;
    return r;
}

}  // namespace zk
