#include "zetakit/primes.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace zk {

namespace {

std::vector<std::uint32_t> small_primes(std::int64_t n)
{
    std::vector<char> comp(n + 1, 0);
    std::vector<std::uint32_t> out;
    for (std::int64_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::int64_t j = i * i; j <= n; j += i) comp[j] = 1;
    }
    return out;
}

// 1/zeta(k+1) for k = 1..kmax in long double.
const std::vector<long double>& inv_zeta_table()
{
    static const std::vector<long double> t = [] {
        const int kmax = 240;
        std::vector<long double> v(kmax + 1, 0.0L);
        const long double pi = 3.141592653589793238462643383279502884L;
        const long double small[] = {0, 0, pi * pi / 6, 1.202056903159594285399738161511449991L,
                                     pi * pi * pi * pi / 90, 1.036927755143369926331365486457034168L,
                                     pi * pi * pi * pi * pi * pi / 945, 1.008349277381922826839797549849796759L};
        for (int k = 1; k <= kmax; ++k) {
            int j = k + 1;
            long double z;
            if (j <= 7) {
                z = small[j];
            } else {
                z = 1.0L;
                for (int n = 2;; ++n) {
                    long double t = std::pow(static_cast<long double>(n), -j);
                    z += t;
                    if (t < 1e-22L) break;
                }
            }
            v[k] = 1.0L / z;
        }
        return v;
    }();
    return t;
}

}  // namespace

bool SieveTable::is_prime(std::int64_t n) const
{
    if (n < 0 || n > limit) throw Error(ErrorKind::range, "sieve: query beyond the sieve limit");
    return (bits[n >> 6] >> (n & 63)) & 1u;
}

std::int64_t SieveTable::pi(double x) const
{
    if (x < 2.0) return 0;
    auto n = static_cast<std::int64_t>(std::floor(x));
    if (n > limit) throw Error(ErrorKind::range, "sieve: pi(x) beyond the sieve limit");
    return std::upper_bound(primes.begin(), primes.end(), static_cast<std::uint32_t>(n)) - primes.begin();
}

SieveTable sieve(std::int64_t limit, const Parallel& par, std::int64_t mu_limit, std::int64_t segment)
{
    if (limit < 0 || limit > kSieveMax) throw Error(ErrorKind::parameter, "sieve: limit must be in 0..1e9");
    if (segment < 64) throw Error(ErrorKind::parameter, "sieve: segment must be at least 64");
    if (mu_limit < 0) mu_limit = std::min<std::int64_t>(limit, 1 << 20);
    mu_limit = std::min(mu_limit, limit);
    double est_primes = limit < 100 ? 25.0 : 1.26 * limit / std::log(static_cast<double>(limit));
    double bytes = limit / 8.0 + 4.0 * est_primes + static_cast<double>(mu_limit);
    if (bytes > static_cast<double>(kSieveMemoryBudget))
        throw Error(ErrorKind::range, "sieve: memory budget exceeded");

    SieveTable t;
    t.limit = limit;
    t.bits.assign(limit / 64 + 1, 0);
    auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    const std::vector<std::uint32_t> base = small_primes(root);

    // Segments start on word boundaries, so no two segments touch the same word.
    segment = (segment + 63) / 64 * 64;
    std::size_t nseg = static_cast<std::size_t>(limit / segment + 1);
    par.for_each(nseg, [&](std::size_t si) {
        std::int64_t lo = static_cast<std::int64_t>(si) * segment;
        std::int64_t hi = std::min(lo + segment, limit + 1);
        if (lo >= hi) return;
        std::vector<char> comp(hi - lo, 0);
        for (std::uint32_t p : base) {
            std::int64_t pp = std::int64_t(p) * p;
            if (pp >= hi) break;
            std::int64_t start = std::max(pp, (lo + p - 1) / p * p);
            for (std::int64_t m = start; m < hi; m += p) comp[m - lo] = 1;
        }
        for (std::int64_t n = std::max<std::int64_t>(lo, 2); n < hi; ++n)
            if (!comp[n - lo]) t.bits[n >> 6] |= std::uint64_t(1) << (n & 63);
    });
    for (std::size_t w = 0; w < t.bits.size(); ++w) {
        std::uint64_t b = t.bits[w];
        while (b) {
            int j = __builtin_ctzll(b);
            t.primes.push_back(static_cast<std::uint32_t>(w * 64 + j));
            b &= b - 1;
        }
    }

    t.mu_limit = mu_limit;
    t.mu.assign(mu_limit + 1, 1);
    t.mu[0] = 0;
    for (std::uint32_t p : t.primes) {
        if (p > mu_limit) break;
        for (std::int64_t m = p; m <= mu_limit; m += p) t.mu[m] = static_cast<std::int8_t>(-t.mu[m]);
        for (std::int64_t m = std::int64_t(p) * p; m <= mu_limit; m += std::int64_t(p) * p) t.mu[m] = 0;
    }
    return t;
}

double li(double x)
{
    if (!(x > 1.0)) throw Error(ErrorKind::domain, "li: x must exceed 1");
    if (x == 2.0) return 0.0;
    // u = e^t: integrand e^t / t = 1/t + expm1(t)/t, the first part in closed form.
    double a = std::log(2.0), b = std::log(x);
    auto f = [](double t) { return t == 0.0 ? 1.0 : std::expm1(t) / t; };
    double smooth = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-15);
    return std::log(b / a) + smooth;
}

cx r_gram(cx w)
{
    if (std::abs(w) > 40.0) throw Error(ErrorKind::range, "r_gram: |log argument| above 40, use r_asymptotic");
    const auto& iz = inv_zeta_table();
    using lcx = std::complex<long double>;
    lcx lw(w.real(), w.imag()), p = 1.0L, sum = 1.0L;
    const long double aw = std::abs(lw);
    for (int k = 1; k < static_cast<int>(iz.size()); ++k) {
        p *= lw / static_cast<long double>(k);
        lcx term = p * iz[k] / static_cast<long double>(k);
        sum += term;
        if (k > aw && std::abs(term) <= 1e-17L * std::abs(sum)) break;
    }
    return cx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
}

double riemann_r(double x)
{
    if (!(x > 0.0)) throw Error(ErrorKind::domain, "R: x must be positive");
    return r_gram(cx(std::log(x), 0.0)).real();
}

double riemann_r_mobius(double x, const SieveTable& table)
{
    if (!(x > 1.0)) throw Error(ErrorKind::domain, "R: x must exceed 1");
    if (table.mu_limit < 1) throw Error(ErrorKind::parameter, "R: sieve table has no Moebius values");
    // li(x^{1/n}) = Ei(L/n) = gamma + log(L/n) + L/n + g(L/n). Against mu(n)/n the
    // first three parts sum to 1 + L/zeta(2); g = O((L/n)^2) converges fast.
    const double L = std::log(x);
    std::vector<double> terms;
    terms.reserve(table.mu_limit);
    for (std::int64_t n = 1; n <= table.mu_limit; ++n) {
        if (!table.mu[n]) continue;
        double y = L / n, g;
        if (y < 0.1) {
            g = 0.0;
            double t = y;
            for (int j = 2; j < 30; ++j) {
                t *= y / j;
                g += t / j;
            }
        } else {
            g = exp_integral_ei(cx(y, 0.0)).value.real() - kEuler - std::log(y) - y;
        }
        terms.push_back(table.mu[n] * g / n);
    }
    return 1.0 + L * 6.0 / (kPi * kPi) + pairwise_sum(terms.data(), terms.size());
}

cx r_asymptotic(cx rho_ln_x)
{
    if (!(std::abs(rho_ln_x) > 20.0)) throw Error(ErrorKind::range, "r_asymptotic: |argument| must exceed 20");
    return exp_integral_ei(rho_ln_x).value;
}

double trivial_zero_sum(double x)
{
    if (!(x > 1.0)) throw Error(ErrorKind::domain, "trivial_zero_sum: x must exceed 1");
    double L = std::log(x);
    return 1.0 / L - std::atan(kPi / L) / kPi;
}

double pi_reconstruct(double x, int K, const std::vector<ZeroRecord>& zeros, const Parallel& par)
{
    if (!(x >= 10.0)) throw Error(ErrorKind::domain, "pi_reconstruct: x must be at least 10");
    if (K < 0) throw Error(ErrorKind::parameter, "pi_reconstruct: K must be nonnegative");
    if (static_cast<std::size_t>(K) > zeros.size()) throw Error(ErrorKind::range, "pi_reconstruct: zero cache too small");
    const double L = std::log(x);
    auto t = par.map<double>(K, [&](std::size_t k) {
        cx w = cx(0.5, zeros[k].gamma) * L;
        cx r = std::abs(w) <= 30.0 ? r_gram(w) : r_asymptotic(w);
        return -2.0 * r.real();
    });
    return riemann_r(x) - trivial_zero_sum(x) + pairwise_sum(t.data(), t.size());
}

RatioScan prime_ratio_scan(std::int64_t limit, const Parallel& par)
{
    if (limit < 3) throw Error(ErrorKind::parameter, "prime_ratio_scan: limit must be at least 3");
    SieveTable t = sieve(limit, par, 0);
    RatioScan r;
    for (std::size_t i = 0; i + 1 < t.primes.size(); ++i) {
        double q = static_cast<double>(t.primes[i + 1]) / t.primes[i];
        if (q > r.max_ratio) {
            r.max_ratio = q;
            r.arg_prime = t.primes[i];
        }
    }
    r.bound_holds = r.max_ratio < std::sqrt(kPi);
    return r;
}

GapZero prime_gap_zero_formula(int n, int k)
{
    if (n < 1 || k < 1) throw Error(ErrorKind::parameter, "prime_gap_zero_formula: n and k must be at least 1");
    double m = n + 1.0;
    auto bound = static_cast<std::int64_t>(m < 6 ? 15.0 : m * (std::log(m) + std::log(std::log(m))) + 10.0);
    SieveTable t = sieve(bound, Parallel(1), 0);
    double ratio = static_cast<double>(t.primes[n]) / t.primes[n - 1];
    GapZero g;
    g.s = cx(0.5, k * kPi / std::log(ratio));
    g.residual = std::abs(zeta(g.s).value);
    return g;
}

}  // namespace zk
