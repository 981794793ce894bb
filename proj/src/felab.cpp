#include "zetakit/felab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zetakit/io.hpp"

namespace zk {

namespace {

const double kLn2Pi = std::log(2 * kPi);

cx fe_gap(cx s)
{
    return zeta(s).value - zeta(1.0 - s).value;
}

// Principal-log expression continued onto the branch fixed at the anchor:
// each value is moved by 2 pi i m to sit nearest the tangent-line prediction.
CxMap continued_log(CxMap f, cx anchor)
{
    const double h = 1e-6;
    cx f0 = f(anchor);
    f0 -= cx(0.0, 2 * kPi * std::round(f0.imag() / (2 * kPi)));
    cx fp = f(anchor + h), fm = f(anchor - h);
    auto snap = [](cx v, cx ref) { return v - cx(0.0, 2 * kPi * std::round((v.imag() - ref.imag()) / (2 * kPi))); };
    fp = snap(fp, f0);
    fm = snap(fm, f0);
    cx d = (fp - fm) / (2 * h);
    return [f, anchor, f0, d, snap](cx s) { return snap(f(s), f0 + d * (s - anchor)); };
}

double default_radius(cx a)
{
    double r = 0.25 * std::abs(a);
    if (a.imag() != 0.0) r = std::min(r, 0.5 * std::abs(a.imag()));
    return std::min(r, 1.0);
}

// One Lagrange pass for y = a + phi(y); returns sum of F'(a) phi^w terms.
cx lagrange_pass(const CxMap& phi, const CxMap& dF, cx a, int q, double r, std::vector<double>* sizes)
{
    cx sum = 0.0;
    int grow = 0;
    double prev = 0.0;
    double fact = 1.0;
    for (int w = 1; w <= q; ++w) {
        fact *= w;
        CxMap g = [&](cx y) {
            cx p = phi(y);
            cx v = std::pow(p, w);
            return dF ? dF(y) * v : v;
        };
        cx term = contour_derivative(g, a, w - 1, r) / fact;
        double m = std::abs(term);
        if (sizes) sizes->push_back(m);
        if (w > 1 && m > prev && m > 1e-14) {
            if (++grow >= 3) throw Error(ErrorKind::divergence, "lagrange_solve: terms grew for 3 consecutive orders");
        } else {
            grow = 0;
        }
        prev = m;
        sum += term;
    }
    return sum;
}

}  // namespace

cx chi_factor(cx s)
{
    if (s.imag() == 0.0 && s.real() >= 1.0 && s.real() == std::floor(s.real()))
        throw Error(ErrorKind::pole, "chi_factor: Gamma(1-s) pole at s=" + num(s.real()));
    return std::exp(log_chi(s));
}

cx fe_root_newton(cx seed, double tol)
{
    if (seed == cx(1.0, 0.0) || seed == cx(0.0, 0.0)) throw Error(ErrorKind::pole, "fe_root_newton: seed on a pole");
    cx z = seed;
    const double h = 1e-7;
    for (int it = 0; it < 80; ++it) {
        cx f = fe_gap(z);
        if (std::abs(f) < tol * 1e-3) return z;
        cx d = (fe_gap(z + h) - fe_gap(z - h)) / (2 * h);
        if (d == 0.0) break;
        cx step = -f / d;
        for (int k = 0; k < 10 && std::abs(fe_gap(z + step)) > std::abs(f); ++k) step *= 0.5;
        z += step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (!(std::abs(fe_gap(z)) < tol))
        throw Error(ErrorKind::divergence, "fe_root_newton: no convergence from seed");
    return z;
}

cx contour_derivative(const CxMap& f, cx center, int order, double radius)
{
    if (order < 0) throw Error(ErrorKind::parameter, "contour_derivative: negative order");
    if (!(radius > 0.0)) throw Error(ErrorKind::parameter, "contour_derivative: radius must be positive");
    const int n = std::max(64, 8 * order);
    std::vector<cx> v(n);
    for (int j = 0; j < n; ++j) {
        double th = 2 * kPi * j / n;
        cx w = std::polar(1.0, th);
        v[j] = f(center + radius * w) * std::polar(1.0, -order * th);
    }
    cx mean = pairwise_sum(v.data(), v.size()) / static_cast<double>(n);
    return mean * std::exp(std::lgamma(order + 1.0) - order * std::log(radius));
}

LagrangeResult lagrange_solve(const LagrangeProblem& p)
{
    if (p.q < 1 || p.q > 40) throw Error(ErrorKind::parameter, "lagrange_solve: order must be in 1..40");
    if (!p.phi) throw Error(ErrorKind::parameter, "lagrange_solve: missing phi");
    const double r = p.r > 0.0 ? p.r : 0.25 * std::abs(p.anchor);
    if (!(r > 0.0)) throw Error(ErrorKind::parameter, "lagrange_solve: zero contour radius");
    auto F = [&](cx y) { return p.F ? p.F(y) : y; };

    LagrangeResult res;
    res.seed = F(p.anchor);
    res.raw = res.seed + lagrange_pass(p.phi, p.dF, p.anchor, p.q, r, &res.term_sizes);

    // Re-anchor on the current y and divide out the linear part so that the
    // new phi is flat at the anchor; a few low orders then suffice.
    cx y = p.anchor + lagrange_pass(p.phi, nullptr, p.anchor, p.q, r, nullptr);
    auto G = [&](cx v) { return p.anchor + p.phi(v) - v; };
    for (int round = 0; round < 12 && std::abs(G(y)) > 1e-15 * std::max(1.0, std::abs(y)); ++round) {
        cx a = y;
        cx d = contour_derivative(G, a, 1, std::min(r, 0.1));
        if (std::abs(d) < 1e-12) break;
        double rr = std::min(r, std::max(4.0 * std::abs(G(a) / d), 1e-4));
        CxMap psi = [&, a, d](cx v) { return -(G(v) - d * (v - a)) / d; };
        cx step = lagrange_pass(psi, nullptr, a, std::min(p.q, 6), rr, nullptr);
        y = a + step;
        ++res.refinements;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(y))) break;
    }
    res.value = F(y);
    res.residual = std::abs(G(y));
    if (p.original) res.original_residual = std::abs(p.original(res.value));
    return res;
}

LagrangeProblem six_power_problem(int k, int q)
{
    const double l6 = std::log(6.0);
    auto z_of = [k, l6](cx y) { return (std::log(y) + cx(0.0, 2 * kPi * k)) / l6; };
    LagrangeProblem p;
    p.k = k;
    p.q = q;
    p.anchor = 3.0;
    p.r = 0.75;
    p.F = z_of;
    p.dF = [l6](cx y) { return 1.0 / (y * l6); };
    p.phi = [z_of](cx y) {
        cx z = z_of(y);
        return -1.5 * std::exp(z * std::log(4.0)) + 3.0 * std::exp(z * std::log(2.0 / 3.0));
    };
    p.original = [](cx z) {
        return std::exp(z * std::log(6.0)) + 1.5 * std::exp(z * std::log(4.0)) - 3.0 -
               3.0 * std::exp(z * std::log(2.0 / 3.0));
    };
    return p;
}

LagrangeProblem type1_problem(int k, int q)
{
    LagrangeProblem p;
    p.k = k;
    p.q = q;
    p.anchor = cx(std::log(2.0), 2 * kPi * k) / kLn2Pi;
    p.r = default_radius(p.anchor);
    CxMap e = continued_log(
        [](cx s) {
            return std::log(std::cos(kPi * s / 2.0)) + log_gamma(s).value -
                   std::log(zeta(1.0 - s).value / zeta(s).value);
        },
        p.anchor);
    p.phi = [e](cx s) { return -e(s) / kLn2Pi; };
    p.original = fe_gap;
    return p;
}

LagrangeProblem type2_problem(int k, int q)
{
    LagrangeProblem p;
    p.k = k;
    p.q = q;
    p.anchor = cx(std::log(kPi), 2 * kPi * k) / kLn2Pi;
    p.r = default_radius(p.anchor);
    CxMap e = continued_log(
        [](cx s) {
            return std::log(std::sin(kPi * s / 2.0)) + log_gamma(1.0 - s).value -
                   std::log(zeta(s).value / zeta(1.0 - s).value);
        },
        p.anchor);
    p.phi = [e](cx s) { return -e(s) / kLn2Pi; };
    p.original = fe_gap;
    return p;
}

LagrangeProblem half_line_problem(int k, int q)
{
    const double lp = std::log(kPi);
    LagrangeProblem p;
    p.k = k;
    p.q = q;
    p.anchor = cx(0.5, 2 * kPi * k / lp);
    p.r = default_radius(p.anchor);
    CxMap e = continued_log(
        [](cx s) {
            return log_gamma((1.0 - s) / 2.0).value - log_gamma(s / 2.0).value -
                   std::log(zeta(s).value / zeta(1.0 - s).value);
        },
        p.anchor);
    p.phi = [e, lp](cx s) { return -e(s) / lp; };
    p.original = fe_gap;
    return p;
}

StripInfo strip_geometry(int n)
{
    if (n < 2) throw Error(ErrorKind::parameter, "strip_geometry: n must be >= 2");
    StripInfo s;
    s.width = 2 * kPi / std::log(static_cast<double>(n));
    s.overlaps_previous = n >= 3 && 2 * kPi / std::log(n - 1.0) < 4 * kPi / std::log(static_cast<double>(n));
    return s;
}

ReBounds re_bounds()
{
    ReBounds b;
    b.low = std::log(2.0) / kLn2Pi;
    b.high = std::log(kPi) / kLn2Pi;
    b.mean = 0.5 * (b.low + b.high);
    return b;
}

QzMap qz_zero_map(double q, int count, const std::vector<ZeroRecord>& zeros)
{
    if (q == 0.0 || !std::isfinite(q)) throw Error(ErrorKind::parameter, "qz_zero_map: q must be nonzero");
    if (count < 0) throw Error(ErrorKind::parameter, "qz_zero_map: negative count");
    if (static_cast<int>(zeros.size()) < count)
        throw Error(ErrorKind::io, "qz_zero_map: zero cache has " + std::to_string(zeros.size()) + " records, need " +
                                       std::to_string(count));
    QzMap m;
    m.critical_line = 1.0 / (2 * q);
    for (int i = 0; i < count; ++i) {
        m.nontrivial.push_back(cx(0.5, zeros[i].gamma) / q);
        m.trivial.push_back(-2.0 * (i + 1) / q);
    }
    return m;
}

PowerSumSeries power_sums_from_log_deriv(const std::vector<cx>& zeros, const std::vector<cx>& poles, int M)
{
    if (M < 1) throw Error(ErrorKind::parameter, "power_sums_from_log_deriv: M must be >= 1");
    for (const auto* set : {&zeros, &poles})
        for (cx z : *set)
            if (z == 0.0) throw Error(ErrorKind::domain, "power_sums_from_log_deriv: zero or pole at the origin");

    PowerSumSeries out;
    out.M = M;
    std::vector<cx> terms;
    for (int m = 1; m <= M; ++m) {
        terms.clear();
        for (cx z : zeros) terms.push_back(std::pow(z, -m));
        for (cx p : poles) terms.push_back(-std::pow(p, -m));
        out.c.push_back(pairwise_sum(terms.data(), terms.size()));
    }

    // Second route: Taylor coefficients of log of prod(1 - z/z_n) / prod(1 - z/p_n).
    auto product = [M](const std::vector<cx>& roots) {
        std::vector<cx> c(M + 1, 0.0);
        c[0] = 1.0;
        for (cx r : roots)
            for (int j = M; j >= 1; --j) c[j] -= c[j - 1] / r;
        return c;
    };
    auto series_log = [M](const std::vector<cx>& a) {
        // a[0] = 1; L' = a'/a gives n L_n = n a_n - sum_{j<n} j L_j a_{n-j}.
        std::vector<cx> L(M + 1, 0.0);
        for (int n = 1; n <= M; ++n) {
            cx s = static_cast<double>(n) * a[n];
            for (int j = 1; j < n; ++j) s -= static_cast<double>(j) * L[j] * a[n - j];
            L[n] = s / static_cast<double>(n);
        }
        return L;
    };
    auto lz = series_log(product(zeros));
    auto lp = series_log(product(poles));
    for (int m = 1; m <= M; ++m) {
        cx alt = -static_cast<double>(m) * (lz[m] - lp[m]);
        double scale = 0.0;
        for (cx z : zeros) scale += std::pow(std::abs(z), -m);
        for (cx p : poles) scale += std::pow(std::abs(p), -m);
        out.cross_check = std::max(out.cross_check, std::abs(alt - out.c[m - 1]) / std::max(scale, 1e-300));
    }
    return out;
}

namespace {

struct Probe {
    double value = 0.0;
    int probe = 0;
    double err = 1e300;
    double drift = 0.0;
};

// Best probe for zero n after removing every other current estimate.
Probe best_probe(const std::vector<double>& total, const std::vector<double>& vals, const std::vector<double>& errs,
                 std::size_t n)
{
    const double eps = std::numeric_limits<double>::epsilon();
    const int sp = static_cast<int>(total.size()) - 1;
    std::vector<double> est(sp + 1, 0.0), noise(sp + 1, 1e300);
    for (int s = 1; s <= sp; ++s) {
        double rem = total[s], carried = 0.0;
        for (std::size_t k = 0; k < vals.size(); ++k) {
            if (k == n) continue;
            double t = std::pow(vals[k], -static_cast<double>(s));
            rem -= t;
            carried += s * errs[k] * t;
        }
        if (!(rem > 0.0)) continue;
        est[s] = std::pow(rem, -1.0 / s);
        noise[s] = (4 * eps * total[s] * (1 + vals.size()) + carried) / (s * rem);
    }
    Probe best;
    for (int s = 3; s <= sp; ++s) {
        if (noise[s] >= 1e300 || noise[s - 2] >= 1e300) continue;
        // Truncation from the decay of successive differences.
        double trunc = 0.0;
        if (s + 2 <= sp && noise[s + 1] < 1e300 && noise[s + 2] < 1e300) {
            double d0 = std::abs(est[s] - est[s + 1]), d1 = std::abs(est[s + 1] - est[s + 2]);
            double q = d0 > 0.0 ? std::min(d1 / d0, 0.95) : 0.0;
            trunc = d0 / (1.0 - q) / est[s];
        }
        double err = noise[s] + trunc;
        if (err <= best.err) {
            best.err = err;
            best.probe = s;
            best.value = est[s];
            best.drift = std::abs(est[s] - est[s - 2]) / est[s];
        }
    }
    return best;
}

}  // namespace

std::vector<ExtractedZero> extract_zeros(const std::function<double(int)>& power_sum, int count, int s_probe)
{
    if (count < 1) throw Error(ErrorKind::parameter, "extract_zeros: count must be >= 1");
    if (s_probe < 4) throw Error(ErrorKind::parameter, "extract_zeros: probe exponent must be >= 4");
    std::vector<double> total(s_probe + 1);
    for (int s = 1; s <= s_probe; ++s) total[s] = power_sum(s);

    // Forward pass: the plain recurrence, plus up to two guard zeros.
    const int guards = 2;
    std::vector<double> vals, errs;
    std::vector<Probe> probes;
    for (int i = 0; i < count + guards; ++i) {
        vals.push_back(0.0);
        errs.push_back(0.0);
        std::vector<double> head(vals.begin(), vals.end() - 1), herr(errs.begin(), errs.end() - 1);
        head.push_back(std::numeric_limits<double>::infinity());  // contributes nothing
        herr.push_back(0.0);
        Probe p = best_probe(total, head, herr, head.size() - 1);
        if (p.probe == 0 || (i >= count && (p.err > 1e-3 || p.value <= vals[i - 1]))) {
            if (i < count)
                throw Error(ErrorKind::unresolved, "extract_zeros: remainder vanished at zero " + std::to_string(i + 1));
            vals.pop_back();
            errs.pop_back();
            break;
        }
        vals.back() = p.value;
        errs.back() = p.err;
        probes.push_back(p);
    }
    // Back-substitution sweeps: each zero again, with all others removed.
    for (int sweep = 0; sweep < 4; ++sweep) {
        double moved = 0.0;
        for (std::size_t n = 0; n < vals.size(); ++n) {
            Probe p = best_probe(total, vals, errs, n);
            if (p.probe == 0 || p.err >= errs[n]) continue;
            moved = std::max(moved, std::abs(p.value - vals[n]) / vals[n]);
            vals[n] = p.value;
            errs[n] = p.err;
            probes[n] = p;
        }
        if (moved < 1e-15) break;
    }

    std::vector<ExtractedZero> out;
    for (int i = 0; i < count; ++i) {
        const Probe& p = probes[i];
        if (p.drift > 1e-6)
            throw Error(ErrorKind::unresolved, "extract_zeros: probes " + std::to_string(p.probe) + " and " +
                                                   std::to_string(p.probe - 2) + " disagree by " + num(p.drift));
        out.push_back({p.value, p.probe, p.drift});
    }
    return out;
}

}  // namespace zk
