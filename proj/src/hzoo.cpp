#include "zetakit/hzoo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include "zetakit/io.hpp"

namespace zk {

namespace {

bool cx_less(cx a, cx b)
{
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Mean of f on a small circle: the value at the center of a removable singularity.
cx circle_mean(const std::function<cx(cx)>& f, cx c, double r, int n = 32)
{
    std::vector<cx> v(n);
    for (int j = 0; j < n; ++j) v[j] = f(c + std::polar(r, 2 * kPi * (j + 0.5) / n));
    return pairwise_sum(v.data(), v.size()) / static_cast<double>(n);
}

cx cpow_real(double base, cx s)
{
    return std::exp(s * std::log(base));
}

std::vector<cx> dedupe_sorted(std::vector<cx> zs, double tol)
{
    std::sort(zs.begin(), zs.end(), cx_less);
    std::vector<cx> out;
    for (cx z : zs) {
        bool dup = false;
        for (cx k : out)
            if (std::abs(k - z) < tol * std::max(1.0, std::abs(z))) dup = true;
        if (!dup) out.push_back(z);
    }
    return out;
}

// ---------------------------------------------------------------- scanning

using Fn = std::function<cx(cx)>;

double arg_change(const Fn& f, cx za, cx zb, cx fa, cx fb, double tau, int depth)
{
    double d = std::arg(fb / fa);
    cx zm = 0.5 * (za + zb);
    cx fm = f(zm);
    if (std::abs(d) < tau) {
        double d1 = std::arg(fm / fa), d2 = std::arg(fb / fm);
        if (std::abs(d1 + d2 - d) < 1e-6) return d;
    }
    if (depth >= 60) throw Error(ErrorKind::unresolved, "scan: argument not resolved along an edge");
    return arg_change(f, za, zm, fa, fm, tau, depth + 1) + arg_change(f, zm, zb, fm, fb, tau, depth + 1);
}

// Winding number with sampling threshold tau; ok is false when the total is
// not close to a multiple of 2 pi.
int winding_at(const Fn& f, const Rect& r, double tau, double seg, bool& ok)
{
    cx c[4] = {cx(r.re_lo, r.im_lo), cx(r.re_hi, r.im_lo), cx(r.re_hi, r.im_hi), cx(r.re_lo, r.im_hi)};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        cx a = c[e], b = c[(e + 1) % 4];
        int n = std::max(2, static_cast<int>(std::ceil(std::abs(b - a) / seg)));
        cx prev = a, fprev = f(a);
        for (int j = 1; j <= n; ++j) {
            cx z = j == n ? b : a + (b - a) * (static_cast<double>(j) / n);
            cx fz = f(z);
            total += arg_change(f, prev, z, fprev, fz, tau, 0);
            prev = z;
            fprev = fz;
        }
    }
    double w = total / (2 * kPi);
    ok = std::abs(w - std::round(w)) < 0.05;
    return static_cast<int>(std::lround(w));
}

// Count accepted once two successive refinements agree.
int cell_count(const Fn& f, const Rect& r)
{
    double seg = std::max(r.re_hi - r.re_lo, r.im_hi - r.im_lo) / 4;
    bool ok0 = false, ok1 = false, ok2 = false;
    int c0 = winding_at(f, r, 0.5, seg, ok0);
    int c1 = winding_at(f, r, 0.25, seg / 2, ok1);
    if (ok0 && ok1 && c0 == c1) return c1;
    int c2 = winding_at(f, r, 0.125, seg / 4, ok2);
    if (ok1 && ok2 && c1 == c2) return c2;
    throw Error(ErrorKind::unresolved, "scan: cell counts disagree after two refinements");
}

bool inside(const Rect& r, cx z, double slack)
{
    return z.real() >= r.re_lo - slack && z.real() <= r.re_hi + slack && z.imag() >= r.im_lo - slack &&
           z.imag() <= r.im_hi + slack;
}

bool newton(const Fn& f, const Fn& df, cx& z)
{
    cx fz = f(z);
    for (int it = 0; it < 100; ++it) {
        if (fz == 0.0) return true;
        cx d = df(z);
        if (d == 0.0 || !std::isfinite(std::abs(d))) return false;
        cx full = fz / d;
        if (std::abs(full) < 1e-15 * std::max(1.0, std::abs(z))) return std::isfinite(std::abs(fz));
        cx step = full, zn = z - step, fn = f(zn);
        for (int h = 0; h < 20 && !(std::abs(fn) < std::abs(fz)); ++h) {
            step *= 0.5;
            zn = z - step;
            fn = f(zn);
        }
        if (!(std::abs(fn) < std::abs(fz))) return std::abs(full) < 1e-12 * std::max(1.0, std::abs(z));
        z = zn;
        fz = fn;
    }
    return false;
}

std::vector<Rect> quarter(const Rect& r, double t)
{
    double xm = r.re_lo + t * (r.re_hi - r.re_lo), ym = r.im_lo + t * (r.im_hi - r.im_lo);
    return {{r.re_lo, xm, r.im_lo, ym}, {xm, r.re_hi, r.im_lo, ym}, {r.re_lo, xm, ym, r.im_hi}, {xm, r.re_hi, ym, r.im_hi}};
}

void isolate(const Fn& f, const Fn& df, const Rect& r, int count, int depth, std::vector<cx>& out)
{
    if (count <= 0) return;
    double size = std::max(r.re_hi - r.re_lo, r.im_hi - r.im_lo);
    if (count == 1 || depth >= 12) {
        cx z(0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi));
        if (newton(f, df, z) && inside(r, z, 1e-9 * size)) {
            out.push_back(z);
            return;
        }
        if (depth >= 12) throw Error(ErrorKind::unresolved, "scan: root not isolated");
    }
    for (double t : {0.5, 0.4375}) {
        std::vector<Rect> q = quarter(r, t);
        int c[4], sum = 0;
        for (int i = 0; i < 4; ++i) sum += c[i] = cell_count(f, q[i]);
        if (sum != count) continue;
        for (int i = 0; i < 4; ++i) isolate(f, df, q[i], c[i], depth + 1, out);
        return;
    }
    throw Error(ErrorKind::unresolved, "scan: sub-cell counts do not add up");
}

Rect inset(const Rect& r)
{
    double e = 1e-6 * std::max(r.re_hi - r.re_lo, r.im_hi - r.im_lo);
    return {r.re_lo + e, r.re_hi - e, r.im_lo + e, r.im_hi - e};
}

// d^m/dx^m cot x as a polynomial in cot x, coefficients low to high.
std::vector<double> cot_derivative_poly(int m)
{
    std::vector<double> p = {0.0, 1.0};
    for (int k = 0; k < m; ++k) {
        std::vector<double> d(p.size() + 1, 0.0);
        // -(1 + c^2) p'(c)
        for (std::size_t j = 1; j < p.size(); ++j) {
            double a = j * p[j];
            d[j - 1] -= a;
            d[j + 1] -= a;
        }
        while (d.size() > 1 && d.back() == 0.0) d.pop_back();
        p = d;
    }
    return p;
}

// psi(m, z) from the reflection formula, with psi(m, 1-z) taken from zeta(m+1, 1-z).
double polygamma_gap(int q, cx z)
{
    int m = q - 1;
    double mfact = std::tgamma(m + 1.0);
    double sgn_m = m % 2 ? -1.0 : 1.0;
    cx psi_ref = -sgn_m * mfact * hurwitz_zeta(static_cast<double>(q), 1.0 - z).value;  // (-1)^{m+1} m! zeta
    cx c = std::cos(kPi * z) / std::sin(kPi * z);
    std::vector<double> p = cot_derivative_poly(m);
    cx poly = 0.0;
    for (std::size_t j = p.size(); j-- > 0;) poly = poly * c + p[j];
    cx cot_term = std::pow(kPi, m + 1) * poly;
    cx psi = sgn_m * psi_ref - cot_term;
    cx rhs = (q % 2 ? -1.0 : 1.0) * mfact * hurwitz_zeta(static_cast<double>(q), z).value;
    double scale = std::max({1.0, std::abs(psi_ref), std::abs(cot_term)});
    return std::abs(psi - rhs) / scale;
}

// ---------------------------------------------------------------- Epstein

struct GaussOctant {
    std::vector<double> x, w;  // on [-1, 1]
};

const GaussOctant& gauss_nodes()
{
    static GaussOctant g;
    static std::once_flag once;
    std::call_once(once, [] {
        using G = boost::math::quadrature::gauss<double, 40>;
        const auto& a = G::abscissa();
        const auto& w = G::weights();
        for (std::size_t i = 0; i < a.size(); ++i) {
            g.x.push_back(a[i]);
            g.w.push_back(w[i]);
            if (a[i] != 0.0) {
                g.x.push_back(-a[i]);
                g.w.push_back(w[i]);
            }
        }
    });
    return g;
}

// Integral of Q^{-s} outside the square of half-side L.
cx epstein_outer_integral(const EpsteinForm& f, cx s, double L)
{
    const auto& g = gauss_nodes();
    cx total = 0.0;
    for (int o = 0; o < 8; ++o) {
        double t0 = o * kPi / 4, t1 = (o + 1) * kPi / 4;
        double h = 0.5 * (t1 - t0), mid = 0.5 * (t0 + t1);
        std::vector<cx> v(g.x.size());
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            double t = mid + h * g.x[i];
            double ct = std::cos(t), st = std::sin(t);
            double qt = f.a * ct * ct + f.b * ct * st + f.c * st * st;
            double rho = L / std::max(std::abs(ct), std::abs(st));
            v[i] = g.w[i] * std::exp(-s * std::log(qt) + (2.0 - 2.0 * s) * std::log(rho));
        }
        total += h * pairwise_sum(v.data(), v.size());
    }
    return total / (2.0 * s - 2.0);
}

bool near_removable(cx s)
{
    if (std::abs(s.imag()) > 1e-6 || s.real() > 0.5 + 1e-6) return false;
    double t = 2 * s.real();
    return std::abs(t - std::round(t)) < 2e-6;
}

// ---------------------------------------------------------------- tags

double parse_number(std::string t)
{
    t = trim(t);
    if (t.rfind("sqrt", 0) == 0) {
        std::string in = t.substr(4);
        if (!in.empty() && in.front() == '(') in = in.substr(1, in.size() - 2);
        return std::sqrt(parse_number(in));
    }
    auto slash = t.find('/');
    if (slash != std::string::npos) return parse_number(t.substr(0, slash)) / parse_number(t.substr(slash + 1));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (...) {
        used = 0;
    }
    if (used != t.size() || t.empty()) throw Error(ErrorKind::parameter, "tag: bad number '" + t + "'");
    return v;
}

void split_tag(const std::string& tag, std::string& name, std::vector<double>& args)
{
    std::string t = trim(tag);
    auto open = t.find('(');
    if (open == std::string::npos) {
        name = t;
        return;
    }
    if (t.back() != ')') throw Error(ErrorKind::parameter, "tag: missing ')' in '" + tag + "'");
    name = trim(t.substr(0, open));
    std::string inner = t.substr(open + 1, t.size() - open - 2);
    std::stringstream ss(inner);
    std::string part;
    while (std::getline(ss, part, ',')) args.push_back(parse_number(part));
}

void need_args(const std::string& name, const std::vector<double>& a, std::size_t n)
{
    if (a.size() != n) throw Error(ErrorKind::parameter, "tag " + name + ": expected " + std::to_string(n) + " argument(s)");
}

// ---------------------------------------------------------------- DH

cx chi2(cx s)
{
    return 2.0 * std::exp((s - 1.0) * std::log(2 * kPi)) * gamma_fn(1.0 - s) * std::cos(kPi * s / 2.0);
}

cx dh_piece(cx s, int which)
{
    // which 0: 1 at n=1, -1 at n=4; which 1: 1 at n=2, -1 at n=3
    double a = which == 0 ? 0.2 : 0.4, b = which == 0 ? 0.8 : 0.6;
    return cpow_real(5.0, -s) * (hurwitz_zeta(s, a).value - hurwitz_zeta(s, b).value);
}

cx dh_piece_residual(cx s, int which)
{
    return dh_piece(s, which) - cpow_real(5.0, 0.5 - s) * chi2(s) * dh_piece(1.0 - s, which);
}

bool near_positive_integer(cx s)
{
    return std::abs(s.imag()) < 1e-6 && s.real() > 0.5 && std::abs(s.real() - std::round(s.real())) < 1e-6;
}

}  // namespace

// ---------------------------------------------------------------- Hurwitz

std::vector<cx> hurwitz_negative_integer_zeros(int q)
{
    if (q < 1 || q > 30) throw Error(ErrorKind::parameter, "hurwitz_negative_integer_zeros: q must be in 1..30");
    const int n = q + 1;
    // B_n(1/2 + w) = sum_k C(n,k) B_k(1/2) w^{n-k}, B_k(1/2) = (2^{1-k} - 1) B_k.
    // The centred variable keeps the roots symmetric and the coefficients small.
    // Near the outer roots the sum cancels heavily, so the polish runs in 50 digits.
    using mpf = boost::multiprecision::cpp_bin_float_50;
    using mpc = boost::multiprecision::cpp_complex_50;
    auto bk = [](int k) -> mpf {
        if (k == 0) return 1;
        if (k == 1) return mpf(-1) / 2;
        return k % 2 ? mpf(0) : boost::math::bernoulli_b2n<mpf>(k / 2);
    };
    std::vector<mpf> coef(n + 1);  // coef[j] multiplies w^j
    mpf binom = 1;
    for (int k = 0; k <= n; ++k) {
        coef[n - k] = binom * (ldexp(mpf(1), 1 - k) - 1) * bk(k);
        binom = binom * (n - k) / (k + 1);
    }
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int j = 0; j < n; ++j) C(j, n - 1) = -static_cast<double>(coef[j]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    auto ev = es.eigenvalues();

    auto eval = [&](const mpc& w, mpc& d) {
        mpc p = coef[n];
        d = 0;
        for (int j = n - 1; j >= 0; --j) {
            d = d * w + p;
            p = p * w + coef[j];
        }
        return p;
    };
    std::vector<mpc> ws;
    for (int i = 0; i < n; ++i) {
        double re = ev[i].real(), im = ev[i].imag();
        if (std::abs(im) < 1e-9) im = 0.0;
        if (std::abs(re) < 1e-9) re = 0.0;
        mpc w(re, im);
        for (int it = 0; it < 60; ++it) {
            mpc d;
            mpc p = eval(w, d);
            if (d == mpc(0)) break;
            mpc step = p / d;
            w -= step;
            if (abs(step) < mpf(1e-40) * std::max(1.0, std::abs(cx(re, im)))) break;
        }
        ws.push_back(w);
    }
    // Roots come in pairs w, -w: mirror the left half onto the right.
    std::vector<cx> roots;
    // Round z = 1/2 + w once, from 50 digits.
    auto to_z = [](const mpf& re, const mpf& im) { return cx(static_cast<double>(re), static_cast<double>(im)); };
    for (const mpc& w : ws) {
        if (w.real() > 0) continue;
        roots.push_back(to_z(mpf(0.5) + w.real(), w.imag()));
        if (w.real() < 0) roots.push_back(to_z(mpf(0.5) - w.real(), -w.imag()));
    }
    std::sort(roots.begin(), roots.end(), cx_less);
    return roots;
}

double hurwitz_real_zero(double s, Interval bracket)
{
    auto f = [s](double a) { return hurwitz_zeta(cx(s, 0.0), cx(a, 0.0)).value.real(); };
    double fa = f(bracket.lo), fb = f(bracket.hi);
    if (fa == 0.0) return bracket.lo;
    if (fb == 0.0) return bracket.hi;
    if ((fa < 0) == (fb < 0)) throw Error(ErrorKind::domain, "hurwitz_real_zero: no sign change on the bracket");
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
    auto r = boost::math::tools::toms748_solve(f, bracket.lo, bracket.hi, fa, fb, tol, iters);
    double x = std::abs(f(r.first)) <= std::abs(f(r.second)) ? r.first : r.second;
    if (!(std::abs(f(x)) < 1e-10)) throw Error(ErrorKind::unresolved, "hurwitz_real_zero: residual above 1e-10");
    return x;
}

int winding_count(const std::function<cx(cx)>& f, const Rect& r)
{
    return cell_count(f, inset(r));
}

std::vector<ScanRoot> scan_zeros(const std::function<cx(cx)>& f, const std::function<cx(cx)>& df,
                                 const Rect& region, double grid, const Parallel& par)
{
    if (!(grid > 0.0)) throw Error(ErrorKind::parameter, "scan: grid must be positive");
    if (!(region.re_hi > region.re_lo && region.im_hi > region.im_lo))
        throw Error(ErrorKind::parameter, "scan: empty region");
    Rect r = inset(region);
    const int total = cell_count(f, r);
    int nx = std::max(1, static_cast<int>(std::ceil((r.re_hi - r.re_lo) / grid)));
    int ny = std::max(1, static_cast<int>(std::ceil((r.im_hi - r.im_lo) / grid)));
    // Cell lines sit at irregular offsets; a zero close to a line can hide from
    // both neighbours, which shows up as a shortfall against the outer count.
    for (double off : {0.1913, 0.5617, 0.8291}) {
        auto lines = [off](double lo, double hi, int n) {
            double d = (hi - lo) / n;
            std::vector<double> v{lo};
            for (int i = 0; i <= n; ++i) {
                double x = lo + (i + off) * d;
                if (x > lo + 1e-3 * d && x < hi - 1e-3 * d) v.push_back(x);
            }
            v.push_back(hi);
            return v;
        };
        std::vector<double> xs = lines(r.re_lo, r.re_hi, nx), ys = lines(r.im_lo, r.im_hi, ny);
        std::size_t cx_n = xs.size() - 1, cy_n = ys.size() - 1;
        std::vector<Rect> cells;
        for (std::size_t j = 0; j < cy_n; ++j)
            for (std::size_t i = 0; i < cx_n; ++i) cells.push_back({xs[i], xs[i + 1], ys[j], ys[j + 1]});
        auto counts = par.map<int>(cells.size(), [&](std::size_t i) { return cell_count(f, cells[i]); });
        int sum = 0;
        for (int c : counts) sum += c;
        if (sum != total) continue;
        auto found = par.map<std::vector<cx>>(cells.size(), [&](std::size_t i) {
            std::vector<cx> out;
            isolate(f, df, cells[i], counts[i], 0, out);
            return out;
        });
        std::vector<cx> all;
        for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
        std::vector<ScanRoot> res;
        for (cx z : dedupe_sorted(all, 1e-9)) res.push_back({z, std::abs(f(z)), -1.0});
        return res;
    }
    throw Error(ErrorKind::unresolved, "scan: cell counts do not add up to the region count");
}

std::vector<ScanRoot> hurwitz_complex_zero_scan(double q, const Rect& region, double grid, const Parallel& par)
{
    if (!(q > 1.0)) throw Error(ErrorKind::parameter, "hurwitz_complex_zero_scan: q must exceed 1");
    Fn f = [q](cx z) { return hurwitz_zeta(cx(q, 0.0), z).value; };
    Fn df = [q](cx z) { return -q * hurwitz_zeta(cx(q + 1.0, 0.0), z).value; };
    std::vector<ScanRoot> roots = scan_zeros(f, df, region, grid, par);
    if (q == std::floor(q) && q >= 2)
        for (auto& r : roots) r.psi_gap = polygamma_gap(static_cast<int>(q), r.z);
    return roots;
}

// ---------------------------------------------------------------- audits

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::confirmed: return "confirmed";
    case Verdict::refuted: return "refuted";
    default: return "inconclusive";
    }
}

Verdict classify(double residual)
{
    if (residual < kConfirmTol) return Verdict::confirmed;
    if (residual > kRefuteTol) return Verdict::refuted;
    return Verdict::inconclusive;
}

cx evaluate_tag(const std::string& tag, cx z, double tol_scale)
{
    std::string name;
    std::vector<double> a;
    split_tag(tag, name, a);
    if (name == "zeta") return need_args(name, a, 0), zeta(z).value;
    if (name == "eta") return need_args(name, a, 0), dirichlet_eta(z).value;
    if (name == "beta") return need_args(name, a, 0), dirichlet_beta(z).value;
    if (name == "fe") return need_args(name, a, 0), zeta(z).value - zeta(1.0 - z).value;
    if (name == "six_power") {
        need_args(name, a, 0);
        return cpow_real(6, z) + 1.5 * cpow_real(4, z) - 3.0 - 3.0 * cpow_real(2.0 / 3, z);
    }
    if (name == "dh") return need_args(name, a, 0), dh_function(z);
    if (name == "hurwitz") {
        need_args(name, a, 1);
        // zeta(-n, z) = -B_{n+1}(z)/(n+1) also covers z = 0.
        if (a[0] <= 0.0 && a[0] == std::floor(a[0])) {
            int n = static_cast<int>(-a[0]);
            return -bernoulli_poly(n + 1, z) / static_cast<double>(n + 1);
        }
        return hurwitz_zeta(a[0], z).value;
    }
    if (name == "hurwitz_swapped") return need_args(name, a, 1), hurwitz_zeta(z, a[0]).value;
    if (name == "zeta_scaled") return need_args(name, a, 1), zeta(a[0] * z).value;
    if (name == "epstein") {
        need_args(name, a, 1);
        return epstein_continued(EpsteinForm::rectangular(a[0]), z, false, 1e-16 * tol_scale).value;
    }
    if (name == "gzeta") return need_args(name, a, 2), gzeta(a[0], a[1], z).value;
    if (name == "dirichlet") {
        std::vector<cx> c(a.begin(), a.end());
        return PeriodicSeries(c)(z).value;
    }
    throw Error(ErrorKind::parameter, "unknown function tag '" + tag + "'");
}

ClaimAudit audit_claim(const std::string& function_tag, cx claimed_root, double tol_scale)
{
    ClaimAudit a;
    a.function_tag = function_tag;
    a.claimed_root = claimed_root;
    a.residual = std::abs(evaluate_tag(function_tag, claimed_root, tol_scale));
    a.verdict = classify(a.residual);
    return a;
}

std::vector<Claim> read_claims(std::istream& is)
{
    std::vector<Claim> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto c1 = t.find(',');
        auto c3 = t.rfind(',');
        auto c2 = c3 == std::string::npos || c3 == 0 ? std::string::npos : t.rfind(',', c3 - 1);
        if (c1 == std::string::npos || c2 == std::string::npos || c2 <= c1)
            throw Error(ErrorKind::io, "claims line " + std::to_string(lineno) + ": expected id,tag,re,im");
        Claim c;
        c.id = trim(t.substr(0, c1));
        c.tag = trim(t.substr(c1 + 1, c2 - c1 - 1));
        try {
            c.root = cx(std::stod(t.substr(c2 + 1, c3 - c2 - 1)), std::stod(t.substr(c3 + 1)));
        } catch (const std::exception&) {
            throw Error(ErrorKind::io, "claims line " + std::to_string(lineno) + ": bad number");
        }
        out.push_back(c);
    }
    return out;
}

std::vector<Claim> read_claims(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    return read_claims(in);
}

std::vector<ClaimAudit> audit_claims(const std::vector<Claim>& claims, const Parallel& par, double tol_scale)
{
    return par.map<ClaimAudit>(claims.size(), [&](std::size_t i) {
        ClaimAudit a = audit_claim(claims[i].tag, claims[i].root, tol_scale);
        a.claim_id = claims[i].id;
        return a;
    });
}

void write_audit_json(std::ostream& os, const std::vector<ClaimAudit>& audits)
{
    auto str = [](const std::string& s) { return nlohmann::json(s).dump(); };
    os << "[\n";
    for (std::size_t i = 0; i < audits.size(); ++i) {
        const auto& a = audits[i];
        os << "{\"claim_id\":" << str(a.claim_id) << ",\"function_tag\":" << str(a.function_tag)
           << ",\"re\":" << num(a.claimed_root.real()) << ",\"im\":" << num(a.claimed_root.imag())
           << ",\"residual\":" << num(a.residual) << ",\"verdict\":" << str(to_string(a.verdict)) << "}"
           << (i + 1 < audits.size() ? ",\n" : "\n");
    }
    os << "]\n";
}

// ---------------------------------------------------------------- Epstein

EpsteinForm EpsteinForm::quadratic(double a, double b, double c)
{
    if (!(a > 0.0 && c > 0.0)) throw Error(ErrorKind::parameter, "EpsteinForm: a and c must be positive");
    double d = b * b - 4 * a * c;
    if (!(d < 0.0)) throw Error(ErrorKind::parameter, "EpsteinForm: form is not positive definite");
    EpsteinForm f;
    f.a = a;
    f.b = b;
    f.c = c;
    f.D = -d;
    f.d_sign = -1;
    f.lambda = b == 0.0 ? std::sqrt(c / a) : 0.0;
    return f;
}

EpsteinForm EpsteinForm::rectangular(double lambda)
{
    if (!(lambda > 0.0)) throw Error(ErrorKind::parameter, "EpsteinForm: lambda must be positive");
    EpsteinForm f = quadratic(1.0, 0.0, lambda * lambda);
    f.lambda = lambda;
    return f;
}

cx epstein_shells(const EpsteinForm& f, cx s, int R, bool reverse)
{
    if (R < 1) throw Error(ErrorKind::parameter, "epstein_shells: R must be positive");
    std::vector<cx> shell(R);
    std::vector<cx> v;
    for (int r = 1; r <= R; ++r) {
        v.clear();
        auto add = [&](int m, int n) {
            double q = f.a * m * m + f.b * m * n + f.c * static_cast<double>(n) * n;
            v.push_back(std::exp(-s * std::log(q)));
        };
        for (int k = -r; k < r; ++k) {
            add(r, k);
            add(-r, -k);
            add(-k, r);
            add(k, -r);
        }
        shell[r - 1] = pairwise_sum(v.data(), v.size());
    }
    cx sum = 0.0;
    if (reverse)
        for (int r = R; r >= 1; --r) sum += shell[r - 1];
    else
        for (int r = 1; r <= R; ++r) sum += shell[r - 1];
    return sum + epstein_outer_integral(f, s, R + 0.5);
}

EvalResult epstein_sum_direct(const EpsteinForm& f, cx s, double tail_tol)
{
    if (!(s.real() > 1.0)) throw Error(ErrorKind::divergence, "epstein_sum_direct: needs Re s > 1");
    if (!(tail_tol > 0.0)) throw Error(ErrorKind::parameter, "epstein_sum_direct: tail_tol must be positive");
    int R = 8;
    cx prev = epstein_shells(f, s, R);
    for (R = 16; R <= 2048; R *= 2) {
        cx cur = epstein_shells(f, s, R);
        double d = std::abs(cur - prev);
        if (d <= tail_tol) return EvalResult{cur, d, R};
        prev = cur;
    }
    throw Error(ErrorKind::unresolved, "epstein_sum_direct: tail tolerance not reached");
}

EpsteinParts epstein_parts(const EpsteinForm& f, cx s, double tol)
{
    if (s == cx(1.0, 0.0)) throw Error(ErrorKind::pole, "epstein: pole at s=1");
    const double x = f.b / (2 * f.a), y = std::sqrt(f.D) / (2 * f.a);
    cx as = cpow_real(f.a, -s);
    cx lg_s = log_gamma(s).value;
    EpsteinParts p;
    p.zeta_term = 2.0 * as * zeta(2.0 * s).value;
    p.gamma_term = 2.0 * as * cpow_real(y, 1.0 - 2.0 * s) * std::sqrt(kPi) *
                   std::exp(log_gamma(s - 0.5).value - lg_s) * zeta(2.0 * s - 1.0).value;
    cx pre = 8.0 * as * cpow_real(y, 0.5 - s) * std::exp(s * std::log(kPi) - lg_s);
    cx nu = s - 0.5;
    cx sum = 0.0;
    double head = std::abs(p.zeta_term) + std::abs(p.gamma_term);
    for (int N = 1; N < 100000; ++N) {
        cx div = 0.0;
        for (int n = 1; n <= N; ++n)
            if (N % n == 0) div += cpow_real(static_cast<double>(N) / (static_cast<double>(n) * n), nu);
        cx kb = bessel_k(nu, 2 * kPi * N * y).value;
        cx mag = div * kb;
        sum += std::cos(2 * kPi * N * x) * mag;
        if (std::abs(pre * mag) < tol * (head + std::abs(pre * sum)) && 2 * kPi * N * y > std::abs(nu) + 2) break;
    }
    p.bessel_term = pre * sum;
    return p;
}

EvalResult epstein_continued(const EpsteinForm& f, cx s, bool two_term, double tol)
{
    if (s == cx(1.0, 0.0)) throw Error(ErrorKind::pole, "epstein: pole at s=1");
    auto value = [&](cx w) {
        EpsteinParts p = epstein_parts(f, w, tol);
        return two_term ? p.zeta_term + p.gamma_term : p.zeta_term + p.gamma_term + p.bessel_term;
    };
    EvalResult r;
    if (near_removable(s)) {
        r.value = circle_mean(value, s, 1e-3);
        r.est_error = 1e-12 * std::max(1.0, std::abs(r.value));
    } else {
        r.value = value(s);
        r.est_error = 1e-14 * std::max(1.0, std::abs(r.value));
    }
    return r;
}

cx epstein_completed(const EpsteinForm& f, cx s)
{
    return std::exp(s * std::log(std::sqrt(f.D) / (2 * kPi)) + log_gamma(s).value) *
           epstein_continued(f, s).value;
}

// ---------------------------------------------------------------- periodic series

PeriodicSeries::PeriodicSeries(std::vector<cx> coeffs) : period(static_cast<int>(coeffs.size())), coefficients(std::move(coeffs))
{
    if (coefficients.empty()) throw Error(ErrorKind::parameter, "PeriodicSeries: empty coefficient list");
    bool any = false;
    for (cx c : coefficients) any = any || c != 0.0;
    if (!any) throw Error(ErrorKind::parameter, "PeriodicSeries: all coefficients zero");
}

EvalResult PeriodicSeries::operator()(cx s) const
{
    auto eval = [&](cx w) {
        std::vector<cx> v;
        for (int j = 1; j <= period; ++j)
            if (coefficients[j - 1] != 0.0)
                v.push_back(coefficients[j - 1] * hurwitz_zeta(w, static_cast<double>(j) / period).value);
        return cpow_real(period, -w) * pairwise_sum(v.data(), v.size());
    };
    EvalResult r;
    if (std::abs(s - 1.0) < 1e-6) {
        cx total = 0.0;
        for (cx c : coefficients) total += c;
        if (std::abs(total) > 1e-14) throw Error(ErrorKind::pole, "PeriodicSeries: pole at s=1");
        r.value = circle_mean(eval, s, 1e-3);
    } else {
        r.value = eval(s);
    }
    r.est_error = 1e-13 * std::max(1.0, std::abs(r.value));
    r.terms_used = period;
    return r;
}

PeriodicSeries PeriodicSeries::chi_m3() { return PeriodicSeries({1.0, -1.0, 0.0}); }
PeriodicSeries PeriodicSeries::chi_m4() { return PeriodicSeries({1.0, 0.0, -1.0, 0.0}); }
PeriodicSeries PeriodicSeries::chi_m7() { return PeriodicSeries({1.0, 1.0, -1.0, 1.0, -1.0, -1.0, 0.0}); }
PeriodicSeries PeriodicSeries::chi_m8() { return PeriodicSeries({1.0, 0.0, 1.0, 0.0, -1.0, 0.0, -1.0, 0.0}); }

// ---------------------------------------------------------------- Davenport-Heilbronn

double dh_xi()
{
    static double xi = 0.0;
    static std::once_flag once;
    std::call_once(once, [] {
        // The identity is linear in xi: A + xi B = 0. Both sides have a
        // removable singularity at s = 2.
        cx A = circle_mean([](cx s) { return dh_piece_residual(s, 0); }, 2.0, 1e-2);
        cx B = circle_mean([](cx s) { return dh_piece_residual(s, 1); }, 2.0, 1e-2);
        if (std::abs(B) < 1e-12) throw Error(ErrorKind::unresolved, "dh_xi: degenerate identity");
        cx x = -A / B;
        if (std::abs(x.imag()) > 1e-10 * std::abs(x)) throw Error(ErrorKind::unresolved, "dh_xi: complex solution");
        xi = x.real();
    });
    return xi;
}

cx dh_function(cx s)
{
    return dh_piece(s, 0) + dh_xi() * dh_piece(s, 1);
}

cx dh_fe_residual(cx s)
{
    auto r = [](cx w) { return dh_function(w) - cpow_real(5.0, 0.5 - w) * chi2(w) * dh_function(1.0 - w); };
    if (near_positive_integer(s)) return circle_mean(r, s, 1e-2);
    return r(s);
}

ScanRoot dh_newton(cx seed, double tol)
{
    Fn f = dh_function;
    Fn df = [](cx z) {
        double h = 1e-5;
        return (dh_function(z + h) - dh_function(z - h)) / (2 * h);
    };
    cx z = seed;
    if (!newton(f, df, z)) throw Error(ErrorKind::divergence, "dh_newton: no convergence");
    double res = std::abs(f(z));
    if (!(res < std::max(tol, 1e-9))) throw Error(ErrorKind::divergence, "dh_newton: residual too large");
    return {z, res, -1.0};
}

// ---------------------------------------------------------------- G-zeta

std::string to_string(GzetaCase c)
{
    switch (c) {
    case GzetaCase::I: return "I";
    case GzetaCase::II: return "II";
    case GzetaCase::III: return "III";
    case GzetaCase::IV: return "IV";
    case GzetaCase::V: return "V";
    default: return "reduction";
    }
}

GzetaCase gzeta_case(double alpha, double beta)
{
    if (alpha == 0.0) throw Error(ErrorKind::parameter, "gzeta: alpha must be nonzero");
    if (beta == 0.0) return GzetaCase::reduction;
    if (alpha > 0.0) return beta > 0.0 ? GzetaCase::IV : GzetaCase::III;
    if (beta < 0.0) return GzetaCase::II;
    if (beta == -alpha) throw Error(ErrorKind::parameter, "gzeta: q = 0");
    return beta < -alpha ? GzetaCase::I : GzetaCase::V;
}

EvalResult gzeta(double alpha, double beta, cx z)
{
    if (gzeta_case(alpha, beta) == GzetaCase::III)
        throw Error(ErrorKind::divergence, "gzeta: alpha > 0, beta < 0 is the divergent case");
    double q = (alpha + beta) / alpha;
    cx la = std::log(cx(alpha, 0.0));
    EvalResult h = hurwitz_zeta(z, q);
    cx pre = std::exp(-z * la);
    return EvalResult{pre * h.value, std::abs(pre) * h.est_error, h.terms_used};
}

GzetaSearch gzeta_zero_search(double alpha, double beta, const Rect& region, const Parallel& par)
{
    GzetaSearch out;
    out.kind = gzeta_case(alpha, beta);
    if (out.kind == GzetaCase::III) throw Error(ErrorKind::divergence, "gzeta: alpha > 0, beta < 0 is the divergent case");
    const double q = (alpha + beta) / alpha;
    if (q < 0.0 && q == std::floor(q)) throw Error(ErrorKind::parameter, "gzeta: q is a negative integer");
    // alpha^{-z} never vanishes, so work with zeta(z, q). For q < 0 the first
    // m terms have negative bases and carry e^{-i pi z}; above the real axis
    // that factor is huge and cancels, so there we use
    // e^{i pi z} zeta(z, q) = sum_{n<m} |n+q|^{-z} + e^{i pi z} zeta(z, q+m).
    const int m = q < 0.0 ? static_cast<int>(std::ceil(-q)) : 0;
    Fn lower = [q](cx z) { return hurwitz_zeta(z, q).value; };
    Fn upper = [q, m](cx z) {
        cx acc = 0.0;
        for (int n = 0; n < m; ++n) acc += std::exp(-z * std::log(std::abs(n + q)));
        return acc + std::exp(cx(0.0, kPi) * z) * hurwitz_zeta(z, q + m).value;
    };
    auto deriv = [](const Fn& f) {
        return Fn([f](cx z) {
            double h = 1e-5 * std::max(1.0, std::abs(z));
            return (f(z + h) - f(z - h)) / (2 * h);
        });
    };
    auto pick = [&](cx z) -> const Fn& { return m > 0 && z.imag() > 0.0 ? upper : lower; };
    Rect r = inset(region);

    // Generator seeds: (1/q)^z = u with u = -zeta(z, q+1).
    std::vector<cx> seeded;
    if (q != 1.0) {
        cx L = std::log(cx(1.0 / q, 0.0));
        double span = std::max(std::abs(region.im_lo), std::abs(region.im_hi)) * std::abs(L) / (2 * kPi);
        int K = static_cast<int>(std::ceil(span)) + 2;
        auto got = par.map<std::vector<cx>>(2 * K + 1, [&](std::size_t i) {
            int k = static_cast<int>(i) - K;
            cx z(0.5 * (region.re_lo + region.re_hi), (cx(0.0, 2 * kPi * k) / L).imag());
            std::vector<cx> v;
            try {
                for (int it = 0; it < 4; ++it) {
                    cx u = -hurwitz_zeta(z, q + 1.0).value;
                    z = (cx(0.0, 2 * kPi * k) + std::log(u)) / L;
                }
                const Fn& f = pick(z);
                if (newton(f, deriv(f), z) && inside(r, z, 0.0) && std::abs(pick(z)(z)) < 1e-9) v.push_back(z);
            } catch (const Error&) {
            }
            return v;
        });
        for (auto& v : got) seeded.insert(seeded.end(), v.begin(), v.end());
    }
    seeded = dedupe_sorted(seeded, 1e-9);
    out.seeded = static_cast<int>(seeded.size());

    // Split at the real axis when the two forms differ.
    std::vector<std::pair<Rect, const Fn*>> parts;
    if (m > 0 && region.im_lo < 0.0 && region.im_hi > 0.0) {
        parts.push_back({{region.re_lo, region.re_hi, region.im_lo, 0.0}, &lower});
        parts.push_back({{region.re_lo, region.re_hi, 0.0, region.im_hi}, &upper});
    } else {
        parts.push_back({region, m > 0 && region.im_lo >= 0.0 ? &upper : &lower});
    }
    double grid = std::min(0.5, 0.5 * std::max(region.re_hi - region.re_lo, 1e-3));
    std::vector<cx> all = seeded;
    for (const auto& [part, f] : parts) {
        for (const auto& s : scan_zeros(*f, deriv(*f), part, grid, par)) all.push_back(s.z);
        out.certified_count += winding_count(*f, part);
    }
    for (cx z : dedupe_sorted(all, 1e-9)) {
        GzetaRoot g;
        g.z = z;
        g.residual = std::abs(pick(z)(z));
        g.in_strip = z.real() > 0.0 && z.real() < 1.0;
        out.roots.push_back(g);
    }
    return out;
}

}  // namespace zk
