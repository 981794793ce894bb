#include "zetakit/zerofind.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "zetakit/io.hpp"

namespace zk {

namespace {

constexpr double kDelta = 1e-6;
constexpr double kE = 2.71828182845904523536;

double gap_estimate(double t)
{
    double l = std::log(std::max(t, 1.0) / (2 * kPi));
    return l > 0.0 ? 2 * kPi / l : 1e300;
}

double scan_step(double t)
{
    return std::min(0.05, gap_estimate(t) / 8.0);
}

double residual_at(double t)
{
    return std::abs(zeta(cx(0.5, t)).value);
}

double arg_segment(double s0, double s1, double t, cx z0, cx z1, int depth)
{
    double d = std::arg(z1 / z0);
    if (std::abs(d) <= kPi / 2 || depth > 30) return d;
    double sm = 0.5 * (s0 + s1);
    cx zm = zeta(cx(sm, t)).value;
    return arg_segment(s0, sm, t, z0, zm, depth + 1) + arg_segment(sm, s1, t, zm, z1, depth + 1);
}

struct Bracket {
    double a, b;
};

// Sign-change brackets of Z on [lo,hi], including pairs hidden between grid points.
std::vector<Bracket> scan_brackets(double lo, double hi, double h0)
{
    int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / h0)));
    double h = (hi - lo) / n;
    std::vector<double> t(n + 1), z(n + 1);
    for (int i = 0; i <= n; ++i) {
        t[i] = i == n ? hi : lo + i * h;
        z[i] = hardy_z(t[i]);
    }
    std::vector<Bracket> out;
    for (int i = 0; i < n; ++i) {
        bool change = (z[i] < 0) != (z[i + 1] < 0);
        bool dip = false;
        if (!change && i + 2 <= n) {
            bool same = (z[i] < 0) == (z[i + 2] < 0) && (z[i] < 0) == (z[i + 1] < 0);
            dip = same && std::abs(z[i + 1]) < std::abs(z[i]) && std::abs(z[i + 1]) < std::abs(z[i + 2]);
        }
        if (change) out.push_back({t[i], t[i + 1]});
        if (dip && h > 1e-4) {
            auto sub = scan_brackets(t[i], t[i + 2], h / 16.0);
            out.insert(out.end(), sub.begin(), sub.end());
        }
    }
    std::sort(out.begin(), out.end(), [](const Bracket& x, const Bracket& y) { return x.a < y.a; });
    std::vector<Bracket> dedup;
    for (const auto& b : out)
        if (dedup.empty() || b.a >= dedup.back().b - 1e-12) dedup.push_back(b);
    return dedup;
}

ZeroRecord bisect_bracket(Bracket br, double tol)
{
    double a = br.a, b = br.b;
    double za = hardy_z(a);
    int it = 0;
    while ((b - a) / 2 > tol) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        double zm = hardy_z(m);
        ++it;
        if (zm == 0.0) {
            a = b = m;
            break;
        }
        if ((zm < 0) == (za < 0)) {
            a = m;
            za = zm;
        } else {
            b = m;
        }
    }
    ZeroRecord r;
    r.gamma = 0.5 * (a + b);
    r.residual = residual_at(r.gamma);
    r.method = ZeroMethod::bisection;
    r.iterations = it;
    return r;
}

// Bracketed Illinois iteration for a function that is a step in the large.
template <class F>
double illinois(F f, double a, double b, double fa, double fb, double tol, int& iters)
{
    int side = 0;
    for (iters = 0; iters < 300 && b - a > 2 * tol; ++iters) {
        double c = b - fb * (b - a) / (fb - fa);
        if (!(c > a && c < b) || iters % 4 == 3) c = 0.5 * (a + b);
        double fc = f(c);
        if (fc == 0.0) return c;
        if ((fc < 0) == (fa < 0)) {
            a = c;
            fa = fc;
            if (side == -1) fb /= 2;
            side = -1;
        } else {
            b = c;
            fb = fc;
            if (side == 1) fa /= 2;
            side = 1;
        }
    }
    return 0.5 * (a + b);
}

template <class F>
void bracket_step_function(F f, double t0, double step, double& a, double& b, double& fa, double& fb)
{
    double f0 = f(t0);
    double dir = f0 < 0 ? 1.0 : -1.0;
    double t = t0, ft = f0;
    for (int k = 0; k < 400; ++k) {
        double tn = t + dir * step;
        if (tn <= 1.0) tn = 0.5 * (t + 1.0);
        double fn = f(tn);
        if ((fn < 0) != (ft < 0)) {
            if (dir > 0) {
                a = t; fa = ft; b = tn; fb = fn;
            } else {
                a = tn; fa = fn; b = t; fb = ft;
            }
            return;
        }
        t = tn;
        ft = fn;
    }
    throw Error(ErrorKind::divergence, "no sign change found while bracketing");
}

int index_of(double gamma)
{
    return exact_zero_count(gamma - 1e-4) + 1;
}

}  // namespace

std::string to_string(ZeroMethod m)
{
    switch (m) {
    case ZeroMethod::bisection: return "bisection";
    case ZeroMethod::newton: return "newton";
    case ZeroMethod::lambert_seed: return "lambert_seed";
    case ZeroMethod::franca_leclair: return "franca_leclair";
    case ZeroMethod::xlogx_fixed_point: return "xlogx_fixed_point";
    }
    return "?";
}

ZeroMethod parse_zero_method(const std::string& s)
{
    for (auto m : {ZeroMethod::bisection, ZeroMethod::newton, ZeroMethod::lambert_seed,
                   ZeroMethod::franca_leclair, ZeroMethod::xlogx_fixed_point})
        if (to_string(m) == s) return m;
    throw Error(ErrorKind::parameter, "unknown zero method: " + s);
}

double hardy_z(double t)
{
    cx z = zeta(cx(0.5, t)).value;
    double th = riemann_siegel_theta(t);
    cx v = std::polar(1.0, th) * z;
    if (std::abs(v.imag()) > 1e-8 * (1.0 + std::abs(v.real())))
        throw Error(ErrorKind::unresolved, "hardy_z: imaginary part above tolerance at t=" + num(t));
    return v.real();
}

double arg_zeta(double sigma, double t)
{
    const int steps = 64;
    double total = 0.0;
    double s0 = 2.0;
    cx z0 = zeta(cx(s0, t)).value;
    total = std::arg(z0);
    for (int k = 1; k <= steps; ++k) {
        double s1 = 2.0 + (sigma - 2.0) * k / steps;
        cx z1 = zeta(cx(s1, t)).value;
        total += arg_segment(s0, s1, t, z0, z1, 0);
        s0 = s1;
        z0 = z1;
    }
    return total;
}

int exact_zero_count(double T)
{
    double s = arg_zeta(0.5, T) / kPi;
    return static_cast<int>(std::lround(riemann_siegel_theta(T) / kPi + 1.0 + s));
}

GramPair gram_pair(int n)
{
    if (n < 1) throw Error(ErrorKind::parameter, "gram_pair: n must be >= 1");
    GramPair g;
    g.n = n;
    auto lam = [](double c) { return 2 * kPi * c / lambert_w0(c / kE); };
    g.y_plus_lambert = lam(n - 7.0 / 8.0);
    g.y_minus_lambert = lam(n - 3.0 / 8.0);
    auto polish = [](double t, double target) {
        for (int i = 0; i < 30; ++i) {
            double d = 0.5 * std::log(t / (2 * kPi));
            double step = (riemann_siegel_theta(t) - target) / d;
            t -= step;
            if (std::abs(step) < 1e-15 * t) break;
        }
        return t;
    };
    g.y_plus = polish(g.y_plus_lambert, (n - 1) * kPi);
    g.y_minus = polish(g.y_minus_lambert, (n - 0.5) * kPi);
    return g;
}

double approx_zero(int n)
{
    if (n < 1) throw Error(ErrorKind::parameter, "approx_zero: n must be >= 1");
    double c = n - 11.0 / 8.0;
    double v = c / kE;
    if (v < -1.0 / kE) throw Error(ErrorKind::domain, "approx_zero: W argument below -1/e");
    return 2 * kPi * c / lambert_w0(v);
}

Interval bisection_intervals(int k, IntervalBase base)
{
    switch (base) {
    case IntervalBase::log2pi:
    case IntervalBase::logpi: {
        if (k < 3) throw Error(ErrorKind::parameter, "bisection_intervals: k must be >= 3");
        double l = base == IntervalBase::log2pi ? std::log(2 * kPi) : std::log(kPi);
        return {2 * kPi * k / l, 2 * kPi * (k + 1) / l};
    }
    case IntervalBase::gram: {
        GramPair g = gram_pair(k);
        return {std::min(g.y_plus_lambert, g.y_minus_lambert), std::max(g.y_plus_lambert, g.y_minus_lambert)};
    }
    }
    return {};
}

int bisection_step_bound(double w, double tol)
{
    return static_cast<int>(std::ceil((std::log(w) - std::log(tol)) / std::log(2.0))) + 1;
}

std::vector<ZeroRecord> bisect_zeros(Interval iv, double tol, bool index)
{
    if (!(tol > 0.0)) throw Error(ErrorKind::parameter, "bisect_zeros: tol must be positive");
    if (!(iv.lo < iv.hi)) throw Error(ErrorKind::parameter, "bisect_zeros: empty interval");
    auto brs = scan_brackets(iv.lo, iv.hi, scan_step(iv.hi));
    std::vector<ZeroRecord> out;
    for (const auto& b : brs) {
        ZeroRecord r = bisect_bracket(b, tol);
        if (!out.empty() && std::abs(r.gamma - out.back().gamma) <= 1e-6) continue;
        out.push_back(r);
    }
    if (index && !out.empty()) {
        int n0 = exact_zero_count(iv.lo);
        for (std::size_t j = 0; j < out.size(); ++j) out[j].n = n0 + static_cast<int>(j) + 1;
    }
    return out;
}

ZeroRecord newton_zero(double seed, double tol)
{
    if (!(tol > 0.0)) throw Error(ErrorKind::parameter, "newton_zero: tol must be positive");
    double t = seed;
    bool ok = false;
    int it = 0;
    for (; it < 60; ++it) {
        double z = hardy_z(t);
        double h = 1e-6 * std::max(1.0, std::abs(t));
        double d = (hardy_z(t + h) - hardy_z(t - h)) / (2 * h);
        if (d == 0.0 || !std::isfinite(d)) break;
        double step = -z / d;
        for (int k = 0; k < 10 && std::abs(hardy_z(t + step)) > std::abs(z); ++k) step *= 0.5;
        t += step;
        if (t < 1.0) break;
        if (std::abs(step) < tol) {
            ok = true;
            ++it;
            break;
        }
    }
    ZeroRecord r;
    r.gamma = t;
    r.method = ZeroMethod::newton;
    r.iterations = it;
    if (!ok) throw Error(ErrorKind::divergence, "newton_zero: no convergence from seed " + num(seed));
    r.residual = residual_at(t);
    if (r.residual > 1e-7) throw Error(ErrorKind::divergence, "newton_zero: converged point is not a zero");
    r.n = index_of(t);
    return r;
}

double franca_leclair_residual(double t, int n)
{
    return t / (2 * kPi) * std::log(t / (2 * kPi * kE)) + arg_zeta(0.5 + kDelta, t) / kPi - (n - 11.0 / 8.0);
}

ZeroRecord franca_leclair_zero(int n, double tol)
{
    if (n < 1) throw Error(ErrorKind::parameter, "franca_leclair_zero: n must be >= 1");
    double t0 = approx_zero(n);
    auto f = [n](double t) { return franca_leclair_residual(t, n); };
    double a, b, fa, fb;
    bracket_step_function(f, t0, std::min(1.0, gap_estimate(t0) / 4), a, b, fa, fb);
    int it = 0;
    double t = illinois(f, a, b, fa, fb, tol, it);
    ZeroRecord r;
    r.n = n;
    r.gamma = t;
    r.method = ZeroMethod::franca_leclair;
    r.iterations = it;
    r.residual = residual_at(t);
    if (r.residual > 1e-7) throw Error(ErrorKind::divergence, "franca_leclair_zero: root is not a zero of zeta");
    return r;
}

ZeroRecord xlogx_zero(int n, double tol, bool drop_arg)
{
    if (n < 1) throw Error(ErrorKind::parameter, "xlogx_zero: n must be >= 1");
    const double scale = 2 * kPi * kE;
    const double rhs = (n - 11.0 / 8.0) / kE;
    ZeroRecord r;
    r.n = n;
    r.method = ZeroMethod::xlogx_fixed_point;
    if (drop_arg) {
        r.gamma = scale * std::exp(lambert_w0(rhs));
        r.iterations = 1;
        r.residual = residual_at(r.gamma);
        return r;
    }
    auto g = [&](double x) {
        double u = rhs - arg_zeta(0.5 + kDelta, scale * x) / (kPi * kE);
        return u <= -1.0 / kE ? 1.0 / kE : std::exp(lambert_w0(u));
    };
    // Root of x - g(x); plain iteration of g is repelling on the flat steps.
    auto h = [&](double t) { return t / scale - g(t / scale); };
    double t0 = scale * std::exp(lambert_w0(rhs));
    double a, b, fa, fb;
    bracket_step_function(h, t0, std::min(1.0, gap_estimate(t0) / 4), a, b, fa, fb);
    int it = 0;
    double t = illinois(h, a, b, fa, fb, tol, it);
    r.gamma = t;
    r.iterations = it;
    r.residual = residual_at(t);
    if (r.residual > 1e-7) throw Error(ErrorKind::divergence, "xlogx_zero: root is not a zero of zeta");
    return r;
}

int count_zeros(double T)
{
    if (!(T > 0.0)) throw Error(ErrorKind::parameter, "count_zeros: T must be positive");
    const int expected = exact_zero_count(T);
    double h = scan_step(T);
    for (int level = 0; level < 3; ++level) {
        int c = static_cast<int>(scan_brackets(0.0, T, h).size());
        if (c == expected) return c;
        h /= 4.0;
    }
    throw Error(ErrorKind::unresolved, "count_zeros: sign changes disagree with theta count at T=" + num(T));
}

ZeroTable compute_zeros(int n_max, double tol, bool cross_validate, const Parallel& par)
{
    if (n_max < 1) throw Error(ErrorKind::parameter, "compute_zeros: n_max must be >= 1");
    const double chunk = 4.0;
    double t_end = approx_zero(n_max + 1) + 0.5 * std::min(1.0, gap_estimate(approx_zero(n_max + 1)));
    std::vector<ZeroRecord> all;
    for (int attempt = 0; attempt < 8; ++attempt) {
        int nchunks = static_cast<int>(std::ceil((t_end - 1.0) / chunk));
        double w = (t_end - 1.0) / nchunks;
        auto parts = par.map<std::vector<ZeroRecord>>(nchunks, [&](std::size_t i) {
            double lo = 1.0 + w * i;
            double hi = i + 1 == static_cast<std::size_t>(nchunks) ? t_end : 1.0 + w * (i + 1);
            return bisect_zeros({lo, hi}, tol, false);
        });
        all.clear();
        for (auto& p : parts)
            for (auto& r : p)
                if (all.empty() || r.gamma - all.back().gamma > 1e-6) all.push_back(r);
        int expected = exact_zero_count(t_end);
        if (static_cast<int>(all.size()) != expected)
            throw Error(ErrorKind::unresolved, "compute_zeros: found " + std::to_string(all.size()) +
                                                   " sign changes, theta count " + std::to_string(expected));
        if (static_cast<int>(all.size()) >= n_max) break;
        t_end += 4.0 * gap_estimate(t_end);
    }
    if (static_cast<int>(all.size()) < n_max) throw Error(ErrorKind::unresolved, "compute_zeros: range too short");
    all.resize(n_max);
    for (int i = 0; i < n_max; ++i) all[i].n = i + 1;
    ZeroTable tab;
    tab.records = all;
    if (cross_validate) {
        auto dev = par.map<double>(n_max, [&](std::size_t i) {
            int n = static_cast<int>(i) + 1;
            double g = all[i].gamma;
            double m = std::abs(newton_zero(approx_zero(n), tol).gamma - g);
            m = std::max(m, std::abs(franca_leclair_zero(n, tol).gamma - g));
            m = std::max(m, std::abs(xlogx_zero(n, tol).gamma - g));
            return m;
        });
        for (double d : dev) tab.max_disagreement = std::max(tab.max_disagreement, d);
    }
    return tab;
}

void write_zero_cache(std::ostream& os, const std::vector<ZeroRecord>& zs)
{
    os << "# zetakit-zeros v1\n";
    for (const auto& r : zs) os << r.n << ',' << num(r.gamma) << ',' << num(r.residual) << ',' << to_string(r.method) << '\n';
}

void write_zero_cache(const std::string& path, const std::vector<ZeroRecord>& zs)
{
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::io, "cannot write zero cache " + path);
    write_zero_cache(f, zs);
}

std::vector<ZeroRecord> read_zero_cache(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || trim(line) != "# zetakit-zeros v1")
        throw Error(ErrorKind::io, "zero cache: missing header");
    std::vector<ZeroRecord> out;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 4) throw Error(ErrorKind::io, "zero cache: bad field count at line " + std::to_string(lineno));
        ZeroRecord r;
        try {
            r.n = std::stoi(f[0]);
            r.gamma = std::stod(f[1]);
            r.residual = std::stod(f[2]);
        } catch (const std::exception&) {
            throw Error(ErrorKind::io, "zero cache: unparsable number at line " + std::to_string(lineno));
        }
        r.method = parse_zero_method(f[3]);
        if (!(r.residual <= 1e-6))
            throw Error(ErrorKind::io, "zero cache: residual above 1e-6 at line " + std::to_string(lineno));
        out.push_back(r);
    }
    return out;
}

std::vector<ZeroRecord> read_zero_cache(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::io, "cannot read zero cache " + path);
    return read_zero_cache(f);
}

}  // namespace zk
