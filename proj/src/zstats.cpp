#include "zetakit/zstats.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace zk {

namespace {

// Index of zero n in a cache sorted by index, or throws when it is missing.
std::size_t zero_pos(const std::vector<ZeroRecord>& zeros, int n)
{
    if (zeros.empty()) throw Error(ErrorKind::range, "zero cache is empty");
    long pos = static_cast<long>(n) - zeros.front().n;
    if (pos < 0 || pos >= static_cast<long>(zeros.size()) || zeros[pos].n != n)
        throw Error(ErrorKind::range, "zero " + std::to_string(n) + " missing from the cache");
    return static_cast<std::size_t>(pos);
}

struct GaussRule {
    std::vector<double> x, w;  // on [-1, 1]
};

// Golub-Welsch.
GaussRule gauss_legendre(int m)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int i = 1; i < m; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule g;
    for (int i = 0; i < m; ++i) {
        g.x.push_back(es.eigenvalues()(i));
        double v = es.eigenvectors()(0, i);
        g.w.push_back(2.0 * v * v);
    }
    return g;
}

// Gap probability E(s) = det(I - K_sine) on [0, s], Nystrom discretisation.
double gap_probability(double s)
{
    if (s <= 0.0) return 1.0;
    int m = 30 + static_cast<int>(4.0 * s);
    GaussRule g = gauss_legendre(m);
    std::vector<double> x(m), sw(m);
    for (int i = 0; i < m; ++i) {
        x[i] = 0.5 * s * (g.x[i] + 1.0);
        sw[i] = std::sqrt(0.5 * s * g.w[i]);
    }
    Eigen::MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double d = x[i] - x[j];
            double k = i == j ? 1.0 : std::sin(kPi * d) / (kPi * d);
            A(i, j) = (i == j ? 1.0 : 0.0) - sw[i] * k * sw[j];
        }
    return A.partialPivLu().determinant();
}

double sq(double v) { return v * v; }

}  // namespace

SpacingSample normalized_spacings(const std::vector<ZeroRecord>& zeros, int from, int to, int bins)
{
    if (from < 1 || to < from) throw Error(ErrorKind::parameter, "spacings: need 1 <= from <= to");
    if (bins < 1) throw Error(ErrorKind::parameter, "spacings: bins must be positive");
    std::size_t p0 = zero_pos(zeros, from);
    zero_pos(zeros, to + 1);
    SpacingSample s;
    s.start = from;
    s.count = to - from + 1;
    for (int i = 0; i < s.count; ++i) {
        double g = zeros[p0 + i].gamma, g1 = zeros[p0 + i + 1].gamma;
        s.delta.push_back((g1 - g) * std::log(g / (2 * kPi)) / (2 * kPi));
    }
    s.mean = pairwise_sum(s.delta.data(), s.delta.size()) / s.count;
    s.masses.assign(bins, 0.0);
    for (int b = 0; b <= bins; ++b) s.edges.push_back(4.0 * b / bins);
    for (double d : s.delta) {
        int b = std::min(bins - 1, static_cast<int>(d / 4.0 * bins));
        s.masses[std::max(0, b)] += 1.0;
    }
    for (double& m : s.masses) m /= s.count;
    return s;
}

double gue_density(double u)
{
    if (u < 0.0) throw Error(ErrorKind::domain, "gue_density: u must be nonnegative");
    if (u < 1e-4) return kPi * kPi * u * u / 3.0 - 2.0 * std::pow(kPi, 4) * std::pow(u, 4) / 45.0;
    return 1.0 - sq(std::sin(kPi * u) / (kPi * u));
}

double pair_correlation_integral(double u)
{
    if (u < 0.0) throw Error(ErrorKind::domain, "pair_correlation_integral: u must be nonnegative");
    if (u == 0.0) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(gue_density, 0.0, u, 15, 1e-14);
}

double gue_cdf(double s)
{
    if (s < 0.0) throw Error(ErrorKind::domain, "gue_cdf: s must be nonnegative");
    if (s == 0.0) return 0.0;
    if (s > 12.0) return 1.0;
    // F = 1 + E'(s); five-point derivative, one-sided near 0.
    double h = std::min(1e-3, s / 4);
    double dE = (gap_probability(s - 2 * h) - 8 * gap_probability(s - h) + 8 * gap_probability(s + h) -
                 gap_probability(s + 2 * h)) / (12 * h);
    return std::clamp(1.0 + dE, 0.0, 1.0);
}

double gue_spacing_density(double s)
{
    if (s < 0.0) throw Error(ErrorKind::domain, "gue_spacing_density: s must be nonnegative");
    if (s == 0.0) return 0.0;
    double h = std::min(1e-3, s / 2);
    return (gap_probability(s + h) - 2 * gap_probability(s) + gap_probability(s - h)) / (h * h);
}

double ks_distance(std::vector<double> sample, double (*cdf)(double))
{
    if (sample.empty()) throw Error(ErrorKind::parameter, "ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max({d, std::abs((i + 1) / n - f), std::abs(f - i / n)});
    }
    return d;
}

double small_gap_probability(double delta, GapMode mode)
{
    if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::domain, "small_gap_probability: delta must be in (0, 1)");
    if (mode == GapMode::single) return kPi * kPi / 9.0 * delta * delta * delta;
    return std::pow(kPi, 6) / 32400.0 * std::pow(delta, 8);
}

double small_gap_exceedance(double delta, double M)
{
    if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::domain, "small_gap_exceedance: delta must be in (0, 1)");
    return -std::expm1(-kPi * kPi * delta * delta * delta * M / 9.0);
}

GramLaw grams_law_check(const std::vector<ZeroRecord>& zeros, int from, int to)
{
    if (from < 2 || to < from) throw Error(ErrorKind::parameter, "grams_law_check: need 2 <= from <= to");
    std::size_t p0 = zero_pos(zeros, from);
    zero_pos(zeros, to + 1);
    std::vector<double> gaps;
    for (int i = 0; i <= to - from; ++i) gaps.push_back(zeros[p0 + i + 1].gamma - zeros[p0 + i].gamma);
    GramLaw g;
    g.mean_gap = pairwise_sum(gaps.data(), gaps.size()) / gaps.size();
    g.model_2pi_over_log = 2 * kPi / std::log(0.5 * (from + to));
    g.ratio = g.mean_gap / g.model_2pi_over_log;
    return g;
}

WindowReport window_report(std::int64_t N, std::int64_t delta, const std::vector<ZeroRecord>& zeros,
                           const SieveTable& table)
{
    if (N < 0 || delta < 1) throw Error(ErrorKind::parameter, "window_report: need N >= 0 and delta >= 1");
    const double top = static_cast<double>(N + delta);
    if (N + delta > table.limit) throw Error(ErrorKind::range, "window_report: window beyond the sieve limit");
    if (zeros.empty() || zeros.back().gamma <= top) throw Error(ErrorKind::range, "window_report: window above the cached zeros");
    if (zeros.front().n != 1) throw Error(ErrorKind::range, "window_report: cache must start at the first zero");

    WindowReport r;
    r.N = N;
    r.delta = delta;
    r.prime_count = table.pi(top) - table.pi(static_cast<double>(N));
    r.false_measure = delta - r.prime_count;
    auto lo = std::lower_bound(zeros.begin(), zeros.end(), static_cast<double>(N),
                               [](const ZeroRecord& z, double v) { return z.gamma < v; });
    auto hi = std::upper_bound(zeros.begin(), zeros.end(), top,
                               [](double v, const ZeroRecord& z) { return v < z.gamma; });
    if (lo == hi) {
        // No zero inside the window.
        r.kin = lo->n;
        r.kf = r.kin - 1;
        r.boundary_lo = r.prime_count;
        return r;
    }
    r.kin = lo->n;
    r.kf = (hi - 1)->n;
    r.boundary_lo = table.pi(lo->gamma) - table.pi(static_cast<double>(N));
    r.boundary_hi = table.pi(top) - table.pi((hi - 1)->gamma);
    for (auto it = lo; it + 1 != hi; ++it) {
        GapCount g;
        g.k = it->n;
        g.lo = it->gamma;
        g.hi = (it + 1)->gamma;
        g.primes = table.pi(g.hi) - table.pi(g.lo);
        if (g.primes == 0) ++r.empty_gaps;
        r.gaps.push_back(g);
    }
    return r;
}

std::vector<WindowReport> window_reports(std::int64_t N0, std::int64_t delta, int count,
                                         const std::vector<ZeroRecord>& zeros, const SieveTable& table,
                                         const Parallel& par)
{
    if (count < 1) throw Error(ErrorKind::parameter, "window_reports: count must be positive");
    return par.map<WindowReport>(count, [&](std::size_t i) {
        return window_report(N0 + static_cast<std::int64_t>(i) * delta, delta, zeros, table);
    });
}

FitResult linear_fit(const std::vector<FitPoint>& pts)
{
    if (pts.size() < 5) throw Error(ErrorKind::parameter, "linear_fit: need at least 5 points");
    const double n = static_cast<double>(pts.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.y;
    }
    double mx = sx / n, my = sy / n, sxx = 0.0, sxy = 0.0;
    for (const auto& p : pts) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::unresolved, "linear_fit: singular system (all x equal)");
    FitResult f;
    double b = sxy / sxx, a = my - b * mx;
    f.params = {a, b};
    for (const auto& p : pts) f.rss += sq(p.y - a - b * p.x);
    double s2 = f.rss / (n - 2.0);
    f.std_errors = {std::sqrt(s2 * (1.0 / n + mx * mx / sxx)), std::sqrt(s2 / sxx)};
    f.iterations = 1;
    return f;
}

double fit_model(const std::array<double, 4>& p, double x)
{
    double arg = p[3] + p[1] * x;
    if (!(arg > 0.0)) return std::nan("");
    return (p[0] + p[2] * x) / std::log(arg);
}

FitResult nonlinear_fit(const std::vector<FitPoint>& pts, const std::array<double, 4>& init)
{
    if (pts.size() < 5) throw Error(ErrorKind::parameter, "nonlinear_fit: need at least 5 points");
    for (const auto& q : pts)
        if (!std::isfinite(fit_model(init, q.x)) || std::log(init[3] + init[1] * q.x) == 0.0)
            throw Error(ErrorKind::domain, "nonlinear_fit: log argument not positive under the initial parameters");
    const int n = static_cast<int>(pts.size());
    using Vec4 = Eigen::Matrix<double, 4, 1>;
    using Mat4 = Eigen::Matrix<double, 4, 4>;
    auto rss_of = [&](const std::array<double, 4>& p) {
        double s = 0.0;
        for (const auto& q : pts) s += sq(q.y - fit_model(p, q.x));
        return s;
    };
    auto jacobian = [&](const std::array<double, 4>& p) {
        Eigen::MatrixXd J(n, 4);
        for (int j = 0; j < 4; ++j) {
            double h = p[j] != 0.0 ? 1e-6 * std::abs(p[j]) : 1e-8;
            auto a = p, b = p;
            a[j] += h;
            b[j] -= h;
            for (int i = 0; i < n; ++i) J(i, j) = (fit_model(a, pts[i].x) - fit_model(b, pts[i].x)) / (2 * h);
        }
        return J;
    };

    std::array<double, 4> p = init;
    double rss = rss_of(p), lambda = 1e-3;
    FitResult f;
    bool done = false;
    // Each linear solve counts as one iteration.
    while (!done && f.iterations < 200) {
        Eigen::MatrixXd J = jacobian(p);
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) r(i) = pts[i].y - fit_model(p, pts[i].x);
        Mat4 A = J.transpose() * J;
        Vec4 g = J.transpose() * r;
        // Column scaling keeps the solve well conditioned when parameters differ by many orders.
        Vec4 D = A.diagonal().cwiseSqrt();
        for (int j = 0; j < 4; ++j)
            if (!(D(j) > 0.0)) D(j) = 1.0;
        Mat4 As = D.cwiseInverse().asDiagonal() * A * D.cwiseInverse().asDiagonal();
        Vec4 gs = D.cwiseInverse().asDiagonal() * g;
        while (f.iterations < 200) {
            ++f.iterations;
            Mat4 M = As;
            M.diagonal().array() += lambda;
            Vec4 step = D.cwiseInverse().asDiagonal() * Vec4(M.ldlt().solve(gs));
            std::array<double, 4> trial = p;
            for (int j = 0; j < 4; ++j) trial[j] += step(j);
            double tr = rss_of(trial);
            if (std::isfinite(tr) && tr < rss) {
                double rel = (rss - tr) / std::max(rss, 1e-300);
                p = trial;
                rss = tr;
                lambda /= 10.0;
                done = rel < 1e-12;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e20) {
                // No descent direction left: at a minimum to working precision.
                done = true;
                break;
            }
        }
    }
    if (!done) throw Error(ErrorKind::unresolved, "nonlinear_fit: no convergence in 200 iterations");

    f.params.assign(p.begin(), p.end());
    f.rss = rss;
    Eigen::MatrixXd J = jacobian(p);
    Mat4 A = J.transpose() * J;
    Vec4 D = A.diagonal().cwiseSqrt();
    for (int j = 0; j < 4; ++j)
        if (!(D(j) > 0.0)) D(j) = 1.0;
    Mat4 As = D.cwiseInverse().asDiagonal() * A * D.cwiseInverse().asDiagonal();
    Mat4 cov = D.cwiseInverse().asDiagonal() * Mat4(As.inverse()) * D.cwiseInverse().asDiagonal();
    double s2 = n > 4 ? rss / (n - 4) : 0.0;
    for (int j = 0; j < 4; ++j) f.std_errors.push_back(std::sqrt(std::max(0.0, cov(j, j) * s2)));
    return f;
}

}  // namespace zk
