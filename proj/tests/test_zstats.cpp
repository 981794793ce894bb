#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "zetakit/zstats.hpp"

using namespace zk;

namespace {

const std::vector<ZeroRecord>& cached_zeros()
{
    static const auto z = read_zero_cache(std::string(ZK_DATA_DIR) + "/zeros.txt");
    return z;
}

const SieveTable& table()
{
    static const SieveTable t = sieve(20000);
    return t;
}

const std::array<double, 4> kModel = {1108.254246288494, 5.425635171403081, -1.116325646187134e-12, -4503.90336177023};

std::vector<FitPoint> synthetic(double noise, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<FitPoint> pts;
    for (int i = 0; i < 60; ++i) {
        double x = 1000.0 * std::pow(2e11, i / 59.0);
        pts.push_back({x, fit_model(kModel, x) * (1.0 + noise * nd(rng))});
    }
    return pts;
}

double wigner_cdf(double s) { return std::erf(2 * s / std::sqrt(kPi)) - 4 * s / kPi * std::exp(-4 * s * s / kPi); }

}  // namespace

TEST_CASE("normalized_spacings")
{
    const auto& z = cached_zeros();
    SpacingSample s = normalized_spacings(z, 1, 10, 8);
    double want = (z[1].gamma - z[0].gamma) * std::log(z[0].gamma / (2 * kPi)) / (2 * kPi);
    CHECK(s.delta[0] == doctest::Approx(want).epsilon(1e-15));
    CHECK(s.delta.size() == 10);
    CHECK(s.edges.size() == 9);

    SpacingSample m = normalized_spacings(z, 100, 1000);
    CHECK(m.mean > 0.95);
    CHECK(m.mean < 1.05);
    double total = 0.0;
    for (double v : m.masses) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (double d : m.delta) CHECK(d > 0.01);
    CHECK_THROWS_AS(normalized_spacings(z, 1990, static_cast<int>(z.size())), Error);
    std::vector<ZeroRecord> holed(z.begin(), z.begin() + 50);
    holed.erase(holed.begin() + 20);
    CHECK_THROWS_AS(normalized_spacings(holed, 1, 40), Error);
}

TEST_CASE("gue_density")
{
    CHECK(gue_density(0.0) == 0.0);
    CHECK(gue_density(10.0) > 0.99);
    CHECK(gue_density(1e4) == doctest::Approx(1.0).epsilon(1e-8));
    for (double u = 0.005; u <= 0.1; u += 0.005)
        CHECK(std::abs(gue_density(u) - kPi * kPi * u * u / 3) <= 2 * std::pow(kPi, 4) * std::pow(u, 4) / 45 * 1.1);
    // Integral of 1 - sinc^2 on [0, 1] from the series of sin^2.
    double si = 0.0;
    for (int k = 0; k < 40; ++k) {
        // sin^2(pi u)/(pi u)^2 = sum (-1)^k 2^{2k+1} (pi u)^{2k} / (2k+2)!
        double c = std::pow(-1.0, k) * std::pow(2.0, 2 * k + 1) * std::pow(kPi, 2 * k) / std::tgamma(2 * k + 3.0);
        si += c / (2 * k + 1);
    }
    CHECK(pair_correlation_integral(1.0) == doctest::Approx(1.0 - si).epsilon(1e-12));
    CHECK_THROWS_AS(gue_density(-1.0), Error);
}

TEST_CASE("gue_cdf")
{
    CHECK(gue_cdf(0.0) == 0.0);
    // Small-s series of the spacing density: pi^2 s^2/3 - 2 pi^4 s^4/45 + pi^6 s^6/315.
    for (double s : {0.05, 0.1, 0.2}) {
        double F = kPi * kPi * std::pow(s, 3) / 9 - 2 * std::pow(kPi, 4) * std::pow(s, 5) / 225 +
                   std::pow(kPi, 6) * std::pow(s, 7) / 2205;
        CHECK(std::abs(gue_cdf(s) - F) < 0.02 * std::pow(kPi * s, 9) + 1e-10);
        CHECK(std::abs(gue_spacing_density(s) - (kPi * kPi * s * s / 3 - 2 * std::pow(kPi, 4) * std::pow(s, 4) / 45 +
                                                 std::pow(kPi, 6) * std::pow(s, 6) / 315)) < 0.02 * std::pow(kPi * s, 8) + 1e-6);
    }
    // Unit mean spacing: integral of 1 - F is 1.
    double mean = 0.0, h = 0.01;
    for (int i = 0; i < 600; ++i) mean += h * (1.0 - gue_cdf((i + 0.5) * h));
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(gue_cdf(6.0) > 1.0 - 1e-9);
    // The Wigner surmise is within 0.006 everywhere.
    for (double s = 0.1; s < 3.0; s += 0.1) CHECK(std::abs(gue_cdf(s) - wigner_cdf(s)) < 6e-3);
    // F is the integral of the density.
    double acc = 0.0;
    for (int i = 0; i < 200; ++i) acc += 0.01 * gue_spacing_density((i + 0.5) * 0.01);
    CHECK(acc == doctest::Approx(gue_cdf(2.0)).epsilon(1e-4));
}

TEST_CASE("spacings against GUE")
{
    const auto& z = cached_zeros();
    SpacingSample s = normalized_spacings(z, 100, 2000);
    CHECK(ks_distance(s.delta, gue_cdf) < 0.15);
}

TEST_CASE("spacing KS against the integral of 1 - sinc^2" * doctest::should_fail())
{
    // That integral grows without bound, so it is not a distribution function.
    SpacingSample s = normalized_spacings(cached_zeros(), 100, 2000);
    CHECK(ks_distance(s.delta, pair_correlation_integral) < 0.15);
}

TEST_CASE("small_gap_probability")
{
    CHECK(small_gap_probability(0.5, GapMode::single) == doctest::Approx(kPi * kPi * 0.125 / 9).epsilon(1e-15));
    CHECK(small_gap_probability(0.999999999, GapMode::pair) == doctest::Approx(std::pow(kPi, 6) / 32400).epsilon(1e-8));
    CHECK(small_gap_exceedance(0.1, 1000) == doctest::Approx(1 - std::exp(-kPi * kPi * 1e-3 * 1000 / 9)).epsilon(1e-14));
    CHECK_THROWS_AS(small_gap_probability(1.0, GapMode::single), Error);
    CHECK_THROWS_AS(small_gap_probability(0.0, GapMode::pair), Error);

    // Empirical fraction monotone in delta.
    SpacingSample s = normalized_spacings(cached_zeros(), 1, 2000);
    double prev = -1.0;
    for (double d = 0.05; d < 1.0; d += 0.05) {
        double frac = 0.0;
        for (double v : s.delta) frac += v < d;
        frac /= s.count;
        CHECK(frac >= prev);
        prev = frac;
    }
}

TEST_CASE("fraction of spacings below 1/2 within 3 sigma of GUE" * doctest::should_fail())
{
    // Heights below 2600 carry about 30% fewer small gaps than the limit law.
    SpacingSample s = normalized_spacings(cached_zeros(), 1, 2000);
    double frac = 0.0;
    for (double v : s.delta) frac += v < 0.5;
    frac /= s.count;
    double p = gue_cdf(0.5), sigma = std::sqrt(p * (1 - p) / s.count);
    CHECK(std::abs(frac - p) < 3 * sigma);
}

TEST_CASE("grams_law_check")
{
    const auto& z = cached_zeros();
    for (std::size_t i = 0; i + 1 < z.size(); ++i) CHECK(z[i + 1].gamma - z[i].gamma > 0.0);
    GramLaw a = grams_law_check(z, 100, 200), b = grams_law_check(z, 1000, 1100);
    CHECK(b.mean_gap < a.mean_gap);
    GramLaw g = grams_law_check(z, 500, 1500);
    CHECK(g.model_2pi_over_log == doctest::Approx(2 * kPi / std::log(1000.0)).epsilon(1e-15));
    CHECK(g.ratio == doctest::Approx(g.mean_gap / g.model_2pi_over_log).epsilon(1e-15));
    // The mean gap follows 2 pi / log(gamma / 2 pi) instead.
    double h = 0.5 * (z[499].gamma + z[1500].gamma);
    CHECK(g.mean_gap == doctest::Approx(2 * kPi / std::log(h / (2 * kPi))).epsilon(0.02));
}

TEST_CASE("Gram-law ratio within 20%" * doctest::should_fail())
{
    GramLaw g = grams_law_check(cached_zeros(), 500, 1500);
    CHECK(g.ratio >= 0.8);
    CHECK(g.ratio <= 1.2);
}

TEST_CASE("window_report")
{
    const auto& z = cached_zeros();
    WindowReport w = window_report(1000, 1000, z, table());
    CHECK(w.prime_count == 135);
    CHECK(w.false_measure == 865);
    CHECK(z[w.kin - 1].gamma >= 1000.0);
    CHECK(z[w.kin - 2].gamma < 1000.0);
    CHECK(z[w.kf - 1].gamma <= 2000.0);
    CHECK(z[w.kf].gamma > 2000.0);
    auto partition = [](const WindowReport& r) {
        std::int64_t s = r.boundary_lo + r.boundary_hi;
        for (const auto& g : r.gaps) s += g.primes;
        return s;
    };
    CHECK(partition(w) == w.prime_count);
    int empty = 0;
    for (const auto& g : w.gaps) empty += g.primes == 0;
    CHECK(empty == w.empty_gaps);

    // Below the first zero at 14.13 every prime up to it sits in the lower boundary.
    WindowReport w0 = window_report(0, 1000, z, table());
    CHECK(w0.prime_count == 168);
    CHECK(w0.false_measure == 832);
    CHECK(w0.boundary_lo == 6);
    CHECK(partition(w0) == 168);

    // Windows tile.
    for (std::int64_t N : {0, 1000, 4000, 7000}) {
        auto two = window_reports(N, 500, 2, z, table(), Parallel(1));
        CHECK(two[0].prime_count + two[1].prime_count == window_report(N, 1000, z, table()).prime_count);
    }
    auto p1 = window_reports(100, 300, 20, z, table(), Parallel(1));
    auto p4 = window_reports(100, 300, 20, z, table(), Parallel(4));
    for (std::size_t i = 0; i < p1.size(); ++i) {
        CHECK(p1[i].N == 100 + 300 * static_cast<std::int64_t>(i));
        CHECK(p1[i].prime_count == p4[i].prime_count);
        CHECK(p1[i].gaps.size() == p4[i].gaps.size());
    }
    // No zero inside a short window.
    WindowReport tiny = window_report(2, 3, z, table());
    CHECK(tiny.gaps.empty());
    CHECK(tiny.boundary_lo == 2);
    CHECK_THROWS_AS(window_report(19000, 2000, z, table()), Error);
    CHECK_THROWS_AS(window_report(2500, 100, z, sieve(2000)), Error);
    std::vector<ZeroRecord> tail(z.begin() + 1, z.end());
    CHECK_THROWS_AS(window_report(2500, 100, tail, table()), Error);
}

TEST_CASE("linear_fit")
{
    std::vector<FitPoint> pts;
    for (int i = 0; i <= 30; ++i) {
        double x = 33.3 * i;
        pts.push_back({x, 988.709 - 0.988372 * x});
    }
    FitResult f = linear_fit(pts);
    CHECK(std::abs(f.params[0] - 988.709) < 1e-9);
    CHECK(std::abs(f.params[1] + 0.988372) < 1e-9);
    CHECK(f.rss < 1e-18);

    std::vector<FitPoint> flat;
    for (int i = 0; i < 9; ++i) flat.push_back({static_cast<double>(i), 4.25});
    CHECK(std::abs(linear_fit(flat).params[1]) < 1e-15);

    // rss recomputed independently; std errors against the textbook formula.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 2.0);
    std::vector<FitPoint> noisy;
    for (int i = 0; i < 40; ++i) noisy.push_back({i * 1.0, 3.0 + 0.5 * i + nd(rng)});
    FitResult g = linear_fit(noisy);
    double rss = 0.0, sxx = 0.0;
    for (const auto& p : noisy) rss += std::pow(p.y - g.params[0] - g.params[1] * p.x, 2);
    for (const auto& p : noisy) sxx += std::pow(p.x - 19.5, 2);
    CHECK(std::abs(g.rss - rss) < 1e-12 * rss);
    CHECK(g.std_errors[1] == doctest::Approx(std::sqrt(rss / 38 / sxx)).epsilon(1e-12));

    CHECK_THROWS_AS(linear_fit({{1, 1}, {2, 2}, {3, 3}}), Error);
    CHECK_THROWS_AS(linear_fit({{1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}}), Error);
}

TEST_CASE("nonlinear_fit")
{
    const std::array<double, 4> init = {1100.0, 5.5, -1.1e-12, -4450.0};
    for (unsigned seed : {1u, 7u, 11u}) {
        std::vector<FitPoint> pts = synthetic(1e-3, seed);
        FitResult f = nonlinear_fit(pts, init);
        CHECK(std::abs(f.params[0] / kModel[0] - 1) < 0.01);
        CHECK(std::abs(f.params[1] / kModel[1] - 1) < 0.01);
        CHECK(std::abs(f.params[3] / kModel[3] - 1) < 0.01);
        CHECK(std::abs(f.params[2] - kModel[2]) < 1e-13);
        double rss = 0.0;
        std::array<double, 4> p = {f.params[0], f.params[1], f.params[2], f.params[3]};
        for (const auto& q : pts) rss += std::pow(q.y - fit_model(p, q.x), 2);
        CHECK(std::abs(f.rss - rss) <= 1e-12 * std::max(rss, 1e-300));
        CHECK(f.rss >= 0.0);
        CHECK(f.iterations <= 200);
        for (double e : f.std_errors) CHECK(std::isfinite(e));
    }
    // Exact data: the generator comes back.
    FitResult e = nonlinear_fit(synthetic(0.0, 1), init);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(e.params[j] / kModel[j] - 1) < 1e-6);

    CHECK_THROWS_AS(nonlinear_fit(synthetic(1e-3, 1), {1100.0, 5.5, 0.0, -1e7}), Error);
    CHECK_THROWS_AS(nonlinear_fit({{1e3, 1}, {2e3, 1}}, init), Error);
}
