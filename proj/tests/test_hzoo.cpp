#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "zetakit/hzoo.hpp"

using namespace zk;

namespace {

bool contains(const std::vector<cx>& v, cx z, double tol)
{
    for (cx w : v)
        if (std::abs(w - z) < tol) return true;
    return false;
}

// Winding number of zeta(q, .) on a rectangle by dense fixed-step sampling.
int dense_winding(double q, double x0, double x1, double y0, double y1, double h)
{
    cx c[4] = {cx(x0, y0), cx(x1, y0), cx(x1, y1), cx(x0, y1)};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        cx a = c[e], b = c[(e + 1) % 4];
        int n = static_cast<int>(std::ceil(std::abs(b - a) / h));
        cx prev = hurwitz_zeta(q, a).value;
        for (int j = 1; j <= n; ++j) {
            cx cur = hurwitz_zeta(q, a + (b - a) * (double(j) / n)).value;
            total += std::arg(cur / prev);
            prev = cur;
        }
    }
    return static_cast<int>(std::lround(total / (2 * kPi)));
}

// Zeros of zeta(6, z) and zeta(4, z) in Re in (-2, 1), Im in (0, 30), from an
// independent 25-digit Newton search.
const std::vector<cx> kZeros6 = {{-1.933243377, 2.197578815}, {-1.500040613, 0.500453271},
                                 {-1.499998766, 0.13410528},  {-0.753552966, 1.893885456},
                                 {-0.500667225, 0.500214058}, {-0.499961224, 0.134041879}};
const std::vector<cx> kZeros4 = {{-1.720305443, 1.538538078}, {-1.499932486, 0.209376048},
                                 {-0.609991384, 1.320191586}, {-0.499302622, 0.208347015}};

// Zeros of zeta(z, 1/3) with 0 < Re < 1, 0 < Im < 40, same source.
const std::vector<cx> kGzeta = {{0.342658233, 11.4313703382}, {0.241816596, 15.1893510351}, {0.591799464, 20.6904413047},
                                {0.1932748581, 23.8978923531}, {0.1279804317, 25.7062991217}, {0.3344126781, 28.5249004246},
                                {0.4291182409, 30.6462725565}, {0.4620911968, 33.6434764152}, {0.506387901, 37.5715137605},
                                {0.4726505788, 39.6960570839}};

const cx kClaim(0.93296997, 15.668249531);

}  // namespace

TEST_CASE("hurwitz_negative_integer_zeros")
{
    auto r2 = hurwitz_negative_integer_zeros(2);
    REQUIRE(r2.size() == 3);
    CHECK(std::abs(r2[0] - 0.0) < 1e-10);
    CHECK(std::abs(r2[1] - 0.5) < 1e-10);
    CHECK(std::abs(r2[2] - 1.0) < 1e-10);

    auto r3 = hurwitz_negative_integer_zeros(3);
    REQUIRE(r3.size() == 4);
    for (double z : {0.240335, 0.759665, -0.157704, 1.1577}) CHECK(contains(r3, z, 1e-5));
    // Closed forms 1/2 (1 +- sqrt(1 -+ 2 sqrt(2/15))).
    double a = std::sqrt(1 - 2 * std::sqrt(2.0 / 15)), b = std::sqrt(1 + 2 * std::sqrt(2.0 / 15));
    for (double z : {0.5 * (1 - a), 0.5 * (1 + a), 0.5 * (1 - b), 0.5 * (1 + b)}) CHECK(contains(r3, z, 1e-13));

    for (int q = 1; q <= 30; ++q) {
        auto r = hurwitz_negative_integer_zeros(q);
        CHECK(r.size() == static_cast<std::size_t>(q + 1));
        for (cx z : r) {
            double res = std::abs(oracle::bernoulli_poly(q + 1, z));
            if (q <= 19) CHECK(res < 1e-8);
            // Within a few units of |B'| times the spacing of doubles at z.
            double floor = (q + 1) * std::abs(oracle::bernoulli_poly(q, z)) * 2.3e-16 * std::max(1.0, std::abs(z));
            CHECK(res <= 4 * floor + 1e-300);
            CHECK(contains(r, 1.0 - z, 1e-8));
        }
    }
    CHECK_THROWS_AS(hurwitz_negative_integer_zeros(0), Error);
    CHECK_THROWS_AS(hurwitz_negative_integer_zeros(31), Error);
}

TEST_CASE("Bernoulli roots to 1e-8 for q above 19" * doctest::should_fail())
{
    // |B'| at the outer roots exceeds 1e8, so one unit of rounding in the root
    // already moves B_{q+1} by more than 1e-8.
    for (int q = 20; q <= 30; ++q)
        for (cx z : hurwitz_negative_integer_zeros(q)) CHECK(std::abs(oracle::bernoulli_poly(q + 1, z)) < 1e-8);
}

TEST_CASE("hurwitz_real_zero")
{
    struct Row {
        double s, lo, hi, quoted;
    };
    const Row rows[] = {{-2.0 / 3, 0.5, 0.9, 0.703226180818014}, {-2.0 / 3, 0.05, 0.3, 0.112695242215194},
                        {-0.5, 0.01, 0.3, 0.066489124132138},    {-0.25, 0.4, 0.8, 0.582245789118785},
                        {0.25, 0.2, 0.6, 0.408064210108089},     {0.5, 0.1, 0.5, 0.302721828598366},
                        {2.0 / 3, 0.1, 0.4, 0.221547787091544}};
    for (const Row& r : rows) {
        double x = hurwitz_real_zero(r.s, {r.lo, r.hi});
        CHECK(std::abs(x - r.quoted) < 1e-12);
        CHECK(std::abs(oracle::hurwitz(r.s, x)) < 1e-10);
    }
    CHECK_THROWS_AS(hurwitz_real_zero(2.0, {0.5, 1.0}), Error);
}

TEST_CASE("hurwitz_complex_zero_scan")
{
    for (int q : {6, 4}) {
        auto roots = hurwitz_complex_zero_scan(q, {-2, 1, 0, 30}, 0.5, Parallel(4));
        const auto& ref = q == 6 ? kZeros6 : kZeros4;
        REQUIRE(roots.size() == ref.size());
        std::vector<cx> zs;
        for (const auto& r : roots) {
            CHECK(r.z.real() < 0);
            CHECK(r.residual < 1e-10);
            CHECK(std::abs(oracle::hurwitz(q, r.z)) < 1e-10);
            CHECK(r.psi_gap >= 0.0);
            CHECK(r.psi_gap < 1e-9);
            zs.push_back(r.z);
        }
        for (cx z : ref) CHECK(contains(zs, z, 1e-8));
        // All zeros sit above Im = 0.05, so a dense contour there sees all of them.
        CHECK(dense_winding(q, -2, 1, 0.05, 30, 0.002) == static_cast<int>(roots.size()));

        auto one = hurwitz_complex_zero_scan(q, {-2, 1, 0, 30}, 0.5, Parallel(1));
        REQUIRE(one.size() == roots.size());
        for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].z == roots[i].z);
    }
    CHECK(hurwitz_complex_zero_scan(6, {0.1, 1, 0.5, 30}, 0.5, Parallel(2)).empty());
    CHECK_THROWS_AS(hurwitz_complex_zero_scan(1.0, {-2, 1, 0, 30}, 0.5, Parallel(1)), Error);
}

TEST_CASE("scan_zeros on a polynomial")
{
    std::vector<cx> roots = {{0.3, 0.7}, {0.31, 0.7}, {-1.2, 2.5}, {0.0, 0.0001}};
    auto f = [&](cx z) {
        cx p = 1.0;
        for (cx r : roots) p *= z - r;
        return p;
    };
    auto df = [&](cx z) {
        cx s = 0.0;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            cx p = 1.0;
            for (std::size_t j = 0; j < roots.size(); ++j)
                if (j != i) p *= z - roots[j];
            s += p;
        }
        return s;
    };
    auto got = scan_zeros(f, df, {-2, 2, -1, 3}, 0.5, Parallel(3));
    REQUIRE(got.size() == 4);
    for (cx r : roots) {
        bool hit = false;
        for (const auto& g : got) hit = hit || std::abs(g.z - r) < 1e-12;
        CHECK(hit);
    }
    CHECK(winding_count(f, {-2, 2, -1, 3}) == 4);
}

TEST_CASE("audit_claim")
{
    ClaimAudit sw = audit_claim("hurwitz_swapped(6)", kClaim);
    CHECK(sw.verdict == Verdict::refuted);
    cx v = hurwitz_zeta(kClaim, 6.0).value;
    CHECK(std::abs(v - oracle::hurwitz(kClaim, 6.0)) < 1e-12);
    CHECK(std::abs(sw.residual - std::abs(v)) < 1e-15);
    // The quoted value is the one at the conjugate point.
    CHECK(std::abs(std::conj(v) - cx(-0.101884, -0.00598394)) < 1e-4);

    ClaimAudit h6 = audit_claim("hurwitz(6)", kClaim);
    cx w = hurwitz_zeta(6.0, kClaim).value;
    CHECK(std::abs(w - oracle::hurwitz(6.0, kClaim)) < 1e-15);
    CHECK(std::abs(std::conj(w) - cx(2.93166e-8, 2.10446e-7)) < 1e-12);
    CHECK(h6.residual == doctest::Approx(2.1248e-7).epsilon(1e-3));
    CHECK(h6.verdict == Verdict::confirmed);

    CHECK(classify(5e-7) == Verdict::confirmed);
    CHECK(classify(5e-4) == Verdict::inconclusive);
    CHECK(classify(5e-3) == Verdict::refuted);

    CHECK(audit_claim("hurwitz(-2)", 0.0).residual == 0.0);
    CHECK(audit_claim("dirichlet(1,0,-1,0)", cx(0.5, 6.020948904697597)).verdict == Verdict::confirmed);
    CHECK(audit_claim("zeta", cx(0.5, 14.134725141734693)).verdict == Verdict::confirmed);
    CHECK_THROWS_AS(audit_claim("nosuch", 1.0), Error);
    CHECK_THROWS_AS(audit_claim("hurwitz", 1.0), Error);
    CHECK_THROWS_AS(audit_claim("hurwitz(x)", 1.0), Error);
}

TEST_CASE("audit of the quoted first ordinate" * doctest::should_fail())
{
    // |zeta| there is 2.8e-6: the quoted digits are 3.5e-6 off the zero.
    CHECK(audit_claim("zeta", cx(0.5, 14.1347216500)).verdict == Verdict::confirmed);
}

TEST_CASE("audit of the quoted swapped value" * doctest::should_fail())
{
    cx v = hurwitz_zeta(kClaim, 6.0).value;
    CHECK(std::abs(v - cx(-0.101884, -0.00598394)) < 1e-4);
}

TEST_CASE("claim registry")
{
    auto claims = read_claims(std::string(ZK_DATA_DIR) + "/claims.csv");
    REQUIRE(claims.size() > 40);
    auto a = audit_claims(claims, Parallel(4));
    auto b = audit_claims(claims, Parallel(4), 0.5);
    auto c = audit_claims(claims, Parallel(1));
    REQUIRE(a.size() == claims.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].claim_id == claims[i].id);
        CHECK(a[i].verdict == b[i].verdict);
        CHECK(a[i].residual == c[i].residual);
        CHECK(a[i].verdict == classify(a[i].residual));
    }
    std::ostringstream os;
    write_audit_json(os, a);
    std::string js = os.str();
    CHECK(js.find("\"claim_id\":\"audit_swapped\"") != std::string::npos);
    CHECK(js.find("\"verdict\":\"refuted\"") != std::string::npos);
    CHECK(js.back() == '\n');

    std::istringstream in("# c\nx1,gzeta(-3,2),0.5,1\n\nx2,zeta,0.5,14\n");
    auto two = read_claims(in);
    REQUIRE(two.size() == 2);
    CHECK(two[0].tag == "gzeta(-3,2)");
    CHECK(two[1].root == cx(0.5, 14));
    std::istringstream bad("x1,zeta,abc,1\n");
    CHECK_THROWS_AS(read_claims(bad), Error);
}

TEST_CASE("epstein_sum_direct")
{
    EpsteinForm sq = EpsteinForm::rectangular(1.0);
    for (double s : {2.0, 3.0}) {
        cx beta = (oracle::hurwitz(s, 0.25) - oracle::hurwitz(s, 0.75)) / std::pow(4.0, s);
        cx ref = 4.0 * oracle::zeta(s) * beta;
        EvalResult r = epstein_sum_direct(sq, s, 1e-10);
        CHECK(std::abs(r.value - ref) < 1e-8);
        CHECK(r.est_error <= 1e-10);
        CHECK(std::abs(epstein_shells(sq, s, r.terms_used * 2) - r.value) < r.est_error);
    }
    // m^2 + 2 n^2 against 2 zeta(s) L_{-8}(s).
    EpsteinForm r2 = EpsteinForm::rectangular(std::sqrt(2.0));
    cx l8 = 0.0;
    const int chi8[] = {1, 0, 1, 0, -1, 0, -1, 0};
    for (int j = 1; j <= 8; ++j) l8 += double(chi8[j - 1]) * oracle::hurwitz(2.0, j / 8.0);
    l8 /= 64.0;
    CHECK(std::abs(epstein_sum_direct(r2, 2.0, 1e-10).value - 2.0 * oracle::zeta(2.0) * l8) < 1e-8);

    cx s(2.5, 4.0);
    CHECK(std::abs(epstein_shells(r2, s, 200, false) - epstein_shells(r2, s, 200, true)) < 1e-12);
    EvalResult g = epstein_sum_direct(EpsteinForm::quadratic(2, 1, 3), s, 1e-10);
    CHECK(std::abs(epstein_shells(EpsteinForm::quadratic(2, 1, 3), s, 2 * g.terms_used) - g.value) < g.est_error);

    CHECK_THROWS_AS(epstein_sum_direct(sq, 1.0, 1e-8), Error);
    CHECK_THROWS_AS(epstein_sum_direct(sq, cx(0.7, 3), 1e-8), Error);
    CHECK_THROWS_AS(EpsteinForm::quadratic(1, 3, 1), Error);
    CHECK_THROWS_AS(EpsteinForm::quadratic(-1, 0, 1), Error);
}

TEST_CASE("epstein_continued")
{
    for (EpsteinForm f : {EpsteinForm::rectangular(1.0), EpsteinForm::rectangular(std::sqrt(3.0)),
                          EpsteinForm::quadratic(2, 1, 3), EpsteinForm::quadratic(1, -1, 5)}) {
        for (cx s : {cx(2.0, 0.0), cx(2.0, 4.0), cx(2.5, -1.0)}) {
            EvalResult d = epstein_sum_direct(f, s, 1e-10);
            CHECK(std::abs(epstein_continued(f, s).value - d.value) < 1e-8);
        }
        cx s(0.7, 3.0);
        CHECK(std::abs(epstein_completed(f, s) - epstein_completed(f, 1.0 - s)) < 1e-6);
        CHECK(std::abs(epstein_completed(f, cx(0.2, -7.0)) - epstein_completed(f, cx(0.8, 7.0))) < 1e-6);

        EpsteinParts p = epstein_parts(f, s);
        cx full = epstein_continued(f, s).value, two = epstein_continued(f, s, true).value;
        CHECK(std::abs((full - p.bessel_term) - two) <= 1e-15 * std::abs(full));
        CHECK(two == p.zeta_term + p.gamma_term);

        // Removable points: Z(0) = -1 and continuity through s = 1/2.
        CHECK(std::abs(epstein_continued(f, 0.0).value + 1.0) < 1e-10);
        cx half = epstein_continued(f, 0.5).value;
        CHECK(std::abs(half - epstein_continued(f, cx(0.5, 1e-5)).value) < 1e-3);
        CHECK_THROWS_AS(epstein_continued(f, 1.0), Error);
    }
}

TEST_CASE("epstein factorisations")
{
    cx s(2.5, 1.0);
    cx z = zeta(s).value;
    auto two = [&](double c) { return std::exp(c * std::log(2.0) * s); };  // 2^{c s}
    auto S = [&](double l) { return epstein_continued(EpsteinForm::rectangular(l), s).value; };
    CHECK(std::abs(S(1.0) - 4.0 * z * PeriodicSeries::chi_m4()(s).value) < 1e-10);
    CHECK(std::abs(S(std::sqrt(2.0)) - 2.0 * z * PeriodicSeries::chi_m8()(s).value) < 1e-10);
    CHECK(std::abs(S(std::sqrt(3.0)) - 2.0 * (1.0 - 2.0 * two(-2) + 4.0 * two(-2)) * z * PeriodicSeries::chi_m3()(s).value) <
          1e-10);
    CHECK(std::abs(S(2.0) - 2.0 * (1.0 - two(-1) + 2.0 * two(-2)) * z * PeriodicSeries::chi_m4()(s).value) < 1e-10);
    CHECK(std::abs(S(std::sqrt(7.0)) - 2.0 * (1.0 - 2.0 * two(-1) + 2.0 * two(-2)) * z * PeriodicSeries::chi_m7()(s).value) <
          1e-10);
}

TEST_CASE("epstein sqrt3 without the 2^{2-2s} term" * doctest::should_fail())
{
    cx s(2.5, 1.0);
    cx rhs = 2.0 * (1.0 - 2.0 * std::exp(-2.0 * std::log(2.0) * s)) * zeta(s).value * PeriodicSeries::chi_m3()(s).value;
    CHECK(std::abs(epstein_continued(EpsteinForm::rectangular(std::sqrt(3.0)), s).value - rhs) < 1e-8);
}

TEST_CASE("PeriodicSeries")
{
    for (cx s : {cx(2.0, 0.0), cx(0.5, 10.0), cx(-1.5, 2.0)})
        CHECK(std::abs(PeriodicSeries::chi_m4()(s).value - dirichlet_beta(s).value) < 1e-12);
    CHECK(std::abs(PeriodicSeries::chi_m4()(1.0).value - kPi / 4) < 1e-10);
    CHECK(std::abs(PeriodicSeries::chi_m3()(1.0).value - kPi / (3 * std::sqrt(3.0))) < 1e-10);
    CHECK(std::abs(PeriodicSeries({1.0})(3.0).value - oracle::zeta(3.0)) < 1e-13);
    CHECK_THROWS_AS(PeriodicSeries({0.0, 0.0}), Error);
    CHECK_THROWS_AS(PeriodicSeries({1.0, 1.0})(1.0), Error);
}

TEST_CASE("davenport_heilbronn")
{
    double xi = dh_xi();
    CHECK(std::abs(xi - (std::sqrt(10 - 2 * std::sqrt(5.0)) - 2) / (std::sqrt(5.0) - 1)) < 1e-12);
    for (cx s : {cx(2.0, 0.0), cx(0.3, 4.0), cx(1.6, -2.0)}) CHECK(std::abs(dh_fe_residual(s)) < 1e-10);
    // The series itself at s = 3.
    cx direct = 0.0;
    const double c[] = {1, xi, -xi, -1, 0};
    for (int n = 1; n <= 200000; ++n) direct += c[(n - 1) % 5] / std::pow(double(n), 3.0);
    CHECK(std::abs(dh_function(3.0) - direct) < 1e-10);

    struct Z {
        cx seed, quoted, ref;
    };
    const Z zs[] = {{{0.8, 85.7}, {0.808517, 85.699348}, {0.80851718245664, 85.699348485378}},
                    {{0.65, 114.2}, {0.650830, 114.163343}, {0.65083008060974, 114.16334273076}}};
    for (const Z& z : zs) {
        ScanRoot r = dh_newton(z.seed);
        CHECK(std::abs(r.z.real() - z.quoted.real()) < 1e-4);
        CHECK(std::abs(r.z - z.quoted) < 1e-4);
        CHECK(std::abs(r.z - z.ref) < 1e-9);
        CHECK(r.residual < 1e-9);
        CHECK(std::abs(r.z.real() - 0.5) > 0.1);
        CHECK(std::abs(dh_fe_residual(r.z)) < 1e-9);
        CHECK(std::abs(dh_fe_residual(1.0 - std::conj(r.z))) < 1e-9);
    }
}

TEST_CASE("gzeta")
{
    CHECK(std::abs(gzeta(1, 0, 3.0).value - oracle::zeta(3.0)) < 1e-13);
    CHECK(gzeta_case(1, 0) == GzetaCase::reduction);
    CHECK(gzeta_case(-3, 2) == GzetaCase::I);
    CHECK(gzeta_case(-3, -1) == GzetaCase::II);
    CHECK(gzeta_case(3, -1) == GzetaCase::III);
    CHECK(gzeta_case(3, 7) == GzetaCase::IV);
    CHECK(gzeta_case(-3, 10) == GzetaCase::V);
    CHECK_THROWS_AS(gzeta(3, -1, 2.0), Error);
    CHECK_THROWS_AS(gzeta(0, 1, 2.0), Error);
    CHECK_THROWS_AS(gzeta(-3, 3, 2.0), Error);

    // Direct series sum_k (alpha k + beta)^{-z} for Re z > 1, alpha > 0.
    cx sum = 0.0;
    for (int k = 1; k <= 400000; ++k) sum += std::pow(3.0 * k + 7.0, -3.0);
    CHECK(std::abs(gzeta(3, 7, 3.0).value - sum) < 1e-12);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> re(-1, 2), im(-3, 3);
    const double q = 1.0 / 3;
    for (int i = 0; i < 20; ++i) {
        cx z(re(rng), im(rng));
        if (std::abs(z - 1.0) < 0.1) continue;
        cx pre = std::exp(-z * std::log(cx(-3.0, 0.0)));
        cx alt = pre * (std::exp(-z * std::log(q)) + oracle::hurwitz(z, q + 1));
        cx g = gzeta(-3, 2, z).value;
        CHECK(std::abs(g - alt) < 1e-10 * std::max(1.0, std::abs(g)));
    }
}

TEST_CASE("gzeta_zero_search")
{
    GzetaSearch g = gzeta_zero_search(-3, 2, {0, 1, 0, 40}, Parallel(4));
    CHECK(g.kind == GzetaCase::I);
    REQUIRE(g.roots.size() == kGzeta.size());
    CHECK(g.certified_count == static_cast<int>(g.roots.size()));
    CHECK(g.seeded > 0);
    int below_half = 0;
    std::vector<cx> zs;
    for (const auto& r : g.roots) {
        CHECK(r.residual < 1e-9);
        CHECK(std::abs(oracle::hurwitz(r.z, 1.0 / 3)) < 1e-9);
        CHECK(r.in_strip);
        // Real q: the conjugate is a zero as well.
        CHECK(std::abs(hurwitz_zeta(std::conj(r.z), 1.0 / 3).value) < 1e-9);
        if (r.z.real() > 0 && r.z.real() < 0.5) ++below_half;
        zs.push_back(r.z);
    }
    CHECK(below_half > 0);
    for (cx z : kGzeta) CHECK(contains(zs, z, 1e-8));

    GzetaSearch one = gzeta_zero_search(-3, 2, {0, 1, 0, 40}, Parallel(1));
    REQUIRE(one.roots.size() == g.roots.size());
    for (std::size_t i = 0; i < one.roots.size(); ++i) CHECK(one.roots[i].z == g.roots[i].z);

    // Case V: q < 0, no pairing asserted.
    GzetaSearch v = gzeta_zero_search(-3, 10, {0, 1, -20, 20}, Parallel(4));
    CHECK(v.kind == GzetaCase::V);
    CHECK(v.certified_count == static_cast<int>(v.roots.size()));
    for (const auto& r : v.roots) {
        CHECK(r.residual < 1e-9);
        // 50 digits absorb the e^{pi Im z} cancellation above the axis.
        cx scale = r.z.imag() > 0 ? std::exp(cx(0.0, M_PI) * r.z) : cx(1.0);
        CHECK(std::abs(scale * oracle::hurwitz(r.z, cx(-7.0 / 3, 0.0))) < 1e-9);
    }
    CHECK_THROWS_AS(gzeta_zero_search(-3, 6, {0, 1, 0, 10}, Parallel(1)), Error);

    CHECK_THROWS_AS(gzeta_zero_search(3, -1, {0, 1, 0, 40}, Parallel(1)), Error);
}
