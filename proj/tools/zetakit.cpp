#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "zetakit/felab.hpp"
#include "zetakit/hzoo.hpp"
#include "zetakit/io.hpp"
#include "zetakit/primes.hpp"
#include "zetakit/specfun.hpp"
#include "zetakit/zerofind.hpp"
#include "zetakit/zstats.hpp"

#ifndef ZK_DEFAULT_CACHE
#define ZK_DEFAULT_CACHE "zeros.txt"
#endif

using namespace zk;

namespace {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Report {
    std::vector<std::string> cols;
    std::vector<std::vector<Cell>> rows;
    void add(std::vector<Cell> r)
    {
        if (r.size() != cols.size()) throw std::logic_error("report row width");
        rows.push_back(std::move(r));
    }
};

Cell I(std::int64_t v) { return v; }

std::string cell_text(const Cell& c, bool json)
{
    if (auto d = std::get_if<double>(&c)) {
        if (json && !std::isfinite(*d)) return "null";
        return num(*d);
    }
    if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (auto b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    const auto& s = std::get<std::string>(c);
    return json ? nlohmann::json(s).dump() : s;
}

std::string render(const Report& r, bool json)
{
    std::ostringstream os;
    if (json) {
        os << "[\n";
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            os << '{';
            for (std::size_t j = 0; j < r.cols.size(); ++j)
                os << (j ? "," : "") << nlohmann::json(r.cols[j]).dump() << ':' << cell_text(r.rows[i][j], true);
            os << '}' << (i + 1 < r.rows.size() ? ",\n" : "\n");
        }
        os << "]\n";
    } else {
        for (std::size_t j = 0; j < r.cols.size(); ++j) os << (j ? "," : "") << r.cols[j];
        os << '\n';
        for (const auto& row : r.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << cell_text(row[j], false);
            os << '\n';
        }
    }
    return os.str();
}

std::vector<double> parse_list(const std::string& s, std::size_t want, const char* what)
{
    std::vector<double> v;
    for (const auto& f : split_csv_line(s)) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(f, &used));
            if (used != f.size()) throw std::invalid_argument(f);
        } catch (const std::exception&) {
            throw Error(ErrorKind::usage, std::string("bad number in ") + what + ": " + s);
        }
    }
    if (want && v.size() != want)
        throw Error(ErrorKind::usage, std::string(what) + " needs " + std::to_string(want) + " comma-separated values");
    return v;
}

cx parse_cx(const std::string& s)
{
    auto v = parse_list(s, 2, "complex value");
    return {v[0], v[1]};
}

Rect parse_rect(const std::string& s)
{
    auto v = parse_list(s, 4, "region");
    return {v[0], v[1], v[2], v[3]};
}

struct Global {
    int workers = 1;
    std::string format = "csv";
    std::string out;
    std::string cache = ZK_DEFAULT_CACHE;
    CLI::Option* format_opt = nullptr;
    CLI::Option* cache_opt = nullptr;

    Parallel par() const { return Parallel(workers); }
    bool format_given() const { return format_opt->count() > 0 || std::getenv("ZETAKIT_FORMAT"); }
    bool cache_given() const { return cache_opt->count() > 0 || std::getenv("ZETAKIT_CACHE"); }
    std::vector<ZeroRecord> zeros() const { return read_zero_cache(cache); }

    void emit(const Report& r, bool json_default = false) const
    {
        bool json = format_given() ? format == "json" : (json_default || format == "json");
        std::string text = render(r, json);
        if (out.empty()) {
            std::cout << text;
            std::cout.flush();
            return;
        }
        std::ofstream f(out, std::ios::binary);
        if (!f) throw Error(ErrorKind::io, "cannot write " + out);
        f << text;
        if (!f) throw Error(ErrorKind::io, "write failed: " + out);
    }
};

int exit_code(ErrorKind k)
{
    return k == ErrorKind::usage || k == ErrorKind::parameter ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"zetakit: zeta zeros, functional-equation roots, prime reconstruction and zero statistics"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--workers", g.workers, "worker threads")->envname("ZETAKIT_WORKERS")->check(CLI::PositiveNumber);
    g.format_opt = app.add_option("--format", g.format, "csv or json")
                       ->envname("ZETAKIT_FORMAT")
                       ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "output file (default stdout)")->envname("ZETAKIT_OUT");
    g.cache_opt = app.add_option("--cache", g.cache, "zero cache file")->envname("ZETAKIT_CACHE");

    std::function<void()> run;

    // zeros
    auto* zs = app.add_subcommand("zeros", "compute zeros 1..n on the critical line");
    int zn = 100;
    std::string zmethod = "all";
    double ztol = 1e-10;
    zs->add_option("--n", zn)->envname("ZETAKIT_MAX_ZERO")->check(CLI::Range(1, 20000));
    zs->add_option("--method", zmethod)
        ->check(CLI::IsMember({"all", "bisection", "newton", "lambert_seed", "franca_leclair", "xlogx_fixed_point"}));
    zs->add_option("--tol", ztol)->envname("ZETAKIT_TOL")->check(CLI::PositiveNumber);
    zs->callback([&] {
        run = [&] {
            std::vector<ZeroRecord> recs;
            if (zmethod == "all" || zmethod == "bisection") {
                ZeroTable t = compute_zeros(zn, ztol, zmethod == "all", g.par());
                recs = t.records;
                if (zmethod == "all") {
                    std::cerr << "max disagreement across methods: " << num(t.max_disagreement) << '\n';
                    if (!(t.max_disagreement <= std::max(1e-8, 10 * ztol)))
                        throw Error(ErrorKind::unresolved, "methods disagree by " + num(t.max_disagreement));
                }
            } else {
                ZeroMethod m = parse_zero_method(zmethod);
                recs = g.par().map<ZeroRecord>(zn, [&](std::size_t i) {
                    int n = static_cast<int>(i) + 1;
                    ZeroRecord r;
                    if (m == ZeroMethod::franca_leclair) r = franca_leclair_zero(n, ztol);
                    else if (m == ZeroMethod::xlogx_fixed_point) r = xlogx_zero(n, ztol);
                    else r = newton_zero(approx_zero(n), ztol);
                    r.n = n;
                    r.method = m;
                    return r;
                });
            }
            if (g.cache_given()) write_zero_cache(g.cache, recs);
            Report r{{"n", "gamma", "residual", "method"}, {}};
            for (const auto& z : recs) r.add({I(z.n), z.gamma, z.residual, to_string(z.method)});
            g.emit(r);
        };
    });

    // gram
    auto* gs = app.add_subcommand("gram", "Gram-point pairs from Lambert W");
    int gfrom = 1, gto = 10;
    gs->add_option("--from", gfrom)->check(CLI::PositiveNumber);
    gs->add_option("--to", gto)->check(CLI::PositiveNumber);
    gs->callback([&] {
        run = [&] {
            Report r{{"n", "y_plus", "y_minus", "y_plus_lambert", "y_minus_lambert"}, {}};
            for (int n = gfrom; n <= gto; ++n) {
                GramPair p = gram_pair(n);
                r.add({I(n), p.y_plus, p.y_minus, p.y_plus_lambert, p.y_minus_lambert});
            }
            g.emit(r);
        };
    });

    // approx
    auto* as = app.add_subcommand("approx", "explicit Lambert-W estimate of gamma_n");
    int afrom = 1, ato = 10;
    as->add_option("--from", afrom)->check(CLI::PositiveNumber);
    as->add_option("--to", ato)->check(CLI::PositiveNumber);
    as->callback([&] {
        run = [&] {
            Report r{{"n", "t_n"}, {}};
            for (int n = afrom; n <= ato; ++n) r.add({I(n), approx_zero(n)});
            g.emit(r);
        };
    });

    // count
    auto* cs = app.add_subcommand("count", "number of zeros with 0 < gamma <= T");
    std::vector<double> cts;
    cs->add_option("--t", cts, "heights T")->required()->check(CLI::PositiveNumber);
    cs->callback([&] {
        run = [&] {
            Report r{{"T", "count", "theta_count"}, {}};
            for (double t : cts) r.add({t, I(count_zeros(t)), I(exact_zero_count(t))});
            g.emit(r);
        };
    });

    // fe-roots
    auto* fs = app.add_subcommand("fe-roots", "roots of zeta(z) = zeta(1 - z) by Newton");
    std::vector<std::string> fseeds;
    double ftol = 1e-12;
    fs->add_option("--seed", fseeds, "seed re,im (repeatable)");
    fs->add_option("--tol", ftol)->envname("ZETAKIT_TOL")->check(CLI::PositiveNumber);
    fs->callback([&] {
        run = [&] {
            if (fseeds.empty())
                fseeds = {"0.5,3",   "0.5,-3",   "0.5,9.7", "0.5,-9.7", "0.5,14.1", "0.5,-14.1",
                          "-12,2.5", "13,2.5",   "9,4.5",   "9,-4.5"};
            std::vector<cx> seeds;
            for (const auto& s : fseeds) seeds.push_back(parse_cx(s));
            auto roots = g.par().map<cx>(seeds.size(), [&](std::size_t i) { return fe_root_newton(seeds[i], ftol); });
            Report r{{"seed_re", "seed_im", "re", "im", "residual"}, {}};
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                cx z = roots[i];
                double res = std::abs(zeta(z).value - zeta(1.0 - z).value);
                r.add({seeds[i].real(), seeds[i].imag(), z.real(), z.imag(), res});
            }
            g.emit(r);
        };
    });

    // lagrange
    auto* ls = app.add_subcommand("lagrange", "Lagrange-inversion roots of the model equations");
    std::string lproblem = "six_power";
    int lkfrom = 1, lkto = 1, lq = 0;
    ls->add_option("--problem", lproblem)->check(CLI::IsMember({"six_power", "type1", "type2", "half"}));
    ls->add_option("--k", lkfrom, "first branch index");
    ls->add_option("--k-to", lkto, "last branch index (default --k)");
    ls->add_option("--q", lq, "series order (default 8 for six_power, 25 otherwise)")->check(CLI::Range(1, 40));
    ls->callback([&] {
        run = [&] {
            if (!ls->get_option("--k-to")->count()) lkto = lkfrom;
            if (lkto < lkfrom) throw Error(ErrorKind::usage, "--k-to below --k");
            int n = lkto - lkfrom + 1;
            auto res = g.par().map<LagrangeResult>(n, [&](std::size_t i) {
                int k = lkfrom + static_cast<int>(i);
                LagrangeProblem p = lproblem == "six_power" ? six_power_problem(k, lq ? lq : 8)
                                    : lproblem == "type1" ? type1_problem(k, lq ? lq : 25)
                                    : lproblem == "type2" ? type2_problem(k, lq ? lq : 25)
                                                          : half_line_problem(k, lq ? lq : 25);
                return lagrange_solve(p);
            });
            Report r{{"k", "seed_re", "seed_im", "raw_re", "raw_im", "re", "im", "refinements", "residual",
                      "original_residual"},
                     {}};
            for (int i = 0; i < n; ++i) {
                const auto& x = res[i];
                r.add({I(lkfrom + i), x.seed.real(), x.seed.imag(), x.raw.real(), x.raw.imag(), x.value.real(),
                       x.value.imag(), I(x.refinements), x.residual, x.original_residual});
            }
            g.emit(r);
        };
    });

    // strips
    auto* ss = app.add_subcommand("strips", "univalence strip widths 2 pi / ln n");
    int snmax = 10;
    ss->add_option("--n-max", snmax)->check(CLI::Range(2, 1000000));
    ss->callback([&] {
        run = [&] {
            Report r{{"n", "width", "overlaps_previous"}, {}};
            for (int n = 2; n <= snmax; ++n) {
                StripInfo s = strip_geometry(n);
                r.add({I(n), s.width, s.overlaps_previous});
            }
            g.emit(r);
        };
    });

    // bounds
    auto* bs = app.add_subcommand("bounds", "real-part bounds of the model roots");
    bs->callback([&] {
        run = [&] {
            ReBounds b = re_bounds();
            Report r{{"low", "high", "mean"}, {}};
            r.add({b.low, b.high, b.mean});
            g.emit(r);
        };
    });

    // qz-map
    auto* qs = app.add_subcommand("qz-map", "zeros of zeta(q z) from the cached zeros");
    double qq = 2.0;
    int qcount = 10;
    qs->add_option("--q", qq)->required();
    qs->add_option("--count", qcount)->check(CLI::NonNegativeNumber);
    qs->callback([&] {
        run = [&] {
            QzMap m = qz_zero_map(qq, qcount, g.zeros());
            Report r{{"kind", "re", "im"}, {}};
            r.add({std::string("critical_line"), m.critical_line, 0.0});
            for (cx z : m.nontrivial) r.add({std::string("nontrivial"), z.real(), z.imag()});
            for (double t : m.trivial) r.add({std::string("trivial"), t, 0.0});
            g.emit(r);
        };
    });

    // extract
    auto* es = app.add_subcommand("extract", "recover leading zeros from power sums over cached zeros");
    int ezeros = 100, ecount = 2, eprobe = 200;
    es->add_option("--zeros", ezeros, "cached zeros in the power sums")->check(CLI::PositiveNumber);
    es->add_option("--count", ecount)->check(CLI::PositiveNumber);
    es->add_option("--probe", eprobe)->check(CLI::PositiveNumber);
    es->callback([&] {
        run = [&] {
            auto zc = g.zeros();
            if (static_cast<int>(zc.size()) < ezeros) throw Error(ErrorKind::range, "zero cache too small");
            std::vector<double> gam;
            for (int i = 0; i < ezeros; ++i) gam.push_back(zc[i].gamma);
            auto sums = [&](int s) {
                std::vector<double> t(gam.size());
                for (std::size_t i = 0; i < gam.size(); ++i) t[i] = std::pow(gam[i], -static_cast<double>(s));
                return pairwise_sum(t.data(), t.size());
            };
            auto ex = extract_zeros(sums, ecount, eprobe);
            Report r{{"k", "value", "probe", "drift"}, {}};
            for (std::size_t i = 0; i < ex.size(); ++i)
                r.add({I(static_cast<std::int64_t>(i) + 1), ex[i].value, I(ex[i].probe), ex[i].drift});
            g.emit(r);
        };
    });

    // hurwitz
    auto* hs = app.add_subcommand("hurwitz", "zeros of the Hurwitz zeta in its second argument");
    int hneg = 0;
    double hs_s = 0.0, hscan = 0.0, hgrid = 0.5;
    std::string hbracket, hregion = "-2,1,0,30";
    auto* o_neg = hs->add_option("--neg-int", hneg, "roots of zeta(-q, z), Bernoulli closed form")->check(CLI::PositiveNumber);
    auto* o_s = hs->add_option("--s", hs_s, "real s for a real zero of zeta(s, x)");
    hs->add_option("--bracket", hbracket, "lo,hi bracket for --s");
    auto* o_scan = hs->add_option("--scan", hscan, "complex zeros of zeta(q, z) for real q");
    hs->add_option("--region", hregion, "re_lo,re_hi,im_lo,im_hi for --scan");
    hs->add_option("--grid", hgrid)->check(CLI::PositiveNumber);
    o_neg->excludes(o_s)->excludes(o_scan);
    o_s->excludes(o_scan);
    o_s->needs(hs->get_option("--bracket"));
    hs->callback([&] {
        run = [&] {
            Report r{{"re", "im", "residual"}, {}};
            if (o_neg->count()) {
                for (cx z : hurwitz_negative_integer_zeros(hneg))
                    r.add({z.real(), z.imag(), std::abs(hurwitz_zeta(cx(-hneg, 0.0), z).value)});
            } else if (o_s->count()) {
                auto b = parse_list(hbracket, 2, "bracket");
                double x = hurwitz_real_zero(hs_s, {b[0], b[1]});
                r.add({x, 0.0, std::abs(hurwitz_zeta(cx(hs_s, 0.0), cx(x, 0.0)).value)});
            } else if (o_scan->count()) {
                for (const auto& s : hurwitz_complex_zero_scan(hscan, parse_rect(hregion), hgrid, g.par()))
                    r.add({s.z.real(), s.z.imag(), s.residual});
            } else {
                throw Error(ErrorKind::usage, "hurwitz needs one of --neg-int, --s, --scan");
            }
            g.emit(r);
        };
    });

    // epstein
    auto* eps = app.add_subcommand("epstein", "Epstein zeta of a binary quadratic form");
    double ea = 1, eb = 0, ec = 1, elambda = 0;
    std::string es_s = "2,0", emethod = "both";
    eps->add_option("--a", ea);
    eps->add_option("--b", eb);
    eps->add_option("--c", ec);
    auto* o_lam = eps->add_option("--lambda", elambda, "form m^2 + lambda^2 n^2")->check(CLI::PositiveNumber);
    eps->add_option("--s", es_s, "re,im");
    eps->add_option("--method", emethod)->check(CLI::IsMember({"direct", "continued", "both"}));
    o_lam->excludes(eps->get_option("--a"))->excludes(eps->get_option("--b"))->excludes(eps->get_option("--c"));
    eps->callback([&] {
        run = [&] {
            EpsteinForm f = o_lam->count() ? EpsteinForm::rectangular(elambda) : EpsteinForm::quadratic(ea, eb, ec);
            cx s = parse_cx(es_s);
            Report r{{"method", "re", "im", "est_error"}, {}};
            if (emethod != "continued") {
                EvalResult v = epstein_sum_direct(f, s, 1e-12);
                r.add({std::string("direct"), v.value.real(), v.value.imag(), v.est_error});
            }
            if (emethod != "direct") {
                EvalResult v = epstein_continued(f, s);
                r.add({std::string("continued"), v.value.real(), v.value.imag(), v.est_error});
            }
            g.emit(r);
        };
    });

    // dh
    auto* ds = app.add_subcommand("dh", "Davenport-Heilbronn function: xi and off-line zeros");
    std::vector<std::string> dseeds;
    ds->add_option("--seed", dseeds, "seed re,im (repeatable)");
    ds->callback([&] {
        run = [&] {
            if (dseeds.empty()) dseeds = {"0.8,85.7", "0.65,114.2", "0.57,166.5", "0.72,176.7"};
            std::vector<cx> seeds;
            for (const auto& s : dseeds) seeds.push_back(parse_cx(s));
            auto roots = g.par().map<ScanRoot>(seeds.size(), [&](std::size_t i) { return dh_newton(seeds[i]); });
            Report r{{"kind", "re", "im", "residual"}, {}};
            r.add({std::string("xi"), dh_xi(), 0.0, 0.0});
            for (const auto& z : roots) r.add({std::string("zero"), z.z.real(), z.z.imag(), z.residual});
            g.emit(r);
        };
    });

    // gzeta
    auto* gz = app.add_subcommand("gzeta", "zeros of sum (alpha n + beta)^{-z}");
    double galpha = 1, gbeta = 1;
    std::string gregion = "0,1,0,40";
    gz->add_option("--alpha", galpha)->required();
    gz->add_option("--beta", gbeta)->required();
    gz->add_option("--region", gregion, "re_lo,re_hi,im_lo,im_hi");
    gz->callback([&] {
        run = [&] {
            GzetaSearch s = gzeta_zero_search(galpha, gbeta, parse_rect(gregion), g.par());
            std::cerr << "case " << to_string(s.kind) << ", certified count " << s.certified_count << '\n';
            Report r{{"case", "re", "im", "residual", "in_strip"}, {}};
            for (const auto& z : s.roots) r.add({to_string(s.kind), z.z.real(), z.z.imag(), z.residual, z.in_strip});
            g.emit(r);
            if (static_cast<int>(s.roots.size()) != s.certified_count)
                throw Error(ErrorKind::unresolved, "found " + std::to_string(s.roots.size()) + " roots, winding count " +
                                                       std::to_string(s.certified_count));
        };
    });

    // audit
    auto* au = app.add_subcommand("audit", "re-evaluate a registry of claimed roots");
    std::string registry;
    double atol_scale = 1.0;
    au->add_option("--registry", registry, "claims file: id,tag,re,im")->required();
    au->add_option("--tol-scale", atol_scale)->check(CLI::PositiveNumber);
    au->callback([&] {
        run = [&] {
            auto audits = audit_claims(read_claims(registry), g.par(), atol_scale);
            Report r{{"claim_id", "function_tag", "re", "im", "residual", "verdict"}, {}};
            for (const auto& a : audits)
                r.add({a.claim_id, a.function_tag, a.claimed_root.real(), a.claimed_root.imag(), a.residual,
                       to_string(a.verdict)});
            g.emit(r, true);
        };
    });

    // primes
    auto* ps = app.add_subcommand("primes", "prime counts, R(x) and the zero-sum reconstruction");
    bool preconstruct = false;
    double pxmin = 100, pxmax = 1000, pstep = 0.5;
    int pk = 200;
    std::vector<double> pxs;
    ps->add_flag("--reconstruct", preconstruct, "tabulate pi_K(x) on a grid");
    ps->add_option("--x-min", pxmin)->check(CLI::Range(10.0, 1e9));
    ps->add_option("--x-max", pxmax)->check(CLI::Range(10.0, 1e9));
    ps->add_option("--step", pstep)->check(CLI::PositiveNumber);
    ps->add_option("--k", pk)->check(CLI::NonNegativeNumber);
    ps->add_option("--x", pxs, "points for li and R")->check(CLI::Range(2.0, 1e9));
    ps->callback([&] {
        run = [&] {
            if (preconstruct) {
                if (pxmax < pxmin) throw Error(ErrorKind::usage, "--x-max below --x-min");
                auto zc = g.zeros();
                SieveTable t = sieve(static_cast<std::int64_t>(pxmax) + 1, g.par());
                std::vector<double> xs;
                for (std::int64_t i = 0;; ++i) {
                    double x = pxmin + i * pstep;
                    if (x > pxmax) break;
                    xs.push_back(x);
                }
                auto pk_vals = g.par().map<double>(xs.size(), [&](std::size_t i) {
                    return pi_reconstruct(xs[i], pk, zc);
                });
                Report r{{"x", "pi_exact", "R", "pi_K"}, {}};
                for (std::size_t i = 0; i < xs.size(); ++i)
                    r.add({xs[i], I(t.pi(xs[i])), riemann_r(xs[i]), pk_vals[i]});
                g.emit(r);
            } else {
                if (pxs.empty()) throw Error(ErrorKind::usage, "primes needs --reconstruct or --x");
                double top = *std::max_element(pxs.begin(), pxs.end());
                SieveTable t = sieve(static_cast<std::int64_t>(top) + 1, g.par());
                Report r{{"x", "pi_exact", "li", "R"}, {}};
                for (double x : pxs) r.add({x, I(t.pi(x)), li(x), riemann_r(x)});
                g.emit(r);
            }
        };
    });

    // ratio
    auto* rs = app.add_subcommand("ratio", "largest ratio of consecutive primes; gap-zero formula");
    double rlimit = 1e7;
    int rgn = 0, rgk = 1;
    rs->add_option("--limit", rlimit)->check(CLI::Range(3.0, 1e9));
    auto* o_gn = rs->add_option("--gap-n", rgn, "evaluate zeta at 1/2 + i k pi / log(p_{n+1}/p_n)")->check(CLI::PositiveNumber);
    rs->add_option("--gap-k", rgk)->check(CLI::PositiveNumber);
    rs->callback([&] {
        run = [&] {
            if (o_gn->count()) {
                GapZero z = prime_gap_zero_formula(rgn, rgk);
                Report r{{"n", "k", "re", "im", "residual"}, {}};
                r.add({I(rgn), I(rgk), z.s.real(), z.s.imag(), z.residual});
                g.emit(r);
                return;
            }
            RatioScan s = prime_ratio_scan(static_cast<std::int64_t>(rlimit), g.par());
            Report r{{"limit", "max_ratio", "arg_prime", "bound_holds"}, {}};
            r.add({I(static_cast<std::int64_t>(rlimit)), s.max_ratio, I(s.arg_prime), s.bound_holds});
            g.emit(r);
        };
    });

    // spacings
    auto* sp = app.add_subcommand("spacings", "normalized zero spacings");
    int sfrom = 100, sto = 1000, sbins = 40;
    bool shist = false, ssummary = false;
    sp->add_option("--from", sfrom)->check(CLI::PositiveNumber);
    sp->add_option("--to", sto)->check(CLI::PositiveNumber);
    sp->add_option("--bins", sbins)->check(CLI::PositiveNumber);
    auto* o_hist = sp->add_flag("--histogram", shist, "bin masses against the GUE spacing law");
    auto* o_sum = sp->add_flag("--summary", ssummary, "mean, KS distance and small-gap fraction");
    o_hist->excludes(o_sum);
    sp->callback([&] {
        run = [&] {
            auto zc = g.zeros();
            SpacingSample s = normalized_spacings(zc, sfrom, sto, sbins);
            if (shist) {
                Report r{{"bin_lo", "bin_hi", "mass", "gue_mass"}, {}};
                for (int b = 0; b < sbins; ++b) {
                    double lo = s.edges[b], hi = s.edges[b + 1];
                    double gm = (b + 1 == sbins ? 1.0 : gue_cdf(hi)) - gue_cdf(lo);
                    r.add({lo, hi, s.masses[b], gm});
                }
                g.emit(r);
            } else if (ssummary) {
                int below = 0;
                for (double d : s.delta) below += d < 0.5;
                double p = gue_cdf(0.5);
                double frac = static_cast<double>(below) / s.count;
                double sigma = std::sqrt(p * (1 - p) / s.count);
                Report r{{"from", "to", "count", "mean", "ks_gue", "frac_below_half", "gue_below_half", "sigma"}, {}};
                r.add({I(sfrom), I(sto), I(s.count), s.mean, ks_distance(s.delta, gue_cdf), frac, p, sigma});
                g.emit(r);
            } else {
                Report r{{"n", "gamma", "delta_n"}, {}};
                for (int i = 0; i < s.count; ++i)
                    r.add({I(sfrom + i), zc[sfrom + i - 1].gamma, s.delta[i]});
                g.emit(r);
            }
        };
    });

    // gue
    auto* gu = app.add_subcommand("gue", "GUE pair correlation and spacing law");
    double gumax = 4.0;
    int gsteps = 40;
    gu->add_option("--u-max", gumax)->check(CLI::PositiveNumber);
    gu->add_option("--steps", gsteps)->check(CLI::PositiveNumber);
    gu->callback([&] {
        run = [&] {
            auto rows = g.par().map<std::array<double, 5>>(gsteps + 1, [&](std::size_t i) {
                double u = gumax * static_cast<double>(i) / gsteps;
                return std::array<double, 5>{u, gue_density(u), pair_correlation_integral(u), gue_cdf(u),
                                             gue_spacing_density(u)};
            });
            Report r{{"u", "pair_density", "pair_integral", "spacing_cdf", "spacing_density"}, {}};
            for (const auto& a : rows) r.add({a[0], a[1], a[2], a[3], a[4]});
            g.emit(r);
        };
    });

    // windows
    auto* ws = app.add_subcommand("windows", "primes and zero gaps in windows (N, N + delta]");
    std::int64_t wN = 1000, wdelta = 1000;
    int wcount = 1;
    ws->add_option("--N", wN)->check(CLI::NonNegativeNumber);
    ws->add_option("--delta", wdelta)->check(CLI::PositiveNumber);
    ws->add_option("--count", wcount)->check(CLI::PositiveNumber);
    ws->callback([&] {
        run = [&] {
            auto zc = g.zeros();
            SieveTable t = sieve(wN + wdelta * wcount, g.par(), 0);
            auto reps = window_reports(wN, wdelta, wcount, zc, t, g.par());
            Report r{{"N", "delta", "primes", "false", "kin", "kf", "empty_gaps", "boundary_lo", "boundary_hi"}, {}};
            for (const auto& w : reps)
                r.add({I(w.N), I(w.delta), I(w.prime_count), I(w.false_measure), I(w.kin), I(w.kf), I(w.empty_gaps),
                       I(w.boundary_lo), I(w.boundary_hi)});
            g.emit(r);
        };
    });

    // fit
    auto* ft = app.add_subcommand("fit", "least-squares fits of x,y data");
    std::string fdata, fmodel = "nonlinear", finit = "1108.254246288494,5.425635171403081,0,-4503.90336177023";
    ft->add_option("--data", fdata, "CSV of x,y; '#' lines and a non-numeric header are skipped")->required();
    ft->add_option("--model", fmodel)->check(CLI::IsMember({"linear", "nonlinear"}));
    ft->add_option("--init", finit, "a,b,c,d start for the nonlinear model");
    ft->callback([&] {
        run = [&] {
            std::ifstream in(fdata);
            if (!in) throw Error(ErrorKind::io, "cannot read " + fdata);
            std::vector<FitPoint> pts;
            std::string line;
            bool first = true;
            while (std::getline(in, line)) {
                std::string t = trim(line);
                if (t.empty() || t[0] == '#') continue;
                auto f = split_csv_line(t);
                try {
                    if (f.size() != 2) throw std::invalid_argument(t);
                    pts.push_back({std::stod(f[0]), std::stod(f[1])});
                } catch (const std::exception&) {
                    if (first) {
                        first = false;
                        continue;
                    }
                    throw Error(ErrorKind::io, "bad data line: " + t);
                }
                first = false;
            }
            FitResult res;
            std::vector<std::string> names;
            if (fmodel == "linear") {
                res = linear_fit(pts);
                names = {"intercept", "slope"};
            } else {
                auto v = parse_list(finit, 4, "--init");
                res = nonlinear_fit(pts, {v[0], v[1], v[2], v[3]});
                names = {"a", "b", "c", "d"};
            }
            Report r{{"model"}, {}};
            std::vector<Cell> row{fmodel};
            for (std::size_t i = 0; i < names.size(); ++i) {
                r.cols.push_back(names[i]);
                row.push_back(res.params[i]);
            }
            for (std::size_t i = 0; i < names.size(); ++i) {
                r.cols.push_back("se_" + names[i]);
                row.push_back(res.std_errors[i]);
            }
            r.cols.push_back("rss");
            row.push_back(res.rss);
            r.cols.push_back("iterations");
            row.push_back(I(res.iterations));
            r.add(row);
            g.emit(r, true);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    // CLI11 skips environment values that fail validation; treat them as usage errors.
    std::vector<CLI::App*> apps{&app};
    for (auto* sub : app.get_subcommands()) apps.push_back(sub);
    for (auto* a : apps)
        for (const auto* opt : a->get_options()) {
            const std::string& env = opt->get_envname();
            const char* v = env.empty() ? nullptr : std::getenv(env.c_str());
            if (v && *v && opt->count() == 0) {
                std::cerr << "zetakit: invalid value in " << env << ": " << v << '\n';
                return 2;
            }
        }
    try {
        run();
    } catch (const Error& e) {
        std::cerr << "zetakit: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "zetakit: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
