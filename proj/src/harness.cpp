#include "conicbundle/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "conicbundle/analytic.hpp"
#include "conicbundle/error.hpp"

namespace cb {

namespace {

// Runs job(i) for i in [0, n) on a bounded pool; results are written by index.
template <class Job>
void parallel_for(size_t n, unsigned threads, Job&& job)
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned k = threads == 0 ? hw : threads;
    k = unsigned(std::min<size_t>(k, n));
    if (k <= 1) {
        for (size_t i = 0; i < n; ++i)
            job(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex mtx;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < k; ++w)
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(mtx);
                    if (!failure)
                        failure = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

u64 fnv1a(const std::string& s)
{
    u64 h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::string to_string(CountMethod m) { return m == CountMethod::Fibration ? "fibration" : "direct"; }

CountMethod parse_count_method(const std::string& s)
{
    if (s == "fibration")
        return CountMethod::Fibration;
    if (s == "direct")
        return CountMethod::Direct;
    throw Error(ErrorKind::InvalidArgument, "unknown count method '" + s + "'");
}

std::string CountRecord::to_text() const
{
    return fmt::format("surface_id={}\nB={}\nmethod={}\nx_cutoff={}\ncount={}\nexcluded_singular_fibres={}\n"
                       "excluded_line_points={}\nruntime_ms={}\n",
                       surface_id, fmt_double(B), to_string(method), fmt_double(x_cutoff), count,
                       excluded_singular_fibres, excluded_line_points, runtime_ms);
}

CountRecord CountRecord::from_text(const std::string& text)
{
    CountRecord r;
    std::istringstream in(text);
    std::string line;
    int seen = 0;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        std::string k = line.substr(0, eq), v = line.substr(eq + 1);
        try {
            if (k == "surface_id")
                r.surface_id = v;
            else if (k == "B")
                r.B = std::stod(v);
            else if (k == "method")
                r.method = parse_count_method(v);
            else if (k == "x_cutoff")
                r.x_cutoff = std::stod(v);
            else if (k == "count")
                r.count = std::stoull(v);
            else if (k == "excluded_singular_fibres")
                r.excluded_singular_fibres = std::stoull(v);
            else if (k == "excluded_line_points")
                r.excluded_line_points = std::stoull(v);
            else if (k == "runtime_ms")
                r.runtime_ms = std::stoll(v);
            else
                continue;
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::Parse, "malformed count record field '" + k + "'");
        }
        ++seen;
    }
    if (seen < 8)
        throw Error(ErrorKind::Parse, "incomplete count record");
    return r;
}

bool CountRecord::same_result(const CountRecord& o) const
{
    return surface_id == o.surface_id && B == o.B && method == o.method && x_cutoff == o.x_cutoff &&
           count == o.count && excluded_singular_fibres == o.excluded_singular_fibres &&
           excluded_line_points == o.excluded_line_points;
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir))
{
    std::filesystem::create_directories(dir_);
}

std::filesystem::path ResultCache::file_for(const std::string& key) const
{
    return dir_ / fmt::format("{:016x}.txt", fnv1a(key));
}

std::optional<std::string> ResultCache::get(const std::string& key) const
{
    std::ifstream in(file_for(key));
    if (!in)
        return std::nullopt;
    std::string first;
    std::getline(in, first);
    if (first != "key=" + key)
        return std::nullopt;
    std::stringstream rest;
    rest << in.rdbuf();
    return rest.str();
}

void ResultCache::put(const std::string& key, const std::string& value) const
{
    auto path = file_for(key);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << "key=" << key << "\n" << value;
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::pair<FibreIndex, u64>> fibre_counts(const CubicSurfaceNF& X, double B, double x_cutoff,
                                                     unsigned threads)
{
    auto fibres = domain_B(X, x_cutoff);
    std::vector<std::pair<FibreIndex, u64>> out(fibres.size());
    parallel_for(fibres.size(), threads, [&](size_t i) {
        out[i] = {fibres[i], count_points(fibre_conic(X, fibres[i]), B).count};
    });
    return out;
}

CountRecord count_surface(const CubicSurfaceNF& X, double B, CountMethod method, double x_cutoff,
                          const CountOptions& opts)
{
    if (!(x_cutoff >= 1))
        throw Error(ErrorKind::InvalidArgument, "fibre cutoff must be at least 1");
    if (method == CountMethod::Direct && B > 200 && !opts.allow_large_direct)
        throw Error(ErrorKind::InvalidArgument, "direct counts are limited to B <= 200 without override");

    std::string key = fmt::format("count_surface|{}|B={}|method={}|cutoff={}|lines={}", X.digest(), fmt_double(B),
                                  to_string(method), fmt_double(x_cutoff), opts.exclude_line_points ? 1 : 0);
    if (opts.cache)
        if (auto hit = opts.cache->get(key))
            return CountRecord::from_text(*hit);

    auto start = std::chrono::steady_clock::now();
    CountRecord rec;
    rec.surface_id = X.digest();
    rec.B = B;
    rec.method = method;
    rec.x_cutoff = x_cutoff;

    std::vector<RationalLine> lines;
    if (opts.exclude_line_points)
        lines = find_rational_lines(X);

    i64 n = i64(std::floor(x_cutoff));
    if (method == CountMethod::Fibration) {
        for (i64 s = 0; s <= n; ++s)
            for (i64 t = -n; t <= n; ++t)
                if ((s > 0 || t == 1) && gcd_u64(u64(s), abs_u64(t)) == 1 && X.delta()(s, t) == 0)
                    ++rec.excluded_singular_fibres;
        auto fibres = domain_B(X, x_cutoff);
        std::vector<u64> counts(fibres.size(), 0), dropped(fibres.size(), 0);
        parallel_for(fibres.size(), opts.threads, [&](size_t i) {
            FibreConic C = fibre_conic(X, fibres[i]);
            if (lines.empty()) {
                counts[i] = count_points(C, B).count;
                return;
            }
            count_points(C, B, [&](const HeightedPoint& hp) {
                ProjPoint3 P = phi_map(fibres[i], hp.point);
                for (const auto& L : lines)
                    if (L.contains(P)) {
                        ++dropped[i];
                        return;
                    }
                ++counts[i];
            });
        });
        for (size_t i = 0; i < fibres.size(); ++i) {
            rec.count += counts[i];
            rec.excluded_line_points += dropped[i];
        }
    } else {
        BruteForceOptions bo;
        bo.fibre_height_cap = n;
        if (!lines.empty())
            bo.exclude_lines = &lines;
        auto res = brute_force_surface_count(X, i64(std::floor(B)), bo);
        rec.count = res.count;
        rec.excluded_singular_fibres = res.singular_fibre;
        rec.excluded_line_points = res.on_lines;
    }
    rec.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    if (opts.cache)
        opts.cache->put(key, rec.to_text());
    return rec;
}

SumConstants sum_constants(const CubicSurfaceNF& X, double x, long double rel_tol, bool strict, unsigned threads)
{
    auto fibres = domain_B(X, x);
    std::vector<Bracket> parts(fibres.size());
    std::vector<char> failed(fibres.size(), 0);
    parallel_for(fibres.size(), threads, [&](size_t i) {
        try {
            parts[i] = peyre_constant(fibre_conic(X, fibres[i]), rel_tol).peyre_constant;
        } catch (const Error& e) {
            if (strict || e.kind() != ErrorKind::ToleranceNotMet)
                throw;
            failed[i] = 1;
        }
    });
    SumConstants out;
    out.fibres = fibres.size();
    CompensatedSum lo, hi;
    for (size_t i = 0; i < fibres.size(); ++i) {
        if (failed[i]) {
            out.failed.push_back(fibres[i]);
            continue;
        }
        lo.add(parts[i].lo);
        hi.add(parts[i].hi);
    }
    out.total = {lo.value(), hi.value()};
    return out;
}

std::vector<GrowthRow> growth_table(const CubicSurfaceNF& X, const std::vector<double>& Bs, double delta,
                                    const CountOptions& opts)
{
    if (!std::is_sorted(Bs.begin(), Bs.end()))
        throw Error(ErrorKind::InvalidArgument, "heights must be increasing");
    if (!(delta > 0))
        throw Error(ErrorKind::InvalidArgument, "delta must be positive");
    std::vector<GrowthRow> rows;
    for (double B : Bs) {
        double cutoff = std::max(1.0, std::pow(B, delta));
        CountRecord rec = count_surface(X, B, CountMethod::Fibration, cutoff, opts);
        long double L = std::log((long double)B);
        long double norm = (long double)rec.count / ((long double)B * std::pow(L, X.picard_rank() - 1));
        rows.push_back({B, cutoff, rec.count, X.picard_rank(), norm});
    }
    return rows;
}

std::string growth_csv(const std::vector<GrowthRow>& rows)
{
    std::string out = "B,x_cutoff,N,rho,normalized\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{:.10g}\n", fmt_double(r.B), fmt_double(r.x_cutoff), r.N, r.rho,
                           (double)r.normalized);
    return out;
}

std::string analyze(const CubicSurfaceNF& X)
{
    const auto& fac = X.delta_factorization();
    std::string factors;
    for (const auto& [g, m] : fac.factors) {
        if (!factors.empty())
            factors += " * ";
        factors += "(" + g.to_string() + ")";
        if (m > 1)
            factors += fmt::format("^{}", m);
    }
    DeltaFactorData dfd = delta_factor_data(X);
    std::string roots;
    for (auto [s, t] : rational_roots(fac))
        roots += fmt::format("{}({}:{})", roots.empty() ? "" : " ", s, t);
    std::string flagged;
    for (u64 p : dfd.flagged_primes)
        flagged += fmt::format("{}{}", flagged.empty() ? "" : " ", p);

    std::string out;
    out += "surface: " + X.to_json() + "\n";
    out += "surface_id: " + X.digest() + "\n";
    out += "a: " + X.a().to_string() + "\n";
    out += "d: " + X.d().to_string() + "\n";
    out += "f: " + X.f().to_string() + "\n";
    out += "b: " + X.b().to_string() + "\n";
    out += "e: " + X.e().to_string() + "\n";
    out += "delta: " + X.delta().to_string() + "\n";
    out += "delta_content: " + fac.content.get_str() + "\n";
    out += "delta_factors: " + factors + "\n";
    out += fmt::format("r: {}\n", X.r());
    out += fmt::format("rho: {}\n", X.picard_rank());
    out += "W0: " + X.W0().get_str() + "\n";
    out += "W_F: " + dfd.W_F.get_str() + "\n";
    out += "W_F_flagged_primes: " + (flagged.empty() ? std::string("none") : flagged) + "\n";
    out += "singular_fibres: " + (roots.empty() ? std::string("none") : roots) + "\n";
    return out;
}

} // namespace cb
