#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include <unistd.h>

#include "conicbundle/error.hpp"
#include "conicbundle/harness.hpp"
#include "fixtures.hpp"

using namespace cb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / fmt_name()) { fs::remove_all(path); }
    ~TempDir() { fs::remove_all(path); }
    static std::string fmt_name() { return "conicbundle-test-" + std::to_string(::getpid()); }
};

u64 singular_upto(const CubicSurfaceNF& X, i64 n)
{
    u64 k = 0;
    for (i64 s = 0; s <= n; ++s)
        for (i64 t = -n; t <= n; ++t)
            if ((s > 0 || t == 1) && std::gcd(s, t) == 1 && X.delta()(s, t) == 0)
                ++k;
    return k;
}

} // namespace

TEST_CASE("count records round trip")
{
    CountRecord r;
    r.surface_id = "abc123";
    r.B = 1e6;
    r.method = CountMethod::Direct;
    r.x_cutoff = 31.62;
    r.count = 123456789;
    r.excluded_singular_fibres = 3;
    r.excluded_line_points = 7;
    r.runtime_ms = 42;
    CountRecord back = CountRecord::from_text(r.to_text());
    CHECK(back.same_result(r));
    CHECK(back.runtime_ms == 42);
    CHECK(back.to_text() == r.to_text());

    CountRecord other = back;
    other.runtime_ms = 1;
    CHECK(other.same_result(r));
    other.count += 1;
    CHECK_FALSE(other.same_result(r));

    CHECK_THROWS_AS(CountRecord::from_text("surface_id=x\nB=1\n"), Error);
    CHECK_THROWS_AS(CountRecord::from_text(std::string(r.to_text()).replace(0, 0, "count=zz\n")), Error);
    CHECK(parse_count_method("direct") == CountMethod::Direct);
    CHECK(to_string(CountMethod::Fibration) == "fibration");
    CHECK_THROWS_AS(parse_count_method("guess"), Error);
}

TEST_CASE("result cache")
{
    TempDir tmp;
    ResultCache cache(tmp.path);
    CHECK_FALSE(cache.get("k1").has_value());
    cache.put("k1", "value one\n");
    cache.put("k2", "value two\n");
    CHECK(cache.get("k1") == std::optional<std::string>("value one\n"));
    CHECK(cache.get("k2") == std::optional<std::string>("value two\n"));
    cache.put("k1", "replaced\n");
    CHECK(cache.get("k1") == std::optional<std::string>("replaced\n"));

    auto X = fixtures::s1();
    CountOptions opts;
    opts.cache = &cache;
    CountRecord first = count_surface(X, 500, CountMethod::Fibration, 6, opts);
    CountRecord hit = count_surface(X, 500, CountMethod::Fibration, 6, opts);
    CountRecord fresh = count_surface(X, 500, CountMethod::Fibration, 6);
    CHECK(hit.same_result(first));
    CHECK(hit.runtime_ms == first.runtime_ms);
    CHECK(fresh.same_result(first));
    // different parameters miss
    CHECK_FALSE(count_surface(X, 500, CountMethod::Fibration, 7, opts).same_result(first));
}

TEST_CASE("fibration count is the sum of fibre counts and matches direct enumeration")
{
    for (auto [X, B, cut] : {std::tuple{fixtures::s1(), 20.0, 20.0}, {fixtures::s1(), 30.0, 5.0},
                             {fixtures::split_fixture(), 15.0, 15.0}}) {
        CountRecord fib = count_surface(X, B, CountMethod::Fibration, cut);
        u64 sum = 0;
        for (auto [st, n] : fibre_counts(X, B, cut, 1))
            sum += n;
        CHECK(fib.count == sum);
        CountRecord dir = count_surface(X, B, CountMethod::Direct, cut);
        CHECK(dir.count == fib.count);
        CHECK(fib.excluded_singular_fibres == singular_upto(X, i64(cut)));
        CHECK(fib.surface_id == X.digest());
    }
    CHECK(count_surface(fixtures::split_fixture(), 50, CountMethod::Fibration, 3).excluded_singular_fibres == 4);
    CHECK(count_surface(fixtures::split_fixture(), 50, CountMethod::Fibration, 5).excluded_singular_fibres == 5);
}

TEST_CASE("count options")
{
    auto X = fixtures::s1();
    CHECK_THROWS_AS(count_surface(X, 201, CountMethod::Direct, 2), Error);
    CHECK_THROWS_AS(count_surface(X, 100, CountMethod::Fibration, 0.5), Error);

    // thread count does not change results or their order
    auto one = fibre_counts(X, 2000, 8, 1);
    auto four = fibre_counts(X, 2000, 8, 4);
    CHECK(one == four);
    CHECK(count_surface(X, 2000, CountMethod::Fibration, 8, {false, false, 3, nullptr}).count ==
          count_surface(X, 2000, CountMethod::Fibration, 8, {false, false, 1, nullptr}).count);

    // strict mode moves points on lines out of the count
    for (auto [Y, B] : {std::pair{fixtures::s1(), 300.0}, {fixtures::split_fixture(), 300.0}}) {
        CountOptions strict;
        strict.exclude_line_points = true;
        CountRecord plain = count_surface(Y, B, CountMethod::Fibration, 6);
        CountRecord s = count_surface(Y, B, CountMethod::Fibration, 6, strict);
        CHECK(s.count + s.excluded_line_points == plain.count);
        CHECK(plain.excluded_line_points == 0);
    }
    CountOptions strict;
    strict.exclude_line_points = true;
    CountRecord fs_ = count_surface(X, 25, CountMethod::Fibration, 10, strict);
    CountRecord ds = count_surface(X, 25, CountMethod::Direct, 10, strict);
    CHECK(fs_.count == ds.count);
    CHECK(fs_.excluded_line_points == ds.excluded_line_points);
}

TEST_CASE("counts are monotone in B and in the cutoff")
{
    auto X = fixtures::split_fixture();
    u64 prev = 0;
    for (double cut : {1.0, 2.0, 3.0, 5.0, 8.0, 13.0}) {
        u64 n = count_surface(X, 1000, CountMethod::Fibration, cut).count;
        REQUIRE(n >= prev);
        prev = n;
    }
    prev = 0;
    for (double B : {10.0, 100.0, 1000.0, 10000.0}) {
        u64 n = count_surface(X, B, CountMethod::Fibration, 6).count;
        REQUIRE(n >= prev);
        prev = n;
    }
}

TEST_CASE("sums of Peyre constants")
{
    auto X = fixtures::s1();
    SumConstants s3 = sum_constants(X, 3, 1e-4L, true, 1);
    CHECK(s3.fibres == domain_B(X, 3).size());
    CHECK(s3.failed.empty());
    CHECK(s3.total.lo <= s3.total.hi);
    CompensatedSum lo, hi;
    for (auto st : domain_B(X, 3)) {
        Bracket c = peyre_constant(fibre_conic(X, st), 1e-4L).peyre_constant;
        lo.add(c.lo);
        hi.add(c.hi);
    }
    CHECK(double(s3.total.lo) == doctest::Approx(double(lo.value())).epsilon(1e-12));
    CHECK(double(s3.total.hi) == doctest::Approx(double(hi.value())).epsilon(1e-12));

    // grows with x, and the threaded sum is the same
    SumConstants s10 = sum_constants(X, 10, 1e-4L, false, 2);
    CHECK(s10.total.lo > s3.total.hi);
    CHECK(double(sum_constants(X, 10, 1e-4L, false, 1).total.lo) == doctest::Approx(double(s10.total.lo)).epsilon(1e-15));

    // the predicted count tracks the fibration count at large B
    const double B = 1e5;
    CountRecord rec = count_surface(X, B, CountMethod::Fibration, 3);
    CHECK(double(rec.count) / B == doctest::Approx(double(s3.total.mid())).epsilon(0.03));
}

TEST_CASE("growth table")
{
    auto X = fixtures::s1();
    auto rows = growth_table(X, {100, 1000, 10000});
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.rho == 3);
        CHECK(r.x_cutoff == doctest::Approx(std::pow(r.B, 0.25)));
        CHECK(r.N == count_surface(X, r.B, CountMethod::Fibration, r.x_cutoff).count);
        long double L = std::log((long double)r.B);
        CHECK(double(r.normalized) == doctest::Approx(double(r.N / (r.B * L * L))).epsilon(1e-12));
        CHECK(r.normalized > 0);
    }
    std::string csv = growth_csv(rows);
    CHECK(csv.rfind("B,x_cutoff,N,rho,normalized\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv == growth_csv(growth_table(X, {100, 1000, 10000})));
    CHECK(growth_table(X, {1000}, 0.5)[0].x_cutoff == doctest::Approx(std::sqrt(1000.0)));
    CHECK_THROWS_AS(growth_table(X, {1000, 100}), Error);
    CHECK_THROWS_AS(growth_table(X, {100}, 0), Error);
}

TEST_CASE("analyze reports")
{
    std::string a = analyze(fixtures::s1());
    CHECK(a == analyze(fixtures::s1()));
    CHECK(a.find("delta: s^5 - s^4*t + 2*s^3*t^2 - 2*s^2*t^3 - t^5\n") != std::string::npos);
    CHECK(a.find("r: 1\n") != std::string::npos);
    CHECK(a.find("rho: 3\n") != std::string::npos);
    CHECK(a.find("W_F: 1\n") != std::string::npos);
    CHECK(a.find("singular_fibres: none\n") != std::string::npos);
    CHECK(a.find("surface_id: " + fixtures::s1().digest() + "\n") != std::string::npos);

    std::string b = analyze(fixtures::split_fixture());
    CHECK(b.find("r: 5\n") != std::string::npos);
    CHECK(b.find("rho: 7\n") != std::string::npos);
    CHECK(b.find("W0: -14\n") != std::string::npos);
    CHECK(b.find("W_F: -28805414400\n") != std::string::npos);
    CHECK(b.find("W_F_flagged_primes: none\n") != std::string::npos);
    for (const char* root : {"(0:1)", "(1:0)", "(1:-1)", "(2:-3)", "(5:3)"})
        CHECK(b.find(root) != std::string::npos);
}
