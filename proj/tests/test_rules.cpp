#include "support.hpp"

#include <cmath>

using namespace gpca;
using namespace testing;

TEST_CASE("rational parsing is exact") {
    CHECK(parse_rational("1/4") == Q(1, 4));
    CHECK(parse_rational("0.25") == Q(1, 4));
    CHECK(parse_rational("007/010") == Q(7, 10));
    CHECK(parse_rational("0.0800") == Q(2, 25));
    CHECK(parse_rational(".5") == Q(1, 2));
    CHECK(parse_rational("-0") == 0);
    CHECK(parse_rational("-3/6") == Q(-1, 2));
    CHECK(parse_rational("1e-6") == Q(1, 1000000));
    CHECK(parse_rational("2929/10000") == Q(2929, 10000));
    CHECK_THROWS_AS(parse_rational("nan"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("0x1p-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK(to_decimal(Q(1, 3), 4) == "0.3333");
}

TEST_CASE("params invariants") {
    CHECK(P(1, 4, 1, 4).r() == Q(1, 2));
    CHECK(P(1, 2, 1, 2).r() == 0);
    CHECK_THROWS(Params(0, 0));
    CHECK_THROWS(Params(Q(3, 4), Q(1, 2)));
    CHECK_THROWS(Params(Q(-1, 4), Q(1, 2)));
}

TEST_CASE("local rule examples") {
    auto d = local_rule_distribution(Z, Z, P(1, 3, 1, 3));
    CHECK(d[Z] == Q(1, 3));
    CHECK(d[O] == Q(2, 3));
    CHECK(d[X] == 0);

    d = local_rule_distribution(X, Z, P(1, 4, 1, 4));
    CHECK(d[Z] == Q(1, 4));
    CHECK(d[O] == Q(1, 4));
    CHECK(d[X] == Q(1, 2));

    for (auto pr : {P(1, 4, 1, 4), P(1, 10, 3, 5), P(0, 1, 1, 1)}) {
        d = local_rule_distribution(O, X, pr);
        CHECK(d[Z] == 1 - pr.q());
        CHECK(d[O] == pr.q());
        CHECK(d[X] == 0);
    }
    CHECK_THROWS_AS(local_rule_distribution(X, Z, P(1, 4, 1, 4), RuleSet::Base), std::invalid_argument);
}

TEST_CASE("every rule distribution sums to one") {
    for (auto pr : {P(1, 4, 1, 4), P(1, 3, 0, 1), P(0, 1, 1, 2), P(2, 7, 5, 7), P(1, 1, 0, 1)})
        for (auto a : kSymbols)
            for (auto b : kSymbols) CHECK(local_rule_distribution(a, b, pr).total() == 1);
}

TEST_CASE("site update examples and marginal agreement") {
    CHECK(deterministic_site_update(Z, Z, SiteMark::Open) == O);
    CHECK(deterministic_site_update(X, Z, SiteMark::Open) == X);
    CHECK(deterministic_site_update(O, X, SiteMark::Trap) == Z);
    CHECK(deterministic_site_update(O, X, SiteMark::Target) == O);

    const auto pr = P(2, 9, 1, 3);
    for (auto a : kSymbols)
        for (auto b : kSymbols) {
            SymbolDistribution m;
            m[deterministic_site_update(a, b, SiteMark::Trap)] += pr.p();
            m[deterministic_site_update(a, b, SiteMark::Target)] += pr.q();
            m[deterministic_site_update(a, b, SiteMark::Open)] += pr.r();
            CHECK(m == local_rule_distribution(a, b, pr));
        }
}

TEST_CASE("row update examples") {
    std::vector<SiteMark> open(4, SiteMark::Open);
    CHECK(deterministic_row_update(RingConfig(4, X), open) == RingConfig(4, X));
    CHECK(deterministic_row_update(RingConfig(4, Z), open) == RingConfig(4, O));
    CHECK(deterministic_row_update(RingConfig::parse("00?1"), open) == RingConfig::parse("1001"));
    std::vector<SiteMark> short_row(3, SiteMark::Open);
    CHECK_THROWS_AS(deterministic_row_update(RingConfig(4, X), short_row), std::invalid_argument);
    CHECK_THROWS(RingConfig::parse("0?1"));
}

namespace {

RingConfig random_config(std::size_t L, const KeyedStream& s, std::uint64_t t, bool with_question) {
    std::vector<Symbol> cells(L);
    for (std::size_t i = 0; i < L; ++i) {
        auto u = s.bits(t, i) % (with_question ? 3 : 2);
        cells[i] = with_question ? static_cast<Symbol>(u) : (u ? O : Z);
    }
    return RingConfig(cells);
}

}  // namespace

TEST_CASE("row update order properties") {
    const auto pr = P(1, 5, 1, 5);
    const MarkSampler sampler(pr);
    KeyedStream s(7, KeyedStream::Tag::Sampling);
    const std::size_t L = 12;
    for (std::uint64_t t = 0; t < 500; ++t) {
        auto marks = sample_mark_row(sampler, s, t, L);
        auto a = random_config(L, s, 1000 + t, true);
        auto b = random_config(L, s, 5000 + t, true);
        // meet/join under the linear order
        std::vector<Symbol> lo(L), hi(L), flat(L);
        for (std::size_t i = 0; i < L; ++i) {
            lo[i] = std::min(a[i], b[i]);
            hi[i] = std::max(a[i], b[i]);
            flat[i] = a[i] == b[i] ? a[i] : X;
        }
        auto ylo = deterministic_row_update(RingConfig(lo), marks), yhi = deterministic_row_update(RingConfig(hi), marks);
        auto ya = deterministic_row_update(a, marks), yflat = deterministic_row_update(RingConfig(flat), marks);
        for (std::size_t i = 0; i < L; ++i) {
            CHECK(linear_leq(yhi[i], ylo[i]));
            CHECK(flat_leq(ya[i], yflat[i]));
        }
        auto bin = deterministic_row_update(random_config(L, s, 9000 + t, false), marks);
        CHECK(bin.count(X) == 0);
        // outputs 2n-1 and 2n see only the input pair (2n, 2n+1)
        for (std::size_t n = 1; n < L / 2; ++n) {
            std::vector<Symbol> c = b.cells();
            c[2 * n] = a[2 * n];
            c[2 * n + 1] = a[2 * n + 1];
            auto yc = deterministic_row_update(RingConfig(c), marks);
            CHECK(yc[2 * n - 1] == ya[2 * n - 1]);
            CHECK(yc[2 * n] == ya[2 * n]);
        }
    }
}

TEST_CASE("stochastic step examples") {
    KeyedStream s(3);
    auto any = RingConfig::parse("0?1?10");
    CHECK(stochastic_step(any, P(1, 1, 0, 1), s, 0) == RingConfig(6, Z));
    CHECK(stochastic_step(RingConfig(6, O), P(0, 1, 1, 1), s, 0) == RingConfig(6, O));
    // all-? start: the ? fraction after one step averages r
    double total = 0;
    const int runs = 200;
    const std::size_t L = 256;
    for (int k = 0; k < runs; ++k) {
        auto y = stochastic_step(RingConfig(L, X), P(1, 4, 1, 4), KeyedStream(k), 0);
        total += static_cast<double>(y.count(X)) / L;
    }
    const double se = std::sqrt(0.25 / (L * runs));
    CHECK(std::abs(total / runs - 0.5) < 4 * se);
}

TEST_CASE("mark sampler frequencies") {
    const auto pr = P(1, 4, 1, 4);
    const MarkSampler sampler(pr);
    KeyedStream s(11, KeyedStream::Tag::Sampling);
    const int n = 1000000;
    std::array<int, 3> count{};
    for (int i = 0; i < n; ++i) ++count[static_cast<int>(sampler(s.bits(0, i)))];
    const double expect[] = {0.25, 0.25, 0.5};
    for (int k = 0; k < 3; ++k) {
        const double f = static_cast<double>(count[k]) / n;
        CHECK(std::abs(f - expect[k]) < 4 * std::sqrt(expect[k] * (1 - expect[k]) / n));
    }
    const MarkSampler all_trap(P(1, 1, 0, 1));
    CHECK(all_trap(~0ull) == SiteMark::Trap);
    const MarkSampler all_target(P(0, 1, 1, 1));
    CHECK(all_target(0) == SiteMark::Target);
    CHECK(all_target(~0ull) == SiteMark::Target);
}

TEST_CASE("keyed stream is a pure function of its key") {
    KeyedStream a(5), b(5), c(6);
    CHECK(a.bits(3, 17) == b.bits(3, 17));
    CHECK(a.bits(3, 17) != c.bits(3, 17));
    CHECK(a.bits(3, 17) != a.bits(17, 3));
    CHECK(KeyedStream(5, KeyedStream::Tag::Game).bits(3, 17) != a.bits(3, 17));
}
