#include "support.hpp"

#include "gpca/oracle.hpp"
#include "gpca/transfer.hpp"

#include <sstream>

using namespace gpca;
using namespace testing;

namespace {

MarkovChainSpec<Rational> spec_from_seed(std::uint64_t seed) {
    for (;; ++seed) try {
            return random_markov_spec(seed);
        } catch (const std::runtime_error&) {
        }
}

Rational total_over_words(const ExactMeasure& mu, int k, long anchor, const Params* pr) {
    Rational sum = 0;
    for_each_word(k, [&](const Word& w) {
        sum += pr ? pushforward_word(mu, w, anchor, *pr) : cylinder_probability(mu, w, anchor);
    });
    return sum;
}

}  // namespace

TEST_CASE("pattern syntax") {
    CylinderPattern p("00[**][1*]", 1);
    CHECK(p.span() == 6);
    CHECK(p.str() == "(00[**][1*])_1");
    CHECK(p.expansions().size() == 15);
    CHECK(CylinderPattern("?1", 0).is_word());
    CHECK_THROWS(CylinderPattern("0[*", 0));
    CHECK_THROWS(CylinderPattern("2", 0));
    CHECK(parse_word("0?1") == Word{Z, X, O});
}

TEST_CASE("basic measures") {
    auto u = uniform_measure<Rational>();
    CHECK(cylinder_probability(u, parse_word("?0"), 1) == Q(1, 9));
    CHECK(pattern_probability(u, CylinderPattern("[**]", 0)) == Q(1, 3));
    CHECK(pattern_probability(u, CylinderPattern("[1*]", 0)) == Q(5, 9));
    CHECK(cylinder_probability(point_mass<Rational>(X), parse_word("??"), 1) == 1);
    CHECK(u.is_consistent());

    auto ud = uniform_measure<double>();
    CHECK(cylinder_probability(ud, parse_word("?0"), 1) == doctest::Approx(1.0 / 9));
}

TEST_CASE("random markov measure") {
    auto spec = spec_from_seed(42);
    CHECK(spec.pi * spec.m0 * spec.m1 == spec.pi);
    CHECK(spec.pi.sum() == 1);
    auto mu = make_markov_measure(spec);
    const Rational direct = spec.pi(0) * spec.m0(0, 1) * spec.m1(1, 2);
    CHECK(cylinder_probability(mu, parse_word("0?1"), 0) == direct);
    const Rational odd = (spec.pi * spec.m0)(1) * spec.m1(1, 0) * spec.m0(0, 2);
    CHECK(cylinder_probability(mu, parse_word("?01"), 1) == odd);

    auto rep = check_symmetry_properties(mu, 4);
    CHECK(rep.property[0].holds);
    CHECK_FALSE(rep.all());
    CHECK_FALSE(rep.property[3].counterexample.empty());
}

TEST_CASE("partition of pairs") {
    for (std::uint64_t seed : {1, 2, 3}) {
        auto mu = random_markov_measure(seed);
        for (long i : {0, 1})
            CHECK(pattern_probability(mu, CylinderPattern("[**]", i)) + cylinder_probability(mu, parse_word("00"), i) +
                      pattern_probability(mu, CylinderPattern("[1*]", i)) ==
                  1);
    }
}

TEST_CASE("measure spec files") {
    std::istringstream in(
        "# uniform\n1/3 1/3 1/3\n1/3 1/3 1/3\n1/3 1/3 1/3\n1/3 1/3 1/3\n"
        "0.5 0.25 0.25\n1/3 1/3 1/3\n1/3 1/3 1/3\n");
    CHECK_THROWS(make_markov_measure(parse_markov_spec(in)));  // pi M0 M1 != pi
    std::istringstream ok(
        "1/3 1/3 1/3\n1/3 1/3 1/3\n1/3 1/3 1/3\n1/3 1/3 1/3\n1/3 1/3 1/3\n1/3 1/3 1/3\n1/3 1/3 1/3 # last\n");
    auto mu = make_markov_measure(parse_markov_spec(ok));
    CHECK(cylinder_probability(mu, parse_word("??"), 0) == Q(1, 9));
    std::istringstream bad("1/3 1/3\n");
    CHECK_THROWS_AS(parse_markov_spec(bad), std::invalid_argument);
}

TEST_CASE("symmetrization") {
    auto sym = symmetrize(random_markov_measure(42));
    CHECK(check_symmetry_properties(sym, 4).all());
    CHECK(check_symmetry_properties(symmetrize(point_mass<Rational>(X)), 4).all());
    auto u = uniform_measure<Rational>();
    auto su = symmetrize(u);
    for_each_word(3, [&](const Word& w) { CHECK(cylinder_probability(su, w, 1) == cylinder_probability(u, w, 1)); });
    for (std::uint64_t seed : {3, 8}) CHECK(check_symmetry_properties(random_block_measure(seed, 2), 5).all());
}

TEST_CASE("pushforward examples") {
    auto star = point_mass<Rational>(X);
    auto pr = P(1, 4, 1, 4);
    CHECK(pushforward_probability(star, CylinderPattern("?", 0), pr) == pr.r());
    CHECK(pushforward_probability(star, CylinderPattern("?", 1), pr) == pr.r());
    CHECK(pushforward_probability(star, CylinderPattern("??", 1), pr) == pr.r() * pr.r());

    for (std::uint64_t seed : {1, 5}) {
        auto mu = random_markov_measure(seed);
        CHECK(pushforward_probability(mu, CylinderPattern("??", 1), pr) ==
              pr.r() * pr.r() * pattern_probability(mu, CylinderPattern("[**]", 0)));
        auto q0 = P(1, 3, 0, 1);
        CHECK(pushforward_probability(mu, CylinderPattern("1?0", 0), q0) ==
              q0.p() * (1 - q0.p()) * (1 - q0.p()) * pattern_probability(mu, CylinderPattern("00[**]", 0)));
    }
}

TEST_CASE("source windows") {
    CHECK(source_window(1, 2).variant == 1);
    CHECK(source_window(1, 3).variant == 2);
    CHECK(source_window(0, 2).variant == 3);
    CHECK(source_window(0, 3).variant == 4);
    for (int k = 1; k <= 4; ++k) {
        auto w = source_window(0, 2 * k);
        CHECK(w.start == 0);
        CHECK(w.span == 2 * k + 2);
        CHECK(source_window(1, 2 * k).span == 2 * k);
    }
}

TEST_CASE("pushforward conserves mass and commutes with marginals") {
    const std::vector<Params> points{P(1, 4, 1, 4), P(1, 3, 0, 1), P(0, 1, 1, 2), P(1, 2, 1, 2)};
    for (std::uint64_t seed : {2, 7}) {
        auto mu = random_markov_measure(seed);
        for (const auto& pr : points)
            for (long i : {0, 1}) {
                CHECK(total_over_words(mu, 1, i, &pr) == 1);
                CHECK(total_over_words(mu, 3, i, &pr) == 1);
                for (int k = 1; k <= 3; ++k)
                    for_each_word(k, [&](const Word& w) {
                        const Rational v = pushforward_word(mu, w, i, pr);
                        Rational right = 0, left = 0;
                        for (auto b : kSymbols) {
                            Word wr = w, wl{b};
                            wr.push_back(b);
                            wl.insert(wl.end(), w.begin(), w.end());
                            right += pushforward_word(mu, wr, i, pr);
                            left += pushforward_word(mu, wl, i - 1, pr);
                        }
                        CHECK(right == v);
                        CHECK(left == v);
                    });
            }
    }
}

TEST_CASE("three routes to the image agree") {
    const auto pr = P(1, 5, 3, 10);
    for (std::uint64_t seed : {1, 4}) {
        auto mu = seed == 1 ? random_markov_measure(seed) : random_block_measure(seed, 1);
        auto img = push_forward(mu, pr);
        CHECK(img.is_consistent());
        for (int k = 1; k <= 3; ++k)
            for_each_word(k, [&](const Word& w) {
                for (long i : {0, 1}) {
                    auto pat = CylinderPattern::of_word(w, i);
                    const Rational a = pushforward_word(mu, w, i, pr);
                    CHECK(a == cylinder_probability(img, w, i));
                    CHECK(a == exhaustive_pushforward_check(mu, pat, pr));
                }
            });
    }
}

TEST_CASE("symmetry is preserved by the envelope step") {
    CHECK(symmetry_preservation_check(uniform_measure<Rational>(), P(1, 4, 1, 4), 3).all());
    CHECK(symmetry_preservation_check(point_mass<Rational>(X), P(2, 5, 1, 5), 3).all());
    CHECK(symmetry_preservation_check(symmetrize(random_markov_measure(42)), P(1, 3, 0, 1), 3).all());
    CHECK(symmetry_preservation_check(random_block_measure(6, 2), P(1, 10, 1, 2), 4).all());
}
