#include "gpca/oracle.hpp"

#include <stdexcept>

namespace gpca {

namespace {

std::size_t pow3(std::size_t n) {
    std::size_t r = 1;
    while (n--) r *= 3;
    return r;
}

void decode(std::size_t index, std::vector<Symbol>& cells) {
    for (auto& c : cells) {
        c = static_cast<Symbol>(index % 3);
        index /= 3;
    }
}

}  // namespace

RingConfig RowDistribution::config(std::size_t index) const {
    std::vector<Symbol> cells(width);
    decode(index, cells);
    return RingConfig(std::move(cells));
}

Rational RowDistribution::question_density() const {
    Rational acc = 0;
    std::vector<Symbol> cells(width);
    for (std::size_t i = 0; i < prob.size(); ++i) {
        if (prob[i] == 0) continue;
        decode(i, cells);
        std::size_t q = 0;
        for (auto c : cells) q += c == Symbol::Question;
        acc += prob[i] * q;
    }
    return acc / width;
}

RingEvolution exact_ring_distribution_evolution(const Params& params, std::size_t width, std::size_t steps) {
    if (width == 0 || width % 2 != 0 || width > 8)
        throw std::invalid_argument("exact evolution needs an even width <= 8");
    if (steps > 64) throw std::invalid_argument("exact evolution is limited to 64 steps");
    const std::size_t N = width, states = pow3(N);

    // weight[a][b] = p^a q^b r^(N-a-b) for a traps and b targets
    std::vector<std::vector<Rational>> weight(N + 1, std::vector<Rational>(N + 1));
    for (std::size_t a = 0; a <= N; ++a)
        for (std::size_t b = 0; a + b <= N; ++b)
            weight[a][b] = power(params.p(), a) * power(params.q(), b) * power(params.r(), N - a - b);

    std::vector<SiteMark> allowed;
    if (params.p() != 0) allowed.push_back(SiteMark::Trap);
    if (params.q() != 0) allowed.push_back(SiteMark::Target);
    if (params.r() != 0) allowed.push_back(SiteMark::Open);

    RowDistribution law{N, std::vector<Rational>(states)};
    std::size_t all_q = 0;
    for (std::size_t n = 0, m = 1; n < N; ++n, m *= 3) all_q += m;
    law.prob[all_q] = 1;

    RingEvolution out;
    out.laws.push_back(law);
    out.question_density.push_back(law.question_density());

    const std::size_t cells_per_count = (N + 1) * (N + 1);
    std::vector<std::uint32_t> counts(states * cells_per_count);
    std::vector<std::size_t> touched;
    std::vector<Symbol> cells(N);
    std::vector<std::size_t> digit(N);

    for (std::size_t t = 0; t < steps; ++t) {
        RowDistribution next{N, std::vector<Rational>(states)};
        for (std::size_t c = 0; c < states; ++c) {
            if (law.prob[c] == 0) continue;
            decode(c, cells);
            std::fill(digit.begin(), digit.end(), 0);
            touched.clear();
            while (true) {
                std::size_t a = 0, b = 0, image = 0;
                for (std::size_t n = 0, m = 1; n < N; ++n, m *= 3) {
                    const SiteMark mark = allowed[digit[n]];
                    a += mark == SiteMark::Trap;
                    b += mark == SiteMark::Target;
                    const std::size_t e = n % 2 == 0 ? n : n + 1;
                    image += m * static_cast<std::size_t>(
                                     deterministic_site_update(cells[e % N], cells[(e + 1) % N], mark));
                }
                auto& slot = counts[image * cells_per_count + a * (N + 1) + b];
                if (slot++ == 0) touched.push_back(image * cells_per_count + a * (N + 1) + b);
                std::size_t n = 0;
                while (n < N && ++digit[n] == allowed.size()) digit[n++] = 0;
                if (n == N) break;
            }
            for (auto key : touched) {
                const std::size_t image = key / cells_per_count, rem = key % cells_per_count;
                next.prob[image] += law.prob[c] * counts[key] * weight[rem / (N + 1)][rem % (N + 1)];
                counts[key] = 0;
            }
        }
        law = std::move(next);
        out.question_density.push_back(law.question_density());
        out.laws.push_back(law);
    }
    return out;
}

Rational exhaustive_pushforward_check(const ExactMeasure& mu, const CylinderPattern& pattern, const Params& params) {
    const int k = pattern.span();
    if (k > 6) throw std::invalid_argument("exhaustive check is limited to span 6");
    const long i = pattern.anchor();
    // Site n reads (n, n+1) if n is even and (n+1, n+2) if n is odd.
    auto first = [](long n) { return ((n % 2) + 2) % 2 == 0 ? n : n + 1; };
    const long lo = first(i);
    const long hi = first(i + k - 1) + 1;
    const int len = static_cast<int>(hi - lo + 1);

    Rational total = 0;
    for (const Word& target : pattern.expansions()) {
        for_each_word(len, [&](const Word& source) {
            Rational w = 1;
            for (int t = 0; t < k && w != 0; ++t) {
                const long s = first(i + t) - lo;
                w *= local_rule_distribution(source[s], source[s + 1], params)[target[t]];
            }
            if (w != 0) total += w * cylinder_probability(mu, source, lo);
        });
    }
    return total;
}

Rational exact_draw_probability_small(const Params& params, std::size_t width, std::size_t height) {
    if (width > 6 || height > 12) throw std::invalid_argument("exact draw probability needs width <= 6, height <= 12");
    return exact_ring_distribution_evolution(params, width, height).question_density.back();
}

}  // namespace gpca
