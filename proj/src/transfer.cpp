#include "gpca/transfer.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace gpca {

SourceWindow source_window(long anchor, int length) {
    if (length <= 0) throw std::invalid_argument("window of an empty word");
    auto e = [](long n) { return parity_of(n) == 0 ? n : n + 1; };
    const long last = anchor + length - 1;
    const long start = e(anchor);
    const int span = static_cast<int>(e(last) + 2 - start);
    const bool odd_anchor = parity_of(anchor) == 1, even_len = length % 2 == 0;
    const int variant = odd_anchor ? (even_len ? 1 : 2) : (even_len ? 3 : 4);
    return {start, span, variant};
}

bool SymmetryReport::all() const {
    return std::all_of(property.begin(), property.end(), [](const auto& p) { return p.holds; });
}

namespace {

void record(PropertyResult& res, bool ok, const std::function<std::string()>& describe) {
    ++res.checked;
    if (!ok && res.holds) {
        res.holds = false;
        res.counterexample = describe();
    }
}

}  // namespace

SymmetryReport check_symmetry(const WordFunction& f, int max_k) {
    if (max_k < 2) throw std::invalid_argument("max_k must be at least 2");
    SymmetryReport rep;
    for (int k = 1; k <= max_k; ++k) {
        for_each_word(k, [&](const Word& w) {
            for (long i : {0L, 1L}) {
                const Rational a = f(w, i);
                const std::string ws = word_string(w);
                auto label = [&](const std::string& lhs, const std::string& rhs, const Rational& x,
                                 const Rational& y) {
                    return lhs + " = " + x.str() + " but " + rhs + " = " + y.str();
                };
                {
                    Rational shifted(0);
                    for_each_word(2, [&](const Word& xy) {
                        Word ext = xy;
                        ext.insert(ext.end(), w.begin(), w.end());
                        shifted += f(ext, i);
                    });
                    const Rational b = f(w, i + 2);
                    record(rep.property[0], shifted == b, [&] {
                        return label("(" + ws + ")_" + std::to_string(i + 2), "sum over (xy" + ws + ")_" +
                                     std::to_string(i), b, shifted);
                    });
                }
                Word rev(w.rbegin(), w.rend());
                if (k % 2 == 0) {
                    const Rational b = f(rev, i);
                    record(rep.property[1], a == b, [&] {
                        return label("(" + ws + ")_" + std::to_string(i), "(" + word_string(rev) + ")_" +
                                     std::to_string(i), a, b);
                    });
                } else {
                    const Rational b = f(rev, i + 1);
                    record(rep.property[2], a == b, [&] {
                        return label("(" + ws + ")_" + std::to_string(i), "(" + word_string(rev) + ")_" +
                                     std::to_string(i + 1), a, b);
                    });
                }
                for (int j = 1; j < k; ++j) {
                    if ((i + j) % 2 != 0) continue;
                    Word sw = w;
                    std::swap(sw[j - 1], sw[j]);
                    const Rational b = f(sw, i);
                    record(rep.property[3], a == b, [&] {
                        return label("(" + ws + ")_" + std::to_string(i), "(" + word_string(sw) + ")_" +
                                     std::to_string(i), a, b);
                    });
                }
            }
        });
    }
    return rep;
}

SymmetryReport check_symmetry_properties(const ExactMeasure& mu, int max_k) {
    return check_symmetry([&](const Word& w, long i) { return cylinder_probability(mu, w, i); }, max_k);
}

SymmetryReport symmetry_preservation_check(const ExactMeasure& mu, const Params& params, int max_k) {
    return check_symmetry([&](const Word& w, long i) { return pushforward_word(mu, w, i, params); }, max_k);
}

std::optional<RowVec<Rational>> stationary_vector(const Mat<Rational>& P) {
    const auto n = P.rows();
    Mat<Rational> A(n + 1, n);
    A.topRows(n) = P.transpose() - Mat<Rational>::Identity(n, n);
    A.row(n).setOnes();
    ColVec<Rational> b = ColVec<Rational>::Zero(n + 1);
    b(n) = 1;
    Eigen::FullPivLU<Mat<Rational>> lu(A);
    lu.setThreshold(Rational(0));
    if (lu.rank() != n) return std::nullopt;
    ColVec<Rational> x = lu.solve(b);
    if (!(A * x - b).isZero(0)) return std::nullopt;
    return RowVec<Rational>(x.transpose());
}

namespace {

class WeightDraw {
public:
    WeightDraw(std::uint64_t seed, std::uint64_t salt) : stream_(seed, KeyedStream::Tag::Measure), salt_(salt) {}
    int next(int bound) { return static_cast<int>(stream_.bits(salt_, counter_++) % bound); }

private:
    KeyedStream stream_;
    std::uint64_t salt_;
    std::uint64_t counter_ = 0;
};

Mat<Rational> random_stochastic(WeightDraw& draw, int rows, int cols) {
    Mat<Rational> m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        Rational sum = 0;
        for (int j = 0; j < cols; ++j) sum += m(i, j) = draw.next(5);
        if (sum == 0) sum = m(i, draw.next(cols)) = 1;
        m.row(i) /= sum;
    }
    return m;
}

}  // namespace

MarkovChainSpec<Rational> random_markov_spec(std::uint64_t seed) {
    WeightDraw draw(seed, 1);
    MarkovChainSpec<Rational> spec;
    spec.m0 = random_stochastic(draw, 3, 3);
    spec.m1 = random_stochastic(draw, 3, 3);
    auto pi = stationary_vector(spec.m0 * spec.m1);
    if (!pi) throw std::runtime_error("seed " + std::to_string(seed) + ": stationary vector is not unique");
    spec.pi = *pi;
    return spec;
}

ExactMeasure random_markov_measure(std::uint64_t seed) {
    for (std::uint64_t s = seed;; ++s) {
        try {
            return make_markov_measure(random_markov_spec(s));
        } catch (const std::runtime_error&) {
        }
    }
}

ExactMeasure random_block_measure(std::uint64_t seed, int hidden_states) {
    if (hidden_states < 1) throw std::invalid_argument("need at least one hidden state");
    WeightDraw draw(seed, 2);
    const int H = hidden_states;
    Mat<Rational> S(H, H);
    for (int i = 0; i < H; ++i)
        for (int j = 0; j <= i; ++j) S(i, j) = S(j, i) = 1 + draw.next(4);
    ColVec<Rational> deg = S.rowwise().sum();
    const Rational total = deg.sum();
    Mat<Rational> K = deg.cwiseInverse().asDiagonal() * S;
    RowVec<Rational> sigma = deg.transpose() / total;

    std::vector<Mat<Rational>> joint(H);
    for (auto& J : joint) {
        J = Mat<Rational>(3, 3);
        Rational sum = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j <= i; ++j) {
                J(i, j) = J(j, i) = draw.next(4);
                sum += i == j ? J(i, j) : 2 * J(i, j);
            }
        if (sum == 0) sum = J(1, 1) = 1;
        J /= sum;
    }

    // Bond before an odd site: hidden state h. Before an even site: (h, odd symbol c).
    std::array<Mat<Rational>, 3> even, odd;
    for (int c = 0; c < 3; ++c) {
        odd[c] = Mat<Rational>::Zero(H, 3 * H);
        for (int h = 0; h < H; ++h)
            for (int g = 0; g < H; ++g) odd[c](h, 3 * g + c) = K(h, g);
    }
    for (int d = 0; d < 3; ++d) {
        even[d] = Mat<Rational>::Zero(3 * H, H);
        for (int h = 0; h < H; ++h)
            for (int c = 0; c < 3; ++c) even[d](3 * h + c, h) = joint[h](c, d);
    }
    RowVec<Rational> left(3 * H);
    ColVec<Rational> right(3 * H);
    for (int h = 0; h < H; ++h)
        for (int c = 0; c < 3; ++c) {
            left(3 * h + c) = sigma(h);
            right(3 * h + c) = joint[h].row(c).sum();
        }
    return ExactMeasure(left, even, odd, right);
}

MarkovChainSpec<Rational> parse_markov_spec(std::istream& in) {
    std::vector<std::vector<Rational>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<Rational> row;
        for (std::string tok; ls >> tok;) {
            try {
                row.push_back(parse_rational(tok));
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        if (row.empty()) continue;
        if (row.size() != 3)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 3 entries, got " +
                                        std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.size() != 7)
        throw std::invalid_argument("measure file needs 7 rows (pi, M0, M1), got " + std::to_string(rows.size()));
    MarkovChainSpec<Rational> spec{RowVec<Rational>(3), Mat<Rational>(3, 3), Mat<Rational>(3, 3)};
    for (int j = 0; j < 3; ++j) {
        spec.pi(j) = rows[0][j];
        for (int i = 0; i < 3; ++i) {
            spec.m0(i, j) = rows[1 + i][j];
            spec.m1(i, j) = rows[4 + i][j];
        }
    }
    validate(spec);
    return spec;
}

}  // namespace gpca
