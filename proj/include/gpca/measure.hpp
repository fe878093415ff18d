#pragma once

#include "gpca/pattern.hpp"
#include "gpca/rational.hpp"
#include "gpca/rules.hpp"

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gpca {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
template <class Scalar>
using ColVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
Scalar scalar_from(const Rational& x) {
    if constexpr (std::is_same_v<Scalar, Rational>) return x;
    else return x.convert_to<Scalar>();
}

inline int parity_of(long n) { return static_cast<int>(((n % 2) + 2) % 2); }

// Shift-2 invariant measure on {0,?,1}^Z written as a matrix product:
//   mu(b_1..b_k)_i = left(i) * A_{par(i)}[b_1] * A_{par(i+1)}[b_2] ... * right(i+k)
// A_even[b] maps the bond before an even site to the bond before the next odd site.
template <class Scalar>
class CylinderMeasure {
public:
    using Matrix = Mat<Scalar>;
    using Row = RowVec<Scalar>;
    using Col = ColVec<Scalar>;

    CylinderMeasure(Row left_even, std::array<Matrix, 3> even, std::array<Matrix, 3> odd, Col right_even)
        : left_{std::move(left_even), Row()}, site_{std::move(even), std::move(odd)},
          right_{std::move(right_even), Col()} {
        const auto de = left_[0].size(), dof = site_[0][0].cols();
        for (int b = 0; b < 3; ++b) {
            if (site_[0][b].rows() != de || site_[0][b].cols() != dof || site_[1][b].rows() != dof ||
                site_[1][b].cols() != de)
                throw std::invalid_argument("inconsistent bond dimensions");
        }
        if (right_[0].size() != de) throw std::invalid_argument("inconsistent bond dimensions");
        for (int par = 0; par < 2; ++par) transfer_[par] = site_[par][0] + site_[par][1] + site_[par][2];
        left_[1] = left_[0] * transfer_[0];
        right_[1] = transfer_[1] * right_[0];
        for (int par = 0; par < 2; ++par) {
            const auto& a = site_[par];
            const auto& b = site_[1 - par];
            Matrix zz = a[0] * b[0];
            Matrix low = (a[0] + a[1]) * (b[0] + b[1]);
            pair_[par][0] = zz;
            pair_[par][1] = low - zz;
            pair_[par][2] = transfer_[par] * transfer_[1 - par] - low;
        }
    }

    const Row& left(int parity) const { return left_[parity]; }
    const Col& right(int parity) const { return right_[parity]; }
    const Matrix& site(int parity, Symbol b) const { return site_[parity][static_cast<int>(b)]; }
    const Matrix& transfer(int parity) const { return transfer_[parity]; }
    // Sum of A(x)A(y) over the members (x,y) of a class, the pair starting at `parity`.
    const Matrix& pair_class(int parity, PairClass c) const { return pair_[parity][static_cast<int>(c)]; }

    Eigen::Index bond(int parity) const { return left_[parity].size(); }

    // Normalization and shift-2 stationarity; exact for rational scalars.
    bool is_consistent() const {
        if (left_[0].dot(right_[0]) != Scalar(1)) return false;
        Matrix cycle = transfer_[0] * transfer_[1];
        return (left_[0] * cycle - left_[0]).isZero(0) && (cycle * right_[0] - right_[0]).isZero(0);
    }

private:
    std::array<Row, 2> left_;
    std::array<std::array<Matrix, 3>, 2> site_;
    std::array<Col, 2> right_;
    std::array<Matrix, 2> transfer_;
    std::array<std::array<Matrix, 3>, 2> pair_;
};

using ExactMeasure = CylinderMeasure<Rational>;

template <class Scalar>
Scalar cylinder_probability(const CylinderMeasure<Scalar>& mu, const Word& word, long anchor) {
    int par = parity_of(anchor);
    RowVec<Scalar> v = mu.left(par);
    for (auto b : word) {
        v = v * mu.site(par, b);
        par ^= 1;
    }
    return v.dot(mu.right(par));
}

template <class Scalar>
Scalar pattern_probability(const CylinderMeasure<Scalar>& mu, const CylinderPattern& pattern) {
    int par = pattern.parity();
    RowVec<Scalar> v = mu.left(par);
    for (const auto& a : pattern.atoms()) {
        switch (a.kind) {
            case AtomKind::Letter: v = v * mu.site(par, a.letter); break;
            case AtomKind::StarStar: v = v * mu.pair_class(par, PairClass::StarStar); break;
            case AtomKind::OneStar: v = v * mu.pair_class(par, PairClass::OneStar); break;
        }
        par ^= a.width() & 1;
    }
    return v.dot(mu.right(par));
}

// Two-step Markov data: pi at even sites, M0 from even to odd, M1 from odd to even.
template <class Scalar>
struct MarkovChainSpec {
    RowVec<Scalar> pi;
    Mat<Scalar> m0, m1;
};

template <class Scalar>
void validate(const MarkovChainSpec<Scalar>& spec) {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid Markov data: " + what); };
    if (spec.pi.size() != 3 || spec.m0.rows() != 3 || spec.m0.cols() != 3 || spec.m1.rows() != 3 ||
        spec.m1.cols() != 3)
        fail("need a 3-vector and two 3x3 matrices");
    for (int i = 0; i < 3; ++i) {
        if (spec.pi(i) < 0) fail("negative start probability");
        for (int j = 0; j < 3; ++j)
            if (spec.m0(i, j) < 0 || spec.m1(i, j) < 0) fail("negative transition probability");
        if (spec.m0.row(i).sum() != Scalar(1) || spec.m1.row(i).sum() != Scalar(1)) fail("row does not sum to 1");
    }
    if (spec.pi.sum() != Scalar(1)) fail("start vector does not sum to 1");
    if (!(spec.pi * spec.m0 * spec.m1 - spec.pi).isZero(0)) fail("pi M0 M1 != pi");
}

// Bond = previous symbol.
template <class Scalar>
CylinderMeasure<Scalar> make_markov_measure(const MarkovChainSpec<Scalar>& spec) {
    validate(spec);
    std::array<Mat<Scalar>, 3> even, odd;
    for (int b = 0; b < 3; ++b) {
        even[b] = Mat<Scalar>::Zero(3, 3);
        odd[b] = Mat<Scalar>::Zero(3, 3);
        even[b].col(b) = spec.m1.col(b);
        odd[b].col(b) = spec.m0.col(b);
    }
    RowVec<Scalar> left = spec.pi * spec.m0;
    return CylinderMeasure<Scalar>(left, even, odd, ColVec<Scalar>::Ones(3));
}

template <class Scalar>
MarkovChainSpec<Scalar> iid_spec(const RowVec<Scalar>& marginal) {
    MarkovChainSpec<Scalar> s{marginal, Mat<Scalar>(3, 3), Mat<Scalar>(3, 3)};
    for (int i = 0; i < 3; ++i) s.m0.row(i) = s.m1.row(i) = marginal;
    return s;
}

template <class Scalar>
CylinderMeasure<Scalar> uniform_measure() {
    return make_markov_measure(iid_spec<Scalar>(RowVec<Scalar>::Constant(3, Scalar(1) / Scalar(3))));
}

template <class Scalar>
CylinderMeasure<Scalar> point_mass(Symbol s) {
    RowVec<Scalar> e = RowVec<Scalar>::Zero(3);
    e(static_cast<int>(s)) = 1;
    return make_markov_measure(iid_spec<Scalar>(e));
}

// Image under n -> 1-n.
template <class Scalar>
CylinderMeasure<Scalar> reflect(const CylinderMeasure<Scalar>& mu) {
    std::array<Mat<Scalar>, 3> even, odd;
    for (auto b : kSymbols) {
        even[static_cast<int>(b)] = mu.site(1, b).transpose();
        odd[static_cast<int>(b)] = mu.site(0, b).transpose();
    }
    return CylinderMeasure<Scalar>(mu.right(0).transpose(), even, odd, mu.left(0).transpose());
}

// Convex combination as a block-diagonal direct sum.
template <class Scalar>
CylinderMeasure<Scalar> mix(const std::vector<std::pair<Scalar, CylinderMeasure<Scalar>>>& parts) {
    if (parts.empty()) throw std::invalid_argument("empty mixture");
    Scalar total(0);
    Eigen::Index de = 0, dof = 0;
    for (const auto& [w, m] : parts) {
        if (w < 0) throw std::invalid_argument("negative mixture weight");
        total += w;
        de += m.bond(0);
        dof += m.bond(1);
    }
    if (total != Scalar(1)) throw std::invalid_argument("mixture weights must sum to 1");
    RowVec<Scalar> left = RowVec<Scalar>::Zero(de);
    ColVec<Scalar> right = ColVec<Scalar>::Zero(de);
    std::array<Mat<Scalar>, 3> even, odd;
    for (int b = 0; b < 3; ++b) {
        even[b] = Mat<Scalar>::Zero(de, dof);
        odd[b] = Mat<Scalar>::Zero(dof, de);
    }
    Eigen::Index ie = 0, io = 0;
    for (const auto& [w, m] : parts) {
        const auto ne = m.bond(0), no = m.bond(1);
        left.segment(ie, ne) = w * m.left(0);
        right.segment(ie, ne) = m.right(0);
        for (auto b : kSymbols) {
            even[static_cast<int>(b)].block(ie, io, ne, no) = m.site(0, b);
            odd[static_cast<int>(b)].block(io, ie, no, ne) = m.site(1, b);
        }
        ie += ne;
        io += no;
    }
    return CylinderMeasure<Scalar>(left, even, odd, right);
}

// Each block (2n-1, 2n) is independently transposed with probability 1/2.
// The bond before an even site carries (bond before the block, symbol at its odd site).
template <class Scalar>
CylinderMeasure<Scalar> swap_blocks(const CylinderMeasure<Scalar>& mu) {
    const auto dof = mu.bond(1);
    const Scalar half = Scalar(1) / Scalar(2);
    std::array<Mat<Scalar>, 3> even, odd;
    for (int c = 0; c < 3; ++c) {
        odd[c] = Mat<Scalar>::Zero(dof, 3 * dof);
        odd[c].block(0, c * dof, dof, dof) = Mat<Scalar>::Identity(dof, dof);
    }
    for (int d = 0; d < 3; ++d) {
        even[d] = Mat<Scalar>(3 * dof, dof);
        for (int c = 0; c < 3; ++c) {
            auto sc = static_cast<Symbol>(c), sd = static_cast<Symbol>(d);
            even[d].block(c * dof, 0, dof, dof) =
                half * (mu.site(1, sc) * mu.site(0, sd) + mu.site(1, sd) * mu.site(0, sc));
        }
    }
    Mat<Scalar> t_odd = odd[0] + odd[1] + odd[2];
    Mat<Scalar> t_even = even[0] + even[1] + even[2];
    RowVec<Scalar> left = mu.left(1) * t_odd;
    ColVec<Scalar> right = t_even * mu.right(1);
    return CylinderMeasure<Scalar>(left, even, odd, right);
}

template <class Scalar>
CylinderMeasure<Scalar> symmetrize(const CylinderMeasure<Scalar>& mu) {
    const Scalar half = Scalar(1) / Scalar(2);
    return swap_blocks(mix<Scalar>({{half, mu}, {half, reflect(mu)}}));
}

// Exact image of mu under the envelope step. Output sites 2n-1 and 2n both read the source
// pair (2n, 2n+1); the bond before an output even site remembers that pair's class.
template <class Scalar>
CylinderMeasure<Scalar> push_forward(const CylinderMeasure<Scalar>& mu, const Params& params) {
    const auto de = mu.bond(0);
    std::array<SymbolDistribution, 3> phi;
    for (int c = 0; c < 3; ++c) phi[c] = class_rule_distribution(static_cast<PairClass>(c), params);
    std::array<Mat<Scalar>, 3> even, odd;
    for (auto b : kSymbols) {
        auto& o = odd[static_cast<int>(b)];
        auto& e = even[static_cast<int>(b)];
        o = Mat<Scalar>::Zero(de, 3 * de);
        e = Mat<Scalar>::Zero(3 * de, de);
        for (int c = 0; c < 3; ++c) {
            const Scalar w = scalar_from<Scalar>(phi[c][b]);
            if (w == Scalar(0)) continue;
            o.block(0, c * de, de, de) = w * mu.pair_class(0, static_cast<PairClass>(c));
            e.block(c * de, 0, de, de) = w * Mat<Scalar>::Identity(de, de);
        }
    }
    Mat<Scalar> t_odd = odd[0] + odd[1] + odd[2];
    Mat<Scalar> t_even = even[0] + even[1] + even[2];
    RowVec<Scalar> left = mu.left(0) * t_odd;
    ColVec<Scalar> right = t_even * mu.right(0);
    return CylinderMeasure<Scalar>(left, even, odd, right);
}

}  // namespace gpca
