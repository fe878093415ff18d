#include "gpca/weights.hpp"

#include <algorithm>
#include <future>
#include <memory>
#include <set>
#include <stdexcept>

namespace gpca {

std::string Expr::str() const {
    std::string s;
    for (const auto& t : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + t.coeff.str() + ")*" + (t.side == Side::Image ? "Emu" : "mu") + t.pattern.str();
    }
    return s.empty() ? "0" : s;
}

Expr mu(std::string_view body, long anchor) { return Expr({Term{BiPoly(1), CylinderPattern(body, anchor), Side::Measure}}); }
Expr img(std::string_view body, long anchor) { return Expr({Term{BiPoly(1), CylinderPattern(body, anchor), Side::Image}}); }

Expr on_image(const Expr& e) {
    std::vector<Term> terms = e.terms();
    for (auto& t : terms) {
        if (t.side == Side::Image) throw std::logic_error("functional already reads the image");
        t.side = Side::Image;
    }
    return Expr(std::move(terms));
}

namespace {

const BiPoly P = BiPoly::p();
const BiPoly Q = BiPoly::q();
const BiPoly R = BiPoly::r();
const BiPoly P1 = BiPoly(1) - BiPoly::p();

Expr sum_mu(std::initializer_list<const char*> bodies, long anchor) {
    Expr e;
    for (auto b : bodies) e = e + mu(b, anchor);
    return e;
}

Expr residual(const Expr& w) { return w - on_image(w); }

}  // namespace

WeightFunctional build_weight_functional(const std::string& id) {
    if (id == "w0") return BiPoly(2) * mu("?0", 1) + mu("??", 1);
    if (id == "w1") return build_weight_functional("w0") + mu("0??", 0);
    if (id == "w2") return build_weight_functional("w1") - mu("1?0", 0) - mu("??0", 0);
    if (id == "w3") return build_weight_functional("w2") + mu("100?", 0) + mu("10??", 0) + mu("10?", 1);
    if (id == "w4")
        return build_weight_functional("w3") - P * (BiPoly(2) - P) * (mu("1[1*][**]", 1) + mu("?[1*][**]", 1));
    if (id == "w5") return build_weight_functional("w4") - mu("1?01", 0) - mu("1??1", 0);
    if (id == "gw0") return sum_mu({"??", "1?", "?1", "0?", "?0"}, 1);
    if (id == "gw1")
        return build_weight_functional("gw0") - mu("11??", 1) - mu("?1??", 1) - mu("??1", 0) -
               BiPoly(2) * mu("1?1", 0) - BiPoly(2) * mu("1?0", 0) - mu("??0", 0) + mu("00??", 1) +
               mu("?0??", 1);
    throw std::invalid_argument("unknown weight functional '" + id + "'");
}

std::vector<std::string> weight_functional_ids() { return {"w0", "w1", "w2", "w3", "w4", "w5", "gw0", "gw1"}; }

const Rational& PatternCache::get(const CylinderPattern& pattern, Side side) {
    auto key = std::make_pair(side, pattern);
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    Rational v = side == Side::Measure ? pattern_probability(mu_, pattern) : pushforward_probability(mu_, pattern, params_);
    return values_.emplace(std::move(key), std::move(v)).first->second;
}

Rational evaluate(const Expr& e, PatternCache& cache) {
    Rational acc = 0;
    const auto& pr = cache.params();
    for (const auto& t : e.terms()) {
        Rational c = t.coeff(pr.p(), pr.q());
        if (c != 0) acc += c * cache.get(t.pattern, t.side);
    }
    return acc;
}

Rational evaluate_functional(const WeightFunctional& w, const ExactMeasure& m, const Params& params) {
    PatternCache cache(m, params);
    return evaluate(w, cache);
}

Rational stationarity_residual(const WeightFunctional& w, const ExactMeasure& m, const Params& params) {
    PatternCache cache(m, params);
    return evaluate(w, cache) - evaluate(on_image(w), cache);
}

std::string requirement_string(unsigned req) {
    std::string s;
    auto add = [&](unsigned bit, const char* name) {
        if (req & bit) s += (s.empty() ? "" : ",") + std::string(name);
    };
    add(kShift, "i");
    add(kEvenReversal, "ii");
    add(kOddReversal, "iii");
    add(kBlockSwap, "iv");
    add(kImage, "image");
    return s;
}

Polynomial<Rational> quintic() { return Polynomial<Rational>({-1, 6, -8, 9, -5, 1}); }
Polynomial<Rational> cubic() { return Polynomial<Rational>({1, -1, -2, 1}); }

namespace {

Params pq(long pn, long pd, long qn, long qd) { return Params(Rational(pn, pd), Rational(qn, qd)); }

std::map<std::string, ParamDomain> make_domains() {
    std::map<std::string, ParamDomain> d;
    d["any"] = {"any", "all (p,q) with p,q >= 0 and 0 < p+q <= 1", [](const Params&) { return true; },
                {pq(1, 4, 1, 4), pq(1, 10, 2, 5), pq(0, 1, 1, 2), pq(3, 5, 1, 5), pq(1, 3, 1, 3), pq(1, 2, 1, 2),
                 pq(2, 5, 0, 1)}};
    d["q0"] = {"q0", "q = 0", [](const Params& x) { return x.q() == 0; },
               {pq(1, 5, 0, 1), pq(1, 4, 0, 1), pq(1, 3, 0, 1), pq(1, 2, 0, 1), pq(3, 4, 0, 1), pq(1, 1, 0, 1)}};
    d["q0_half"] = {"q0_half", "q = 0, p > 1/2", [](const Params& x) { return x.q() == 0 && x.p() > Rational(1, 2); },
                    {pq(11, 20, 0, 1), pq(3, 5, 0, 1), pq(2, 3, 0, 1), pq(3, 4, 0, 1), pq(9, 10, 0, 1)}};
    d["q0_window"] = {"q0_window", "q = 0, p0 < p < p1",
                      [](const Params& x) {
                          return x.q() == 0 && sign(quintic()(x.p())) > 0 && sign(cubic()(x.p())) > 0;
                      },
                      {}};
    for (long k : {23, 26, 29, 32, 36, 40, 44, 48, 51, 54}) d["q0_window"].samples.push_back(pq(k, 100, 0, 1));
    d["region2"] = {"region2", "q > max{(2 - p - sqrt(p^2+2))/2, 0}",
                    [](const Params& x) { return classify_region(x) == Region::Case2General; },
                    {pq(0, 1, 3, 10), pq(1, 10, 1, 4), pq(1, 4, 1, 4), pq(3, 5, 1, 5), pq(1, 3, 1, 3), pq(0, 1, 1, 1)}};
    return d;
}

DerivationStep identity(std::string id, std::string statement, Expr lhs, Expr rhs, unsigned needs,
                        std::string dom) {
    return {std::move(id), std::move(statement), StepKind::Identity, false, std::move(lhs), std::move(rhs), needs,
            std::move(dom), {}};
}

DerivationStep bound(std::string id, std::string statement, Expr lhs, Expr rhs, unsigned needs, std::string dom) {
    return {std::move(id), std::move(statement), StepKind::LowerBound, false, std::move(lhs), std::move(rhs), needs,
            std::move(dom), {}};
}

DerivationStep flagged(DerivationStep s, std::string note) {
    s.flagged = true;
    s.note = std::move(note);
    return s;
}

std::vector<DerivationStep> make_catalog() {
    const auto w0 = build_weight_functional("w0"), w1 = build_weight_functional("w1"),
               w2 = build_weight_functional("w2"), w3 = build_weight_functional("w3"),
               w4 = build_weight_functional("w4"), w5 = build_weight_functional("w5"),
               gw0 = build_weight_functional("gw0"), gw1 = build_weight_functional("gw1");
    const BiPoly two(2);
    const BiPoly P2 = P * (two - P);  // p(2-p)
    const unsigned sym_img = kSymmetric | kImage;

    const Expr S = mu("[**]", 0);
    const Expr X = mu("100?", 0) + mu("10??", 0) + mu("10?", 1);
    const Expr ends = mu("1?01", 0) + mu("1??1", 0);
    const Expr mid4 = sum_mu({"10?0", "1?0?", "1??0", "1???"}, 0);
    const Expr T = sum_mu({"00[**][**]", "00[**]00", "00[**][1*]", "00[1*][**]"}, 0);

    // Common tail of the q = 0 chain after the w4 update.
    const Expr tail = -(P * P * pow(P1, 2)) * mu("0000[**]", 0) - two * P * pow(P1, 2) * mu("00[**][**]", 0) -
                      P * pow(P1, 2) * mu("00[**]00", 0) - P * pow(P1, 2) * mu("00[**][1*]", 0) -
                      (BiPoly(1) - BiPoly(4) * P + two * P * P) * mu("00[1*][**]", 0);
    const Expr w5e_bracket = P * pow(P1, 3) * (BiPoly(1) + P) * mu("0000[**]", 0) +
                             pow(P1, 3) * (BiPoly(1) + P) * mu("00[**][**]", 0) + pow(P1, 3) * mu("00[**][1*]", 0) +
                             pow(P1, 3) * mu("00[1*][**]", 0);

    std::vector<DerivationStep> c;

    // q = 0 family
    c.push_back(identity("Ep_w0", "w0(E mu) = (1-p^2) mu(**)_0", on_image(w0), (BiPoly(1) - P * P) * S, kShift, "q0"));
    c.push_back(identity("w0_expand", "w0(mu) = 2(mu(0?0)+mu(??0)+mu(1?0))_0 + mu(0??)_0 + mu(???)_0 + mu(1??)_0", w0,
                         two * sum_mu({"0?0", "??0", "1?0"}, 0) + sum_mu({"0??", "???", "1??"}, 0), kShift, "any"));
    c.push_back(identity("w0_rearranged", "w0(mu) = mu(**)_0 + 2mu(1?0)_0 + mu(??0)_0 + mu(1??)_0 - mu(0??)_0", w0,
                         S + two * mu("1?0", 0) + mu("??0", 0) + mu("1??", 0) - mu("0??", 0), sym_img, "q0"));
    c.push_back(identity("w0_residual", "w0(mu) - w0(E mu) = p^2 mu(**)_0 + 2mu(1?0)_0 + mu(??0)_0 + mu(1??)_0 - mu(0??)_0",
                         residual(w0),
                         P * P * S + two * mu("1?0", 0) + mu("??0", 0) + mu("1??", 0) - mu("0??", 0), sym_img, "q0"));
    c.push_back(identity("Ep_0qq", "E mu(0??)_0 = p(1-p)^2 (mu(00**)+mu(****))_0 + (1-p)^2 mu(1* **)_0",
                         img("0??", 0),
                         P * pow(P1, 2) * (mu("00[**]", 0) + mu("[**][**]", 0)) + pow(P1, 2) * mu("[1*][**]", 0),
                         kShift, "q0"));
    c.push_back(identity("Ep_0qq_reduced", "E mu(0??)_0 with mu(1* **)_0 reduced to nine words", img("0??", 0),
                         P * pow(P1, 2) * (mu("00[**]", 0) + mu("[**][**]", 0)) +
                             pow(P1, 2) *
                                 sum_mu({"100?", "10?0", "10??", "1?0?", "1??0", "1???", "010?", "?10?", "110?"}, 0),
                         kImage | kShift, "q0"));
    c.push_back(identity("w1_residual", "w1(mu) - w1(E mu) expanded", residual(w1),
                         P * P * S + mu("1?0", 0) + mu("??0", 0) + ends + P2 * mid4 -
                             P * pow(P1, 2) * (mu("00[**]", 0) + mu("[**][**]", 0)) -
                             pow(P1, 2) * sum_mu({"100?", "10??", "010?", "?10?", "110?"}, 0),
                         sym_img, "q0"));
    c.push_back(identity("Ep_1q0", "E mu(1?0)_0 = p(1-p)^2 mu(00**)_0", img("1?0", 0),
                         P * pow(P1, 2) * mu("00[**]", 0), kShift, "q0"));
    c.push_back(identity("Ep_qq0", "E mu(??0)_0 = p(1-p)^2 mu(****)_0", img("??0", 0),
                         P * pow(P1, 2) * mu("[**][**]", 0), kShift, "q0"));
    c.push_back(identity("w2_residual", "w2(mu) - w2(E mu) = p^2 mu(**)_0 + ... - (1-p)^2 (mu(100?)_0 + mu(10??)_0 + mu(10?)_1)",
                         residual(w2), P * P * S + ends + P2 * mid4 - pow(P1, 2) * X, sym_img, "q0"));
    c.push_back(bound("ineq_0q", "mu(0?)_0 >= mu(100?)_0 + mu(10?)_1", mu("0?", 0), mu("100?", 0) + mu("10?", 1),
                      kShift, "any"));
    c.push_back(bound("ineq_qq", "mu(??)_0 >= mu(10??)_0", mu("??", 0), mu("10??", 0), kShift, "any"));
    c.push_back(bound("ineq_star", "mu(**)_0 >= mu(100?)_0 + mu(10??)_0 + mu(10?)_1", S, X, kShift, "any"));
    c.push_back(identity("w2_residual_split", "w2 residual regrouped with (2p-1) X", residual(w2),
                         P * P * (S - X) + ends + P2 * mid4 + (two * P - BiPoly(1)) * X, sym_img, "q0"));
    c.push_back(bound("half_bound", "w2(mu) - w2(E mu) >= (2p-1)(mu(100?)_0 + mu(10??)_0 + mu(10?)_1)", residual(w2),
                      (two * P - BiPoly(1)) * X, sym_img, "q0_half"));
    c.push_back(identity("Ep_100q", "E mu(100?)_0 = p^2(1-p)^2 (mu(0000**)+mu(00****))_0 + (1-p)^2 mu(00 1* **)_0",
                         img("100?", 0),
                         P * P * pow(P1, 2) * (mu("0000[**]", 0) + mu("00[**][**]", 0)) +
                             pow(P1, 2) * mu("00[1*][**]", 0),
                         kShift, "q0"));
    c.push_back(identity("Ep_10qq", "E mu(10??)_0 = p(1-p)^3 mu(00****)_0", img("10??", 0),
                         P * pow(P1, 3) * mu("00[**][**]", 0), kShift, "q0"));
    c.push_back(identity("Ep_10q", "E mu(10?)_1 = p(1-p)^2 mu(00**)_0", img("10?", 1), P * pow(P1, 2) * mu("00[**]", 0),
                         kShift, "q0"));
    c.push_back(identity("w3_residual", "w3(mu) - w3(E mu) with p(2-p) mu(1* **)_0", residual(w3),
                         P * P * S + ends + P2 * mu("[1*][**]", 0) + tail +
                             (BiPoly(1) - BiPoly(4) * P + two * P * P - pow(P1, 2)) * mu("00[1*][**]", 0),
                         sym_img, "q0"));
    c.push_back(bound("w4_diff", "w3(mu) - w3(E mu) >= p^2 mu(**)_0 + ... - (1+2p^2-4p) mu(00 1* **)_0", residual(w3),
                      P * P * S + ends + P2 * (mu("1[1*][**]", 1) + mu("?[1*][**]", 1)) + tail, sym_img, "q0"));
    c.push_back(identity("reduce_1_1s", "mu(1 1* **)_1 = eight five-letter words", mu("1[1*][**]", 1),
                         sum_mu({"1100?", "110?0", "110??", "11?0?", "11??0", "11???", "1110?", "1010?"}, 1),
                         kImage | kShift, "q0"));
    c.push_back(identity("reduce_q_1s", "mu(? 1* **)_1 = mu(?010?)_1 + mu(??10?)_1", mu("?[1*][**]", 1),
                         mu("?010?", 1) + mu("??10?", 1), kImage | kShift, "q0"));

    c.push_back(identity("Ep_1100q", "E mu(1100?)_1", img("1100?", 1),
                         P * P * pow(P1, 3) * (mu("0000[**]", 0) + mu("00[**][**]", 0)) +
                             pow(P1, 3) * mu("00[1*][**]", 0),
                         kShift, "q0"));
    c.push_back(identity("Ep_110q0", "E mu(110?0)_1", img("110?0", 1),
                         P * P * pow(P1, 3) * (mu("00[**]00", 0) + mu("00[**][**]", 0)) +
                             P * pow(P1, 3) * mu("00[**][1*]", 0),
                         kShift, "q0"));
    c.push_back(identity("Ep_110qq", "E mu(110??)_1", img("110??", 1), P * pow(P1, 4) * mu("00[**][**]", 0), kShift, "q0"));
    c.push_back(identity("Ep_11q0q", "E mu(11?0?)_1", img("11?0?", 1), P * pow(P1, 4) * mu("00[**][**]", 0), kShift, "q0"));
    c.push_back(identity("Ep_11qq0", "E mu(11??0)_1", img("11??0", 1),
                         P * pow(P1, 4) * (mu("00[**]00", 0) + mu("00[**][**]", 0)) + pow(P1, 4) * mu("00[**][1*]", 0),
                         kShift, "q0"));
    c.push_back(identity("Ep_11qqq", "E mu(11???)_1", img("11???", 1), pow(P1, 5) * mu("00[**][**]", 0), kShift, "q0"));
    c.push_back(identity("Ep_1110q", "E mu(1110?)_1", img("1110?", 1), P * pow(P1, 4) * mu("0000[**]", 0), kShift, "q0"));
    c.push_back(identity("Ep_1010q", "E mu(1010?)_1", img("1010?", 1), P * P * pow(P1, 3) * mu("0000[**]", 0), kShift, "q0"));
    c.push_back(identity("Ep_q010q", "E mu(?010?)_1", img("?010?", 1), P * P * pow(P1, 3) * mu("[**]00[**]", 0), kShift, "q0"));
    c.push_back(identity("Ep_qq10q", "E mu(??10?)_1", img("??10?", 1), P * pow(P1, 4) * mu("[**]00[**]", 0), kShift, "q0"));

    c.push_back(bound("w5_E", "w4(E mu) <= w3(E mu) - p(2-p)(...)", on_image(w3) - P2 * w5e_bracket, on_image(w4), kShift,
                      "q0"));
    c.push_back(bound("w4_residual_bound", "w4(mu) - w4(E mu) >= ...", residual(w4),
                      P * P * S + ends + tail + P2 * w5e_bracket, sym_img, "q0"));
    c.push_back(identity("Ep_1q01", "E mu(1?01)_0 = p(1-p)^3 mu(00**00)_0", img("1?01", 0),
                         P * pow(P1, 3) * mu("00[**]00", 0), kShift, "q0"));
    c.push_back(identity("Ep_1qq1", "E mu(1??1)_0 = (1-p)^4 mu(00**00)_0", img("1??1", 0), pow(P1, 4) * mu("00[**]00", 0),
                         kShift, "q0"));
    c.push_back(bound("w5_residual_bound", "w5(mu) - w5(E mu) >= ...", residual(w5),
                      P * P * S + tail + P2 * w5e_bracket + (P * pow(P1, 3) + pow(P1, 4)) * mu("00[**]00", 0), sym_img,
                      "q0"));
    c.push_back(bound("table_ineq", "mu(**)_0 >= mu(00****)_0 + mu(00**00)_0 + mu(00** 1*)_0 + mu(00 1* **)_0", S, T,
                      kShift, "any"));
    {
        Expr rhs = P * P * (S - T);
        const char* pats[] = {"0000[**]", "00[**][**]", "00[**]00", "00[**][1*]", "00[1*][**]"};
        auto polys = coefficient_polynomials();
        for (int i = 0; i < 5; ++i) {
            const auto& poly = polys[i + 1].poly;
            BiPoly coeff;
            for (int d = 0; d <= poly.degree(); ++d) coeff = coeff + BiPoly::monomial(d, 0, poly[d]);
            rhs = rhs + coeff * mu(pats[i], 0);
        }
        c.push_back(bound("final_q0_bound", "w5(mu) - w5(E mu) >= p^2(mu(**) - ...) + sum of polynomial coefficients",
                          residual(w5), rhs, sym_img, "q0"));
    }
    c.push_back(bound("final_q0_positive", "w5(mu) - w5(E mu) >= 0 for p0 < p < p1", residual(w5), Expr(), sym_img,
                      "q0_window"));
    c.push_back(identity("Ep_question", "E mu(?)_0 = r mu(**)_0", img("?", 0), R * S, kShift, "any"));

    // general (p, q)
    c.push_back(identity("gw0_forms", "gw0(mu) = mu(??)_1 + 2mu(?1)_1 + 2mu(?0)_1", gw0,
                         mu("??", 1) + two * mu("?1", 1) + two * mu("?0", 1), kShift | kBlockSwap, "any"));
    c.push_back(identity("gw0_expanded", "gw0(mu) as three-letter words at anchor 0", gw0,
                         sum_mu({"0??", "1??", "???"}, 0) + two * sum_mu({"0?1", "1?1", "??1"}, 0) +
                             two * sum_mu({"0?0", "1?0", "??0"}, 0),
                         kShift | kBlockSwap, "any"));
    c.push_back(identity("g_qq", "E mu(??)_1 = r^2 mu(**)_0", img("??", 1), R * R * S, kShift, "any"));
    c.push_back(identity("g_q1", "E mu(?1)_1 = rq mu(**)_0", img("?1", 1), R * Q * S, kShift, "any"));
    c.push_back(identity("g_q0", "E mu(?0)_1 = rp mu(**)_0", img("?0", 1), R * P * S, kShift, "any"));
    c.push_back(identity("gw0_E", "gw0(E mu) = (1-(p+q)^2) mu(**)_0", on_image(gw0),
                         (BiPoly(1) - pow(P + Q, 2)) * S, kShift, "any"));
    c.push_back(flagged(identity("gw0_E_expanded", "gw0(E mu) = (1-(p+q)^2)(2(mu(0?0)+mu(1?0)+mu(??0)) + mu(??0)+mu(??1)+mu(???))_0",
                                 on_image(gw0),
                                 (BiPoly(1) - pow(P + Q, 2)) *
                                     (two * sum_mu({"0?0", "1?0", "??0"}, 0) + sum_mu({"??0", "??1", "???"}, 0)),
                                 kSymmetric, "any"),
                        "reads mu(0?)_0 as mu(?0)_1; differs on symmetric measures"));
    {
        const Expr tail0 = mu("??1", 0) + two * mu("1?1", 0) + two * mu("1?0", 0) + mu("??0", 0);
        c.push_back(flagged(identity("g_w0_residual", "gw0(mu) - gw0(E mu) = (p+q)^2 mu(**)_0 + mu(1??)_0 + ... - mu(0?0)_0",
                                     residual(gw0), pow(P + Q, 2) * S + mu("1??", 0) + tail0 - mu("0?0", 0), kSymmetric,
                                     "any"),
                            "last term should be mu(0??)_0; see g_w0_residual_corrected"));
        c.push_back(identity("g_w0_residual_corrected", "gw0(mu) - gw0(E mu) = (p+q)^2 mu(**)_0 + mu(1??)_0 + ... - mu(0??)_0",
                             residual(gw0), pow(P + Q, 2) * S + mu("1??", 0) + tail0 - mu("0??", 0), kSymmetric, "any"));
        c.push_back(identity("g_w0_residual_words", "gw0 residual with four-letter words at anchor 1", residual(gw0),
                             pow(P + Q, 2) * S + sum_mu({"01??", "11??", "?1??"}, 1) + tail0 -
                                 sum_mu({"00??", "10??", "?0??"}, 1),
                             kSymmetric, "any"));
        c.push_back(identity("g_w0_residual_short", "gw0 residual after cancelling mu(01??)_1 and mu(10??)_1",
                             residual(gw0),
                             pow(P + Q, 2) * S + mu("11??", 1) + mu("?1??", 1) + tail0 - mu("00??", 1) - mu("?0??", 1),
                             kSymmetric, "any"));
    }
    c.push_back(identity("g_11qq", "E mu(11??)_1", img("11??", 1),
                         pow(P1, 2) * R * R * mu("00[**]", 0) + Q * Q * R * R * (mu("[1*][**]", 0) + mu("[**][**]", 0)),
                         kShift, "any"));
    c.push_back(identity("g_q1qq", "E mu(?1??)_1 = q r^3 mu(****)_0", img("?1??", 1), Q * pow(R, 3) * mu("[**][**]", 0),
                         kShift, "any"));
    c.push_back(identity("g_qq1", "E mu(??1)_0 = q r^2 mu(****)_0", img("??1", 0), Q * R * R * mu("[**][**]", 0), kShift,
                         "any"));
    c.push_back(flagged(identity("g_1q1", "E mu(1?1)_0 = (1-p)^2 r mu(00**)_0 + r q^2 (mu(1* **) + mu(****))_0",
                                 img("1?1", 0),
                                 pow(P1, 2) * R * mu("00[**]", 0) + R * Q * Q * (mu("[1*][**]", 0) + mu("[**][**]", 0)),
                                 kShift, "any"),
                        "first coefficient should be (1-p) q r; see g_1q1_corrected"));
    c.push_back(identity("g_1q1_corrected", "E mu(1?1)_0 = (1-p) q r mu(00**)_0 + r q^2 (mu(1* **) + mu(****))_0",
                         img("1?1", 0),
                         P1 * Q * R * mu("00[**]", 0) + R * Q * Q * (mu("[1*][**]", 0) + mu("[**][**]", 0)), kShift,
                         "any"));
    c.push_back(identity("g_1q0", "E mu(1?0)_0 = (1-p)pr mu(00**)_0 + pqr (mu(1* **) + mu(****))_0", img("1?0", 0),
                         P1 * P * R * mu("00[**]", 0) + P * Q * R * (mu("[1*][**]", 0) + mu("[**][**]", 0)), kShift,
                         "any"));
    c.push_back(identity("g_qq0", "E mu(??0)_0 = p r^2 mu(****)_0", img("??0", 0), P * R * R * mu("[**][**]", 0), kShift,
                         "any"));
    c.push_back(identity("g_00qq", "E mu(00??)_1", img("00??", 1),
                         P * P * R * R * (mu("00[**]", 0) + mu("[**][**]", 0)) +
                             pow(BiPoly(1) - Q, 2) * R * R * mu("[1*][**]", 0),
                         kShift, "any"));
    c.push_back(identity("g_star_split", "mu(**)_0 = mu(00**)_0 + mu(1* **)_0 + mu(****)_0", S,
                         mu("00[**]", 0) + mu("[1*][**]", 0) + mu("[**][**]", 0), kShift, "any"));
    {
        const BiPoly s2 = pow(P + Q, 2);
        const BiPoly c1 = s2 + pow(P1, 2) * R * R + P1 * P * R + P1 * R * Q - P * P * R * R;
        const BiPoly c2 = s2 + Q * Q * R * R + two * P * Q * R + two * R * Q * Q - pow(BiPoly(1) - Q, 2) * R * R;
        const BiPoly c3 = s2 + Q * Q * R * R + Q * pow(R, 3) + two * P * Q * R + R * R * P + two * R * Q * Q +
                          R * R * Q - P * P * R * R - P * pow(R, 3);
        c.push_back(flagged(identity("g_w1_equality", "gw1(mu) - gw1(E mu) = c1 mu(00**)_0 + c2 mu(1* **)_0 + c3 mu(****)_0",
                                     residual(gw1),
                                     c1 * mu("00[**]", 0) + c2 * mu("[1*][**]", 0) + c3 * mu("[**][**]", 0),
                                     kSymmetric, "any"),
                            "does not hold exactly on symmetric measures"));
        const BiPoly c2s = -two * Q * Q + two * Q * (two - P) + two * P - BiPoly(1);
        c.push_back(bound("g_w1_bound", "gw1(mu) - gw1(E mu) >= (r^2(1-2p) + rp(1-p)) mu(00**)_0 + ...", residual(gw1),
                          (R * R * (BiPoly(1) - two * P) + R * P * P1) * mu("00[**]", 0) + c2s * mu("[1*][**]", 0) +
                              R * R * P * Q * mu("[**][**]", 0),
                          kSymmetric, "any"));
        c.push_back(bound("final_general_bound", "gw1(mu) - gw1(E mu) >= rpq mu(00**)_0 + (-2q^2+2q(2-p)+2p-1) mu(1* **)_0 + r^2pq mu(****)_0",
                          residual(gw1),
                          R * P * Q * mu("00[**]", 0) + c2s * mu("[1*][**]", 0) + R * R * P * Q * mu("[**][**]", 0),
                          kSymmetric, "any"));
        c.push_back(bound("final_general_positive", "gw1(mu) - gw1(E mu) >= 0 in the case-2 region", residual(gw1), Expr(),
                          kSymmetric, "region2"));
    }
    c.push_back(flagged(identity("claim_1q_zero", "E mu(1?)_1 = 0", img("1?", 1), Expr(), kShift, "any"),
                        "exact value is q r mu(**)_2; vanishes only when q = 0 or r = 0"));
    return c;
}

}  // namespace

const ParamDomain& domain(const std::string& name) {
    static const auto domains = make_domains();
    auto it = domains.find(name);
    if (it == domains.end()) throw std::invalid_argument("unknown parameter domain '" + name + "'");
    return it->second;
}

const std::vector<DerivationStep>& derivation_catalog() {
    static const auto catalog = make_catalog();
    return catalog;
}

const DerivationStep& find_step(const std::string& id) {
    for (const auto& s : derivation_catalog())
        if (s.id == id) return s;
    throw std::invalid_argument("unknown derivation step '" + id + "'");
}

bool TaggedMeasure::satisfies(unsigned req, const Params& params) const {
    if ((req & ~kImage & ~properties) != 0) return false;
    if (req & kImage) return (properties & kImage) && image_params && *image_params == params;
    return true;
}

TaggedMeasure panel_measure(unsigned req, const Params& params, std::uint64_t seed) {
    if ((req & kSymmetric & ~kShift) == 0 && !(req & kImage))
        return {random_markov_measure(seed), kShift, std::nullopt, "markov:" + std::to_string(seed)};
    ExactMeasure base = seed % 10 == 9 ? symmetrize(random_markov_measure(seed))
                                       : random_block_measure(seed, 1 + static_cast<int>(seed % 2));
    std::string origin = (seed % 10 == 9 ? "symmetrized-markov:" : "block:") + std::to_string(seed);
    if (!(req & kImage)) return {std::move(base), kSymmetric, std::nullopt, origin};
    return {push_forward(base, params), kSymmetric | kImage, params, "image-of-" + origin};
}

std::string verdict_string(Verdict v) {
    switch (v) {
        case Verdict::ExactEqual: return "exact_equal";
        case Verdict::BoundHolds: return "bound_holds";
        case Verdict::Violation: return "violation";
    }
    return "?";
}

StepReport verify_derivation_step(const DerivationStep& step, const TaggedMeasure& m, const Params& params,
                                  PatternCache* cache) {
    if (!domain(step.domain).contains(params))
        throw std::domain_error("step " + step.id + " is stated for " + domain(step.domain).description + ", got " +
                                to_string(params));
    if (!m.satisfies(step.needs, params))
        throw std::invalid_argument("step " + step.id + " needs properties {" + requirement_string(step.needs) +
                                    "}, measure provides {" + requirement_string(m.properties) + "}");
    std::optional<PatternCache> local;
    if (!cache) cache = &local.emplace(m.measure, params);
    StepReport rep;
    rep.id = step.id;
    rep.flagged = step.flagged;
    rep.lhs = evaluate(step.lhs, *cache);
    rep.rhs = evaluate(step.rhs, *cache);
    rep.slack = rep.lhs - rep.rhs;
    if (step.kind == StepKind::Identity) rep.verdict = rep.slack == 0 ? Verdict::ExactEqual : Verdict::Violation;
    else rep.verdict = rep.slack >= 0 ? Verdict::BoundHolds : Verdict::Violation;
    if (rep.verdict == Verdict::Violation) {
        std::set<std::pair<Side, CylinderPattern>> seen;
        for (const Expr* e : {&step.lhs, &step.rhs})
            for (const auto& t : e->terms())
                if (seen.insert({t.side, t.pattern}).second)
                    rep.details.emplace_back((t.side == Side::Image ? "Emu" : "mu") + t.pattern.str(),
                                             cache->get(t.pattern, t.side));
    }
    return rep;
}

StepReport verify_derivation_step(const std::string& step_id, const TaggedMeasure& m, const Params& params) {
    return verify_derivation_step(find_step(step_id), m, params);
}

std::vector<NamedPolynomial> coefficient_polynomials() {
    using Poly = Polynomial<Rational>;
    const Poly p = Poly::x(), one = Poly::constant(1), q1 = one - p;
    return {
        {"p^2", "(**)_0 - T", p * p},
        {"p^2(1-p)^2(p^3-2p^2-p+1)", "(0000**)_0", p * p * q1 * q1 * cubic()},
        {"p^4(p-2)^2", "(00****)_0", pow(p, 4) * pow(p - Poly::constant(2), 2)},
        {"1-4p+6p^2-2p^3", "(00**00)_0", Poly({1, -4, 6, -2})},
        {"p(p^4-5p^3+8p^2-4p+1)", "(00** 1*)_0", p * Poly({1, -4, 8, -5, 1})},
        {"p^5-5p^4+9p^3-8p^2+6p-1", "(00 1* **)_0", quintic()},
    };
}

CriticalInterval critical_interval(const Rational& tol) {
    return {isolate_root(quintic(), 0, 1, tol), isolate_root(cubic(), Rational(1, 2), Rational(3, 5), tol)};
}

std::string region_string(Region r) {
    switch (r) {
        case Region::Case1Q0: return "case1_q0";
        case Region::Case2General: return "case2_general";
        case Region::Outside: return "outside";
    }
    return "?";
}

Region classify_region(const Params& params) {
    const Rational &p = params.p(), &q = params.q();
    if (q == 0) return sign(quintic()(p)) > 0 ? Region::Case1Q0 : Region::Outside;
    // q > (2 - p - sqrt(p^2+2))/2  <=>  2q - 2 + p > -sqrt(p^2+2)
    const Rational a = 2 * q - 2 + p;
    if (a >= 0 || a * a < p * p + 2) return Region::Case2General;
    return Region::Outside;
}

RootBracket case2_boundary(const Rational& p, const Rational& tol) {
    if (p >= Rational(1, 2)) return {0, 0};
    // (2q - 2 + p)^2 - (p^2 + 2) as a polynomial in q
    const Rational c = p - 2;
    Polynomial<Rational> g({c * c - p * p - 2, 4 * c, 4});
    return isolate_root(g, 0, (2 - p) / 2, tol);
}

}  // namespace gpca

namespace gpca {

namespace {

struct PointJob {
    Params params;
    std::vector<std::size_t> steps;  // indices into the summary vector
};

// One parameter point: every step x every panel seed, with measures and pattern caches shared.
std::vector<StepSummary> run_point(const PointJob& job, const std::vector<const DerivationStep*>& steps,
                                   std::size_t measures, std::uint64_t seed) {
    std::vector<StepSummary> out(steps.size());
    for (std::size_t m = 0; m < measures; ++m) {
        std::map<unsigned, std::pair<TaggedMeasure, std::unique_ptr<PatternCache>>> panels;
        for (std::size_t s : job.steps) {
            const auto& step = *steps[s];
            const unsigned cls = (step.needs & kImage) ? kSymmetric | kImage
                                 : (step.needs & ~kShift) ? kSymmetric
                                                          : kShift;
            auto it = panels.find(cls);
            if (it == panels.end()) {
                auto tm = panel_measure(cls, job.params, seed + m);
                it = panels.emplace(cls, std::make_pair(std::move(tm), nullptr)).first;
                it->second.second = std::make_unique<PatternCache>(it->second.first.measure, job.params);
            }
            auto rep = verify_derivation_step(step, it->second.first, job.params, it->second.second.get());
            auto& sum = out[s];
            ++sum.checks;
            if (step.kind == StepKind::LowerBound && (!sum.min_slack || rep.slack < *sum.min_slack))
                sum.min_slack = rep.slack;
            if (rep.verdict == Verdict::Violation) {
                if (!sum.first_violation) {
                    sum.first_violation = rep;
                    sum.first_violation_where = to_string(job.params) + ", " + it->second.first.origin;
                }
                ++sum.violations;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<StepSummary> verify_catalog(const std::vector<std::string>& step_ids, std::size_t measures,
                                        std::uint64_t seed, const std::vector<Params>& points) {
    std::vector<const DerivationStep*> steps;
    for (const auto& id : step_ids) steps.push_back(&find_step(id));

    std::vector<PointJob> jobs;
    auto job_for = [&](const Params& pr) -> PointJob& {
        for (auto& j : jobs)
            if (j.params == pr) return j;
        return jobs.emplace_back(PointJob{pr, {}});
    };
    for (std::size_t s = 0; s < steps.size(); ++s) {
        const auto& dom = domain(steps[s]->domain);
        if (points.empty()) {
            for (const auto& pr : dom.samples) job_for(pr).steps.push_back(s);
        } else {
            for (const auto& pr : points)
                if (dom.contains(pr)) job_for(pr).steps.push_back(s);
        }
    }

    std::vector<std::future<std::vector<StepSummary>>> futures;
    for (const auto& job : jobs)
        futures.push_back(std::async(std::launch::async, run_point, std::cref(job), std::cref(steps), measures, seed));

    std::vector<StepSummary> total(steps.size());
    for (std::size_t s = 0; s < steps.size(); ++s) {
        total[s].id = steps[s]->id;
        total[s].kind = steps[s]->kind;
        total[s].flagged = steps[s]->flagged;
        total[s].needs = steps[s]->needs;
    }
    for (auto& f : futures) {
        auto part = f.get();
        for (std::size_t s = 0; s < steps.size(); ++s) {
            auto& t = total[s];
            const auto& p = part[s];
            t.checks += p.checks;
            t.violations += p.violations;
            if (p.min_slack && (!t.min_slack || *p.min_slack < *t.min_slack)) t.min_slack = p.min_slack;
            if (p.first_violation && !t.first_violation) {
                t.first_violation = p.first_violation;
                t.first_violation_where = p.first_violation_where;
            }
        }
    }
    return total;
}

}  // namespace gpca
