#pragma once

#include "gpca/polynomial.hpp"
#include "gpca/transfer.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gpca {

// Where a pattern probability is read: on mu itself or on its image under the envelope step.
enum class Side : std::uint8_t { Measure, Image };

struct Term {
    BiPoly coeff;
    CylinderPattern pattern;
    Side side = Side::Measure;
};

// Linear combination of pattern probabilities with coefficients polynomial in (p, q).
class Expr {
public:
    Expr() = default;
    Expr(std::vector<Term> terms) : terms_(std::move(terms)) {}

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::string str() const;

    friend Expr operator+(Expr a, const Expr& b) {
        a.terms_.insert(a.terms_.end(), b.terms_.begin(), b.terms_.end());
        return a;
    }
    friend Expr operator*(const BiPoly& c, Expr e) {
        for (auto& t : e.terms_) t.coeff = c * t.coeff;
        return e;
    }
    friend Expr operator-(const Expr& e) { return BiPoly(-1) * e; }
    friend Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

private:
    std::vector<Term> terms_;
};

Expr mu(std::string_view body, long anchor);
Expr img(std::string_view body, long anchor);
// The same functional read on the image.
Expr on_image(const Expr& e);

using WeightFunctional = Expr;

// w0 .. w5 (q = 0 family), gw0, gw1.
WeightFunctional build_weight_functional(const std::string& id);
std::vector<std::string> weight_functional_ids();

// Memoizes pattern probabilities for one (measure, params) pair.
class PatternCache {
public:
    PatternCache(const ExactMeasure& mu, const Params& params) : mu_(mu), params_(params) {}

    const Rational& get(const CylinderPattern& pattern, Side side);
    const ExactMeasure& measure() const { return mu_; }
    const Params& params() const { return params_; }

private:
    const ExactMeasure& mu_;
    Params params_;
    std::map<std::pair<Side, CylinderPattern>, Rational> values_;
};

Rational evaluate(const Expr& e, PatternCache& cache);
Rational evaluate_functional(const WeightFunctional& w, const ExactMeasure& mu, const Params& params);
Rational stationarity_residual(const WeightFunctional& w, const ExactMeasure& mu, const Params& params);

// Applicability tags. Image means "mu is itself the image of a measure under the same step".
enum Requirement : unsigned {
    kShift = 1u << 0,         // (i)
    kEvenReversal = 1u << 1,  // (ii)
    kOddReversal = 1u << 2,   // (iii)
    kBlockSwap = 1u << 3,     // (iv)
    kImage = 1u << 4,
};
inline constexpr unsigned kSymmetric = kShift | kEvenReversal | kOddReversal | kBlockSwap;

std::string requirement_string(unsigned req);

struct ParamDomain {
    std::string name;
    std::string description;
    std::function<bool(const Params&)> contains;
    std::vector<Params> samples;
};

const ParamDomain& domain(const std::string& name);

enum class StepKind { Identity, LowerBound };

struct DerivationStep {
    std::string id;
    std::string statement;  // short human-readable form
    StepKind kind = StepKind::Identity;
    bool flagged = false;
    Expr lhs, rhs;  // identity: lhs == rhs; bound: lhs >= rhs
    unsigned needs = kShift;
    std::string domain;
    std::string note;
};

const std::vector<DerivationStep>& derivation_catalog();
const DerivationStep& find_step(const std::string& id);

// A measure plus what is known about it by construction.
struct TaggedMeasure {
    ExactMeasure measure;
    unsigned properties = kShift;
    std::optional<Params> image_params;
    std::string origin;

    bool satisfies(unsigned req, const Params& params) const;
};

// Raw Markov measures carry (i) only; symmetric ones (i)-(iv); images add kImage for `params`.
TaggedMeasure panel_measure(unsigned req, const Params& params, std::uint64_t seed);

enum class Verdict { ExactEqual, BoundHolds, Violation };
std::string verdict_string(Verdict v);

struct StepReport {
    std::string id;
    Verdict verdict = Verdict::ExactEqual;
    bool flagged = false;
    Rational lhs, rhs, slack;
    std::vector<std::pair<std::string, Rational>> details;  // pattern values, filled on violation
};

StepReport verify_derivation_step(const DerivationStep& step, const TaggedMeasure& mu, const Params& params,
                                  PatternCache* cache = nullptr);
StepReport verify_derivation_step(const std::string& step_id, const TaggedMeasure& mu, const Params& params);

// Aggregate over a measure panel: `measures` seeds at every parameter point of each step's domain
// (or the given points, filtered to the domain).
struct StepSummary {
    std::string id;
    StepKind kind = StepKind::Identity;
    bool flagged = false;
    unsigned needs = kShift;
    std::size_t checks = 0, violations = 0;
    std::optional<Rational> min_slack;
    std::optional<StepReport> first_violation;
    std::string first_violation_where;
};

std::vector<StepSummary> verify_catalog(const std::vector<std::string>& step_ids, std::size_t measures,
                                        std::uint64_t seed, const std::vector<Params>& points = {});

struct NamedPolynomial {
    std::string name;
    std::string pattern;  // the cylinder set it multiplies
    Polynomial<Rational> poly;
    std::string positive_on = "(p0, p1)";
};

// The leading p^2 and the five cylinder coefficients of the final q = 0 bound.
std::vector<NamedPolynomial> coefficient_polynomials();
Polynomial<Rational> quintic();
Polynomial<Rational> cubic();

struct CriticalInterval {
    RootBracket p0, p1;
};
CriticalInterval critical_interval(const Rational& tol);

enum class Region { Case1Q0, Case2General, Outside };
std::string region_string(Region r);
Region classify_region(const Params& params);

// At fixed p, the q where case 2 starts, bracketed by exact bisection.
RootBracket case2_boundary(const Rational& p, const Rational& tol);

}  // namespace gpca
