#pragma once

#include "gpca/rational.hpp"
#include "gpca/rules.hpp"

#include <doctest.h>

namespace testing {

inline gpca::Rational Q(long a, long b = 1) { return gpca::Rational(a, b); }
inline gpca::Params P(long pn, long pd, long qn, long qd) { return gpca::Params(Q(pn, pd), Q(qn, qd)); }

inline const gpca::Symbol Z = gpca::Symbol::Zero, X = gpca::Symbol::Question, O = gpca::Symbol::One;

}  // namespace testing
