#pragma once

#include <cstddef>
#include <vector>

#include "qds/qddc/formula.hpp"

namespace qds {

using Valuation = std::vector<bool>;  // indexed by VarId
using Word = std::vector<Valuation>;  // nonempty

// Direct implementation of the satisfaction relation. Exponential in the
// number of quantifiers; intended as a test oracle on short words.
bool eval_point(const Word& w, std::size_t i, const Prop& p);
bool eval_interval(const Word& w, std::size_t b, std::size_t e, const Formula& d);

// w, [0, |w|-1] |= d
bool satisfies(const Word& w, const Formula& d);

// Counting terms over [b, e].
unsigned long scount(const Word& w, const Prop& p, std::size_t b, std::size_t e);
unsigned long sdur(const Word& w, const Prop& p, std::size_t b, std::size_t e);

}  // namespace qds
