#pragma once

#include "dualmind/score.hpp"

namespace dualmind {

// Centipawns -> win probability, logistic with base 10 and a 400 cp divisor:
// p = 1 / (1 + 10^(-cp/400)). Mate scores map to 1.0 / 0.0. This scale
// reproduces the published probability tables for classical engine output.
double cp_to_winprob(Score s);

// Inverse of the logistic on centipawns; input clamped away from 0 and 1.
double winprob_to_cp(double p);

// The scale LCZero-style engines use between their native value in [-1, 1]
// and displayed centipawns: cp = 90 * tan(1.5637 * v).
double mcts_value_to_cp(double v);
double cp_to_mcts_value(double cp);

// Win probability of a value in [-1, 1]: (v + 1) / 2.
inline double value_to_winprob(double v) { return (v + 1.0) / 2.0; }
inline double winprob_to_value(double p) { return 2.0 * p - 1.0; }

}  // namespace dualmind
