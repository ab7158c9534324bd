#include "dualmind/winprob.hpp"

#include <algorithm>
#include <cmath>

namespace dualmind {

double cp_to_winprob(Score s) {
    if (s.is_mate()) return s.value > 0 ? 1.0 : 0.0;
    return 1.0 / (1.0 + std::pow(10.0, -s.value / 400.0));
}

double winprob_to_cp(double p) {
    p = std::clamp(p, 1e-9, 1.0 - 1e-9);
    return 400.0 * std::log10(p / (1.0 - p));
}

namespace {
constexpr double kMctsCpScale = 90.0;
constexpr double kMctsAngle = 1.5637;
}  // namespace

double mcts_value_to_cp(double v) {
    v = std::clamp(v, -1.0, 1.0);
    return kMctsCpScale * std::tan(kMctsAngle * v);
}

double cp_to_mcts_value(double cp) {
    return std::atan(cp / kMctsCpScale) / kMctsAngle;
}

}  // namespace dualmind
