#include <cmath>
#include <cstdio>

#include "dualmind/bench.hpp"

namespace dualmind {

double leela_factor(double sf_nps, double lc_nps) {
    if (!(lc_nps > 0)) throw BenchError("leela_factor: nps denominator must be > 0");
    if (!(sf_nps > 0)) throw BenchError("leela_factor: nps numerator must be > 0");
    return sf_nps / lc_nps;
}

double leela_ratio(double factor, double lc_nodes, double sf_nodes) {
    if (!(sf_nodes > 0)) throw BenchError("leela_ratio: node denominator must be > 0");
    if (!(lc_nodes > 0)) throw BenchError("leela_ratio: node numerator must be > 0");
    if (!(factor > 0)) throw BenchError("leela_ratio: factor must be > 0");
    return factor * lc_nodes / sf_nodes;
}

std::string leela_interpretation(double ratio) {
    char buf[160];
    if (ratio > 1.0)
        std::snprintf(buf, sizeof buf,
                      "the MCTS side received %.1fx more effective compute",
                      ratio);
    else if (ratio < 1.0)
        std::snprintf(buf, sizeof buf,
                      "the alpha-beta side received %.1fx more effective compute",
                      1.0 / ratio);
    else
        std::snprintf(buf, sizeof buf, "both sides received equal effective compute");
    return buf;
}

}  // namespace dualmind
