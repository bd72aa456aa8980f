#pragma once

#include <cstdint>
#include <string>

#include "pandora/instance.hpp"

namespace pandora {

// Reproducible random instances: the output is a pure function of
// (params, seed). Values are small integers and probabilities have small
// denominators so exact arithmetic stays light downstream.
struct GeneratorParams {
    int n = 2;
    int horizon = 0;       // 0 = auto: n + sum of processing times + horizon_slack
    int horizon_slack = 1;
    int support_min = 2;
    int support_max = 3;
    int value_max = 12;
    Rat cost_max = Rat(3);
    int cost_denominator = 2;  // costs drawn on the k / cost_denominator grid
    int p_max = 0;
    double absent_prob = 0.0;  // chance a slot cannot be inspected (general/instant only)
    VariantTag variant = VariantTag::General;
    std::string discount = "mixed";  // identity | commit | multiplicative | table | mixed
    bool zero_cost = false;

    static GeneratorParams classic(int n);  // fixed tables, identity discount, p = 0
};

Instance generate_instance(const GeneratorParams& params, std::uint64_t seed);

}  // namespace pandora
