#pragma once

// JSON serialization of the property-suite report:
// {config: {...}, pairs: [{kind, definition, trials, max_gap, violations}]}.

#include <json.hpp>

#include "suite.hpp"

namespace nablafc {

inline nlohmann::ordered_json to_json(const SuiteReport& rep) {
    nlohmann::ordered_json j;
    const auto& c = rep.config;
    j["config"] = {{"trials", c.trials},
                   {"max_len", c.max_len},
                   {"value_range", {c.value_min, c.value_max}},
                   {"alpha_range", {c.alpha_min, c.alpha_max}},
                   {"seed", c.seed},
                   {"tolerance", c.tolerance},
                   {"family", to_string(c.family)}};
    if (c.family == OperatorFamily::FixedMemory)
        j["config"]["memory"] = c.memory < 0 ? nlohmann::ordered_json("full") : nlohmann::ordered_json(c.memory);
    if (c.family == OperatorFamily::VariableOrder)
        j["config"]["order_range"] = {c.order_min, c.order_max};
    j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& p : rep.pairs)
        j["pairs"].push_back({{"kind", p.kind},
                              {"definition", p.definition},
                              {"trials", p.trials},
                              {"maxGap", p.max_gap},
                              {"violations", p.violations}});
    j["total_violations"] = rep.total_violations();
    return j;
}

}  // namespace nablafc
