#pragma once

#include <string>

#include <json.hpp>

#include "bss/nondet.hpp"
#include "bss/structures.hpp"
#include "bss/vm.hpp"

namespace bss {

nlohmann::json tuple_to_json(const Structure& s, const Tuple& t);
Tuple tuple_from_json(const Structure& s, const nlohmann::json& j);

// Outputs in canonical order plus branch statistics.
nlohmann::json to_json(const Structure& s, const ResultSet& r);
ResultSet result_set_from_json(const Structure& s, const nlohmann::json& j);

nlohmann::json to_json(const Structure& s, const RunResult& r);
nlohmann::json to_json(const Structure& s, const Configuration& c);

// "l . (i, ...) . (z1, ..., zk, fill, ...)", tapes separated by " | ".
std::string format_configuration(const Structure& s, const Configuration& c);

// "{(a), (b)}" in canonical order.
std::string format_outputs(const Structure& s, const ResultSet& r);

}  // namespace bss
