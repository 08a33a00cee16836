#pragma once

#include <json.hpp>

#include "glj/params.hpp"
#include "glj/sweep.hpp"

namespace glj::detail {

nlohmann::json to_json(const ModelParams& p);
ModelParams params_from(const nlohmann::json& j);
nlohmann::json to_json(const SweepRow& row);
SweepRow row_from(const nlohmann::json& j);
nlohmann::json to_json(const RateFit& fit);

}  // namespace glj::detail
