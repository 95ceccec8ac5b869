#pragma once

#include <string>

#include <json.hpp>

#include "homog3/models.hpp"

namespace homog3 {

// Accepted shapes:
//   {"type":"semidirect","A":[[a,b],[c,d]]}
//   {"type":"sl2tilde","lambda":[l1,l2,l3]}   (l_i > 0)
//   {"type":"s2xr","kappa":k}                 (k > 0)
// Non-finite entries and unknown fields are rejected.
MetricModel parse_metric(const nlohmann::json& spec);
MetricModel parse_metric_string(const std::string& text);

nlohmann::json metric_to_json(const MetricModel& model);

} // namespace homog3
