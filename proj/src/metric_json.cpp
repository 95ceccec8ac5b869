#include "homog3/metric_json.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace homog3 {

namespace {

using nlohmann::json;

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw std::invalid_argument(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
  return v;
}

void reject_unknown_fields(const json& spec, const std::set<std::string>& allowed) {
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    if (!allowed.count(it.key()))
      throw std::invalid_argument("unknown field in metric spec: " + it.key());
  }
}

} // namespace

MetricModel parse_metric(const nlohmann::json& spec) {
  if (!spec.is_object()) throw std::invalid_argument("metric spec must be a JSON object");
  if (!spec.contains("type") || !spec["type"].is_string())
    throw std::invalid_argument("metric spec needs a string \"type\"");
  const std::string type = spec["type"].get<std::string>();

  if (type == "semidirect") {
    reject_unknown_fields(spec, {"type", "A"});
    if (!spec.contains("A") || !spec["A"].is_array() || spec["A"].size() != 2)
      throw std::invalid_argument("semidirect spec needs a 2x2 array \"A\"");
    SemidirectModel m;
    for (int i = 0; i < 2; ++i) {
      const auto& row = spec["A"][i];
      if (!row.is_array() || row.size() != 2)
        throw std::invalid_argument("semidirect spec needs a 2x2 array \"A\"");
      for (int j = 0; j < 2; ++j) m.A(i, j) = finite_number(row[j], "A entry");
    }
    return m;
  }
  if (type == "sl2tilde") {
    reject_unknown_fields(spec, {"type", "lambda"});
    if (!spec.contains("lambda") || !spec["lambda"].is_array() || spec["lambda"].size() != 3)
      throw std::invalid_argument("sl2tilde spec needs a 3-vector \"lambda\"");
    Sl2FrameMetric m;
    double* l[3] = {&m.lambda1, &m.lambda2, &m.lambda3};
    for (int i = 0; i < 3; ++i) {
      *l[i] = finite_number(spec["lambda"][i], "lambda entry");
      if (*l[i] <= 0.0) throw std::invalid_argument("lambda entries must be positive");
    }
    return m;
  }
  if (type == "s2xr") {
    reject_unknown_fields(spec, {"type", "kappa"});
    if (!spec.contains("kappa")) throw std::invalid_argument("s2xr spec needs \"kappa\"");
    ProductS2R m;
    m.kappa = finite_number(spec["kappa"], "kappa");
    if (m.kappa <= 0.0) throw std::invalid_argument("kappa must be positive");
    return m;
  }
  throw std::invalid_argument("unknown metric type: " + type);
}

MetricModel parse_metric_string(const std::string& text) {
  return parse_metric(nlohmann::json::parse(text));
}

nlohmann::json metric_to_json(const MetricModel& model) {
  nlohmann::json j;
  if (const auto* m = std::get_if<SemidirectModel>(&model)) {
    j["type"] = "semidirect";
    j["A"] = {{m->A(0, 0), m->A(0, 1)}, {m->A(1, 0), m->A(1, 1)}};
  } else if (const auto* s = std::get_if<Sl2FrameMetric>(&model)) {
    j["type"] = "sl2tilde";
    j["lambda"] = {s->lambda1, s->lambda2, s->lambda3};
  } else {
    j["type"] = "s2xr";
    j["kappa"] = std::get<ProductS2R>(model).kappa;
  }
  return j;
}

} // namespace homog3
