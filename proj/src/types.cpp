#include "lml/types.hpp"

#include "lml/errors.hpp"

#include <iostream>

namespace lml {

const char* to_string(MetricKind kind) {
  return kind == MetricKind::Similarity ? "similarity" : "distance";
}

MetricKind metric_kind_from_string(const std::string& name) {
  if (name == "similarity") return MetricKind::Similarity;
  if (name == "distance") return MetricKind::Distance;
  throw ConfigError("unknown metric kind '" + name +
                    "' (expected 'similarity' or 'distance')");
}

void log_warning(const std::string& message) {
  std::cerr << "[lml] warning: " << message << '\n';
}

}  // namespace lml
