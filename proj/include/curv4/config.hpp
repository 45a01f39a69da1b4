#pragma once

// Text format for chart metrics:
//
//   # comment
//   domain = box(-1..1, -1..1, -1..1, -1..1)
//   orientation = +1
//   g11 = 1 + x1^2
//   g12 = 0.1*x2            (g21 is mirrored; giving both is an error)
//   w12 = x3                (optional 2-form components)
//
// Missing off-diagonal metric entries are 0, missing 2-form entries are 0,
// every diagonal metric entry is required, unknown keys are errors.

#include <optional>
#include <string>
#include <string_view>

#include "curv4/hodgeops.hpp"

namespace curv4 {

struct MetricConfig {
  MetricField metric;
  std::optional<TwoFormField> form;
};

/// Throws ConfigError carrying the key, line and (for expressions) the
/// column of the problem.
MetricConfig parse_metric_config(std::string_view text);
MetricConfig load_metric_config(const std::string& path);

}  // namespace curv4
