#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "sutured/model.hpp"

namespace sutured {

struct SampleDefect {
  std::size_t index = 0;
  Vec2 point = Vec2::Zero();
  double defect = 0.0;
  bool included = true;  // excluded samples do not count toward pass/fail
  std::string note;
};

/// Outcome of one numeric certification. Samples stay in input order.
struct VerificationReport {
  std::string check;
  double tolerance = 0.0;
  std::vector<SampleDefect> samples;
  double max_defect = 0.0;
  bool pass = false;
  nlohmann::json details = nlohmann::json::object();

  std::size_t included_count() const {
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const SampleDefect& s) { return s.included; }));
  }

  /// Recomputes max_defect and pass from the included samples.
  /// A report with no included samples does not pass.
  void finalize() {
    max_defect = -std::numeric_limits<double>::infinity();
    bool any = false;
    bool finite = true;
    for (const auto& s : samples) {
      if (!s.included) continue;
      any = true;
      if (!std::isfinite(s.defect)) finite = false;
      max_defect = std::max(max_defect, s.defect);
    }
    if (!any) max_defect = 0.0;
    pass = any && finite && max_defect < tolerance;
  }
};

inline void to_json(nlohmann::json& j, const SampleDefect& s) {
  j = {{"index", s.index}, {"x", s.point.x()}, {"y", s.point.y()}, {"defect", s.defect},
       {"included", s.included}};
  if (!s.note.empty()) j["note"] = s.note;
}

inline void to_json(nlohmann::json& j, const VerificationReport& r) {
  j = {{"check", r.check},         {"tolerance", r.tolerance},
       {"max_defect", r.max_defect}, {"pass", r.pass},
       {"included", r.included_count()}, {"samples", r.samples}};
  if (!r.details.empty()) j["details"] = r.details;
}

}  // namespace sutured
