#ifndef MROOT_REPORT_HPP
#define MROOT_REPORT_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "mroot/classify.hpp"
#include "mroot/decomp.hpp"

namespace mroot {

inline constexpr int kReportSchemaVersion = 1;

std::string point_str(std::span<const Scalar> pt);

std::string render_classification_text(const ClassificationReport& report);
nlohmann::ordered_json classification_json(const ClassificationReport& report);

std::string render_theorem_text(const TheoremReport& report);
nlohmann::ordered_json theorem_json(const TheoremReport& report);

// Canonical string for spray-like rational functions: reduced to a
// polynomial when the denominator divides the numerator exactly.
std::string canonical_fn_str(const RationalFn& f);

}  // namespace mroot

#endif
