#ifndef MROOT_SPECFILE_HPP
#define MROOT_SPECFILE_HPP

#include <string>
#include <variant>
#include <vector>

#include "mroot/decomp.hpp"
#include "mroot/metric.hpp"

namespace mroot {

// Parsed metric spec file: an m-th root coefficient table or a
// decomposable (gamma, b) pair, plus optional base points, mode and
// tolerances.
struct LoadedSpec {
    std::variant<MetricSpec, DecompSpec> spec;
    std::vector<std::vector<Scalar>> points;
    Mode mode = Mode::exact;
    Tolerance tolerance;

    bool is_decomposable() const {
        return std::holds_alternative<DecompSpec>(spec);
    }
    int dimension() const;
    const MetricSpec& metric() const;
    const DecompSpec& decomp() const;
};

// JSON document; see README for the schema.  Throws ParseError for
// malformed JSON and SpecError for structurally invalid specs.
LoadedSpec parse_spec_json(const std::string& text);
LoadedSpec load_spec_file(const std::string& path);

// "v1,v2,...,vn" with exact rational tokens ("1/3", "0.25", "-2").
std::vector<Scalar> parse_point(const std::string& csv, int n);

}  // namespace mroot

#endif
