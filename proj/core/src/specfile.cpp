#include "mroot/specfile.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mroot/errors.hpp"

namespace mroot {

using nlohmann::json;

int LoadedSpec::dimension() const {
    return is_decomposable() ? decomp().dimension() : metric().dimension();
}

const MetricSpec& LoadedSpec::metric() const {
    if (is_decomposable())
        throw SpecError("spec file holds a decomposable metric");
    return std::get<MetricSpec>(spec);
}

const DecompSpec& LoadedSpec::decomp() const {
    if (!is_decomposable())
        throw SpecError("spec file holds an m-th root metric");
    return std::get<DecompSpec>(spec);
}

namespace {

Scalar scalar_from_json(const json& v, const std::string& where) {
    if (v.is_string()) {
        Expr e = parse_expr(v.get<std::string>(), 0);
        if (!e.is_constant())
            throw SpecError(where + ": expected a constant value");
        return Scalar(e.constant_value());
    }
    if (v.is_number_integer()) return Scalar(Rational(v.get<long>()));
    if (v.is_number_float()) {
        Rational q;
        mpq_set_d(q.get_mpq_t(), v.get<double>());
        return Scalar(q);
    }
    throw SpecError(where + ": expected a number or a numeric string");
}

Expr expr_from_json(const json& v, int n, const std::string& where) {
    if (!v.is_string())
        throw SpecError(where + ": expected an expression string");
    try {
        return parse_expr(v.get<std::string>(), n);
    } catch (const ParseError& e) {
        throw SpecError(where + ": " + e.what());
    }
}

MultiIndex index_from_json(const json& v, const std::string& where) {
    if (!v.is_array())
        throw SpecError(where + ": expected an index array");
    MultiIndex idx;
    for (const auto& entry : v) {
        if (!entry.is_number_integer())
            throw SpecError(where + ": index entries must be integers");
        idx.push_back(entry.get<int>());
    }
    return idx;
}

}  // namespace

LoadedSpec parse_spec_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("spec file: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) throw SpecError("spec file: top level must be an object");
    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw SpecError("spec file: missing \"kind\"");
    std::string kind = doc["kind"].get<std::string>();
    if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
        throw SpecError("spec file: missing integer \"dimension\"");
    int n = doc["dimension"].get<int>();

    LoadedSpec loaded{MetricSpec(2, 2), {}, Mode::exact, Tolerance{}};
    if (kind == "mth-root") {
        int m = 3;
        if (doc.contains("degree")) {
            if (!doc["degree"].is_number_integer())
                throw SpecError("spec file: \"degree\" must be an integer");
            m = doc["degree"].get<int>();
        }
        MetricSpec spec(n, m);
        if (!doc.contains("coefficients") || !doc["coefficients"].is_array())
            throw SpecError("spec file: missing \"coefficients\" array");
        std::size_t pos = 0;
        for (const auto& c : doc["coefficients"]) {
            std::string where = "coefficients[" + std::to_string(pos++) + "]";
            if (!c.is_object() || !c.contains("index") || !c.contains("expr"))
                throw SpecError(where + ": expected {\"index\", \"expr\"}");
            spec.set_coefficient(index_from_json(c["index"], where),
                                 expr_from_json(c["expr"], n, where));
        }
        loaded.spec = std::move(spec);
    } else if (kind == "decomposable") {
        DecompSpec spec(n);
        if (!doc.contains("gamma") || !doc["gamma"].is_array())
            throw SpecError("spec file: missing \"gamma\" array");
        std::size_t pos = 0;
        for (const auto& c : doc["gamma"]) {
            std::string where = "gamma[" + std::to_string(pos++) + "]";
            if (!c.is_object() || !c.contains("index") || !c.contains("expr"))
                throw SpecError(where + ": expected {\"index\", \"expr\"}");
            MultiIndex idx = index_from_json(c["index"], where);
            if (idx.size() != 2)
                throw SpecError(where + ": gamma indices have two entries");
            spec.set_gamma(idx[0], idx[1],
                           expr_from_json(c["expr"], n, where));
        }
        if (!doc.contains("b") || !doc["b"].is_array() ||
            static_cast<int>(doc["b"].size()) != n)
            throw SpecError("spec file: \"b\" must list n expressions");
        for (int i = 0; i < n; ++i)
            spec.set_b(i + 1, expr_from_json(doc["b"][i],
                                             n, "b[" + std::to_string(i) + "]"));
        loaded.spec = std::move(spec);
    } else {
        throw SpecError("spec file: kind must be \"mth-root\" or "
                        "\"decomposable\"");
    }

    if (doc.contains("points")) {
        if (!doc["points"].is_array())
            throw SpecError("spec file: \"points\" must be an array");
        std::size_t pos = 0;
        for (const auto& p : doc["points"]) {
            std::string where = "points[" + std::to_string(pos++) + "]";
            if (!p.is_array() || static_cast<int>(p.size()) != n)
                throw SpecError(where + ": expected " + std::to_string(n) +
                                " coordinates");
            std::vector<Scalar> pt;
            for (const auto& coord : p)
                pt.push_back(scalar_from_json(coord, where));
            loaded.points.push_back(std::move(pt));
        }
    }
    if (doc.contains("mode")) {
        std::string mode = doc["mode"].get<std::string>();
        if (mode == "exact")
            loaded.mode = Mode::exact;
        else if (mode == "float")
            loaded.mode = Mode::floating;
        else
            throw SpecError("spec file: mode must be \"exact\" or \"float\"");
    }
    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        if (t.contains("abs")) loaded.tolerance.eps_abs = t["abs"].get<double>();
        if (t.contains("rel")) loaded.tolerance.eps_rel = t["rel"].get<double>();
    }
    return loaded;
}

LoadedSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec_json(buf.str());
}

std::vector<Scalar> parse_point(const std::string& csv, int n) {
    std::vector<Scalar> pt;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        std::string token = csv.substr(
            start, comma == std::string::npos ? std::string::npos
                                              : comma - start);
        if (token.find_first_not_of(" \t") == std::string::npos)
            throw SpecError("point: empty coordinate in \"" + csv + "\"");
        try {
            Expr e = parse_expr(token, 0);
            if (!e.is_constant())
                throw SpecError("point: coordinate is not a constant: " +
                                token);
            pt.push_back(Scalar(e.constant_value()));
        } catch (const ParseError& e) {
            throw SpecError("point: bad coordinate \"" + token +
                            "\": " + e.what());
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (static_cast<int>(pt.size()) != n)
        throw SpecError("point: expected " + std::to_string(n) +
                        " coordinates, got " + std::to_string(pt.size()));
    return pt;
}

}  // namespace mroot
