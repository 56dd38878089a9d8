#include "mroot/report.hpp"

#include <sstream>

namespace mroot {

using nlohmann::ordered_json;

std::string point_str(std::span<const Scalar> pt) {
    std::string s = "(";
    for (std::size_t i = 0; i < pt.size(); ++i) {
        if (i) s += ", ";
        s += pt[i].str();
    }
    return s + ")";
}

namespace {

ordered_json point_json(std::span<const Scalar> pt) {
    ordered_json arr = ordered_json::array();
    for (const auto& v : pt) arr.push_back(v.str());
    return arr;
}

ordered_json witness_json(const Witness& w) {
    ordered_json j;
    j["index"] = w.index;
    j["residual_leading"] = w.residual_leading;
    if (!w.residual_full.empty()) j["residual"] = w.residual_full;
    return j;
}

std::string index_str(const std::vector<int>& idx) {
    std::string s = "(";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(idx[i]);
    }
    return s + ")";
}

const char* mode_str(Mode m) {
    return m == Mode::exact ? "exact" : "float";
}

}  // namespace

std::string render_classification_text(const ClassificationReport& report) {
    std::ostringstream out;
    out << "classification report (degree " << report.m << ", dimension "
        << report.n << ")\n";
    out << "riemannian: " << verdict_str(report.riemannian);
    if (report.m > 2)
        out << "  (max |C_ijk| sampled = " << double_str(report.cartan_max)
            << ")";
    out << "\n";
    for (const auto& pc : report.points) {
        out << "point " << point_str(pc.point) << " [" << mode_str(pc.mode)
            << (pc.mode_fell_back ? ", fell back from exact" : "") << "]";
        if (pc.degenerate) {
            out << ": error: " << pc.error << "\n";
            continue;
        }
        out << ": berwald=" << verdict_str(pc.berwald)
            << " landsberg=" << verdict_str(pc.landsberg) << "\n";
        if (pc.berwald_detail.witness) {
            const auto& w = *pc.berwald_detail.witness;
            out << "  berwald witness: index " << index_str(w.index)
                << ", residual leading term " << w.residual_leading << "\n";
            if (!w.residual_full.empty())
                out << "  berwald residual: " << w.residual_full << "\n";
        }
        if (pc.landsberg_detail.witness) {
            const auto& w = *pc.landsberg_detail.witness;
            out << "  landsberg witness: T_" << index_str(w.index)
                << "|0, residual leading term " << w.residual_leading << "\n";
            if (!w.residual_full.empty())
                out << "  landsberg residual: " << w.residual_full << "\n";
        }
        if (pc.mechanism_checked)
            out << "  landsberg->berwald mechanism: "
                << (pc.mechanism_ok ? "ok" : "FAILED") << "\n";
    }
    out << "berwald (all points): " << verdict_str(report.berwald_all) << "\n";
    out << "landsberg (all points): " << verdict_str(report.landsberg_all)
        << "\n";
    return out.str();
}

ordered_json classification_json(const ClassificationReport& report) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = "classify";
    j["dimension"] = report.n;
    j["degree"] = report.m;
    j["riemannian"] = verdict_str(report.riemannian);
    j["cartan_max"] = report.cartan_max;
    ordered_json pts = ordered_json::array();
    for (const auto& pc : report.points) {
        ordered_json p;
        p["point"] = point_json(pc.point);
        p["mode"] = mode_str(pc.mode);
        p["fell_back"] = pc.mode_fell_back;
        if (pc.degenerate) {
            p["error"] = pc.error;
        } else {
            p["berwald"] = verdict_str(pc.berwald);
            p["berwald_criteria"] = {
                {"polynomial_spray", pc.berwald_detail.by_polynomiality},
                {"flat_berwald_derivative",
                 pc.berwald_detail.by_flat_derivative}};
            p["landsberg"] = verdict_str(pc.landsberg);
            if (pc.berwald_detail.witness)
                p["berwald_witness"] =
                    witness_json(*pc.berwald_detail.witness);
            if (pc.landsberg_detail.witness)
                p["landsberg_witness"] =
                    witness_json(*pc.landsberg_detail.witness);
            if (pc.mechanism_checked) p["mechanism_ok"] = pc.mechanism_ok;
        }
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
    j["berwald_all"] = verdict_str(report.berwald_all);
    j["landsberg_all"] = verdict_str(report.landsberg_all);
    return j;
}

std::string render_theorem_text(const TheoremReport& report) {
    std::ostringstream out;
    out << "decomposable metric report (dimension " << report.n << ")\n";
    for (const auto& p : report.points) {
        out << "point " << point_str(p.point) << " [" << mode_str(p.mode)
            << (p.mode_fell_back ? ", fell back from exact" : "") << "]\n";
        out << "  berwald (spray polynomial): "
            << (p.p1_spray_polynomial ? "yes" : "no") << "\n";
        out << "  parallel 1-form (nabla b = 0): "
            << (p.p2_parallel ? "yes" : "no") << "\n";
        if (p.p1_spray_polynomial && p.p2_parallel)
            out << "  spray difference B^i: "
                << (p.b_vanishes ? "identically zero" : "NONZERO") << "\n";
        out << "  unit-norm residual: " << double_str(p.unit_norm_residual)
            << "\n";
        out << "  checks: closed-form inverse "
            << (p.closed_inverse_matches_adjugate ? "ok" : "FAILED")
            << ", delta | det " << (p.delta_divides_det ? "ok" : "FAILED")
            << ", spray-difference routes "
            << (p.routes_agree ? "agree" : "DISAGREE") << "\n";
        out << "  identities: y^j r_j(b) = 0 " << (p.aux_y_r_b ? "ok" : "FAILED")
            << ", b^i nabla_j b_i = 0 " << (p.aux_b_nabla_b ? "ok" : "FAILED")
            << ", T^{ij} b_j " << (p.aux_tinv_b ? "ok" : "FAILED")
            << ", T^{ij} a_{.j} " << (p.aux_tinv_adot ? "ok" : "FAILED")
            << "\n";
        if (p.fdiag.factorized) {
            out << "  f-diagnostic: f = " << p.fdiag.f.str()
                << " (residuals: nabla_0 b + a f -> "
                << double_str(p.fdiag.residual_term2)
                << ", b^j r_j(b) - 2bf -> " << double_str(p.fdiag.residual_br)
                << ", coeff-2 -> " << double_str(p.fdiag.residual_coeff2)
                << ", coeff-3 -> " << double_str(p.fdiag.residual_coeff3)
                << ")\n";
        } else {
            out << "  f-diagnostic: no factorization\n";
        }
    }
    out << "berwald at every point: "
        << (report.all_points_berwald ? "yes" : "no") << "\n";
    return out.str();
}

ordered_json theorem_json(const TheoremReport& report) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = "verify-decomp";
    j["dimension"] = report.n;
    ordered_json pts = ordered_json::array();
    for (const auto& p : report.points) {
        ordered_json q;
        q["point"] = point_json(p.point);
        q["mode"] = mode_str(p.mode);
        q["fell_back"] = p.mode_fell_back;
        q["berwald"] = p.p1_spray_polynomial;
        q["parallel_b"] = p.p2_parallel;
        if (p.p1_spray_polynomial && p.p2_parallel)
            q["spray_difference_zero"] = p.b_vanishes;
        q["unit_norm_residual"] = p.unit_norm_residual;
        q["checks"] = {
            {"closed_inverse_matches_adjugate",
             p.closed_inverse_matches_adjugate},
            {"delta_divides_det", p.delta_divides_det},
            {"difference_routes_agree", p.routes_agree},
            {"y_r_b_vanishes", p.aux_y_r_b},
            {"b_nabla_b_vanishes", p.aux_b_nabla_b},
            {"tinv_b_closed_form", p.aux_tinv_b},
            {"tinv_adot_closed_form", p.aux_tinv_adot}};
        ordered_json fd;
        fd["factorized"] = p.fdiag.factorized;
        if (p.fdiag.factorized) {
            fd["f"] = p.fdiag.f.str();
            fd["residual_term2"] = p.fdiag.residual_term2;
            fd["residual_br"] = p.fdiag.residual_br;
            fd["residual_coeff2"] = p.fdiag.residual_coeff2;
            fd["residual_coeff3"] = p.fdiag.residual_coeff3;
        }
        q["f_diagnostic"] = std::move(fd);
        pts.push_back(std::move(q));
    }
    j["points"] = std::move(pts);
    j["berwald_all"] = report.all_points_berwald;
    return j;
}

std::string canonical_fn_str(const RationalFn& f) {
    if (f.num().is_zero()) return "0";
    auto quotient = exact_divide(f.num(), f.den());
    if (quotient) return quotient->str();
    return f.str();
}

}  // namespace mroot
