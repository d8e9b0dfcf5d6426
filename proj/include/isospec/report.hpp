#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace isospec {

/// One measured quantity. A measurement without a tolerance is published
/// for information and does not take part in the verdict.
struct Measurement {
    std::string name;
    double value = 0.0;
    std::optional<double> tolerance;

    bool pass() const { return !tolerance || (std::isfinite(value) && std::abs(value) <= *tolerance); }
};

struct VerificationReport {
    std::string check_id;
    std::string provenance;
    std::vector<Measurement> measured;
    std::vector<std::string> notes;

    VerificationReport() = default;
    VerificationReport(std::string id, std::string claim) : check_id(std::move(id)), provenance(std::move(claim)) {}

    VerificationReport& add(std::string name, double value, std::optional<double> tol = std::nullopt) {
        measured.push_back({std::move(name), value, tol});
        return *this;
    }

    VerificationReport& note(std::string text) {
        notes.push_back(std::move(text));
        return *this;
    }

    bool pass() const {
        for (const auto& m : measured)
            if (!m.pass()) return false;
        return true;
    }

    /// Largest deviation among the graded measurements.
    double worst() const {
        double w = 0.0;
        for (const auto& m : measured)
            if (m.tolerance) w = std::max(w, std::isfinite(m.value) ? std::abs(m.value) : HUGE_VAL);
        return w;
    }

    std::optional<double> value(const std::string& name) const {
        for (const auto& m : measured)
            if (m.name == name) return m.value;
        return std::nullopt;
    }
};

inline nlohmann::ordered_json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["check"] = r.check_id;
    j["verdict"] = r.pass() ? "pass" : "fail";
    j["claim"] = r.provenance;
    auto& m = j["measured"] = nlohmann::ordered_json::array();
    for (const auto& x : r.measured) {
        nlohmann::ordered_json e;
        e["name"] = x.name;
        e["value"] = finite_or_null(x.value);
        e["tolerance"] = x.tolerance ? finite_or_null(*x.tolerance) : nlohmann::ordered_json(nullptr);
        e["pass"] = x.pass();
        m.push_back(std::move(e));
    }
    j["notes"] = r.notes;
    return j;
}

}  // namespace isospec
