#include "susyq/report.hpp"

#include <algorithm>
#include <cmath>

namespace susyq {

Check Check::make(std::string name, double residual, double tolerance) {
    Check c{std::move(name), residual, tolerance, false};
    c.pass = std::isfinite(residual) && residual <= tolerance;
    return c;
}

nlohmann::json Check::to_json() const {
    nlohmann::json j;
    j["check"] = name;
    j["residual"] = std::isfinite(residual) ? nlohmann::json(residual) : nlohmann::json(nullptr);
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    return j;
}

Check& Report::add(std::string name, double residual, double tolerance) {
    return add(Check::make(std::move(name), residual, tolerance));
}

Check& Report::add(Check c) {
    checks_.push_back(std::move(c));
    return checks_.back();
}

void Report::merge(const Report& other, const std::string& prefix) {
    for (Check c : other.checks_) {
        if (!prefix.empty()) c.name = prefix + ": " + c.name;
        checks_.push_back(std::move(c));
    }
    for (const auto& n : other.notes_) notes_.push_back(prefix.empty() ? n : prefix + ": " + n);
}

bool Report::all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

double Report::worst_ratio() const {
    double worst = 0.0;
    for (const auto& c : checks_) {
        const double r = c.tolerance > 0 ? c.residual / c.tolerance : (c.pass ? 0.0 : INFINITY);
        if (std::isnan(r)) return INFINITY;
        worst = std::max(worst, r);
    }
    return worst;
}

const Check* Report::find(const std::string& name) const {
    for (const auto& c : checks_)
        if (c.name == name) return &c;
    return nullptr;
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    if (!title_.empty()) j["title"] = title_;
    j["pass"] = all_pass();
    auto& arr = j["checks"] = nlohmann::json::array();
    for (const auto& c : checks_) arr.push_back(c.to_json());
    j["notes"] = notes_;
    return j;
}

}  // namespace susyq
