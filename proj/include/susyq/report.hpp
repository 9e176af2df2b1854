#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace susyq {

/// One verified quantity. pass is residual <= tolerance unless set explicitly.
struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    static Check make(std::string name, double residual, double tolerance);
    nlohmann::json to_json() const;
};

class Report {
public:
    explicit Report(std::string title = {}) : title_(std::move(title)) {}

    const std::string& title() const noexcept { return title_; }

    Check& add(std::string name, double residual, double tolerance);
    Check& add(Check c);
    void note(std::string text) { notes_.push_back(std::move(text)); }
    void merge(const Report& other, const std::string& prefix = {});

    const std::vector<Check>& checks() const noexcept { return checks_; }
    const std::vector<std::string>& notes() const noexcept { return notes_; }
    bool all_pass() const;
    /// Largest residual/tolerance ratio, 0 when empty.
    double worst_ratio() const;
    const Check* find(const std::string& name) const;

    nlohmann::json to_json() const;

private:
    std::string title_;
    std::vector<Check> checks_;
    std::vector<std::string> notes_;
};

}  // namespace susyq
