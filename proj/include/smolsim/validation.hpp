#pragma once

#include <string>
#include <vector>

namespace smolsim {

// Collects invariant violations instead of aborting; callers decide.
struct ValidationReport {
    std::vector<std::string> issues;

    bool ok() const { return issues.empty(); }
    void fail(std::string msg) { issues.push_back(std::move(msg)); }
    std::string joined() const {
        std::string s;
        for (const auto& m : issues) {
            if (!s.empty()) s += "; ";
            s += m;
        }
        return s;
    }
};

}  // namespace smolsim
