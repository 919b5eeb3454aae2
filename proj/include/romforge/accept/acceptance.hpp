#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace romforge::accept {

enum class Level { Quick, Full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceReport {
    Level level = Level::Full;
    std::vector<CriterionResult> results;

    int failures() const;
};

// ============================================================================
// Acceptance ladder: one result per criterion, streamed as a pass/fail line
// with the measured values. Quick level shrinks the meshes and skips the
// checks that are pinned to the reference discretizations; it never relaxes
// a tolerance.
// ============================================================================
AcceptanceReport run_acceptance(Level level, std::ostream& os);

Level level_from_string(const std::string& name);

} // namespace romforge::accept
