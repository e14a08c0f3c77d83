/// Shared declarations for the acceptance binary.
#pragma once

#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
    int id{0};
    bool pass{false};
    std::string detail;
};

/// Runs every acceptance criterion; artifacts land under out_dir.
/// Results come back ordered by criterion id.
std::vector<Outcome> run_all(const std::string& out_dir);

} // namespace acceptance
