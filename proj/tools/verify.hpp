#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "concentra/concentration.hpp"

namespace concentra::cli {

struct VerifyEntry {
    std::string name;
    std::size_t instances = 0;
    std::size_t violations = 0;
    // slack = right side - left side over the tested instances
    double min_slack = 0.0;
    double max_slack = 0.0;
    double seconds = 0.0;
    std::vector<std::string> dumps;
};

struct VerifyReport {
    std::vector<VerifyEntry> entries;
    std::size_t total_violations() const;
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    std::size_t count = 50;  // instances per inequality
    std::size_t exact_limit = default_exact_limit;
    // Replaces Sep with the next pairwise distance below it.
    bool self_test = false;
    std::optional<std::string> dump_dir;
};

VerifyReport run_verify(const VerifyOptions& options);

nlohmann::ordered_json to_json(const VerifyReport& report);

}  // namespace concentra::cli
