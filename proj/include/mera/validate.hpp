#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mera/model.hpp"
#include "mera/network.hpp"

namespace mera {

struct Diagnostic {
    std::string where; // e.g. "nodes[3].cpu_capacity"
    std::string what;
};

/// A scenario that passed every invariant check, bundled with its routing.
struct ValidatedScenario {
    Scenario scenario;
    Network network;
};

using ValidationResult = std::variant<ValidatedScenario, std::vector<Diagnostic>>;

ValidationResult validate_scenario(Scenario scenario);

// All diagnostics for a scenario; empty when it is well-formed.
std::vector<Diagnostic> check_scenario(const Scenario& scenario);

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics);

} // namespace mera
