#pragma once

#include <map>
#include <optional>
#include <string>

#include "diffusym/classify.hpp"
#include "diffusym/invariants.hpp"

namespace diffusym {

/// Parsed .pde problem file (INI-like; see README for the format).
struct PdeSpec {
    CoefficientSet coeffs;
    WorkingDomain domain;
    ClassifyOptions classify_options;
    std::optional<std::string> verify_entry;
    std::map<std::string, double> verify_params;
    // raw key/value echo, per section, in file order
    std::map<std::string, std::map<std::string, std::string>> raw;
};

PdeSpec parse_pde_spec_text(const std::string& text, const std::string& origin = "<string>");
PdeSpec load_pde_spec(const std::string& path);

} // namespace diffusym
