#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffusym/invariants.hpp"
#include "diffusym/verify.hpp"

namespace diffusym {

/// A closed-form solution together with the PDE it solves and the window on
/// which it is verified. Entries are immutable; evaluators are pure.
struct CatalogueEntry {
    std::string name;
    std::string description;
    std::string reference;               // classical name of the object
    std::map<std::string, double> params;
    SpaceTimeFn a, b, c;                  // coefficients of the PDE
    std::optional<CoefficientSet> coeffs; // expression form when representable
    SpaceTimeFn u;                        // the solution
    Grid grid;                            // declared verification window
    std::vector<std::string> notes;
};

/// Names accepted by make_entry and the CLI's --entry flag.
const std::vector<std::string>& catalogue_names();

/// Builds an entry with its default parameters overridden by `overrides`.
/// Throws SpecError for unknown names, unknown parameters, or out-of-range
/// parameter values.
CatalogueEntry make_entry(const std::string& name,
                          const std::map<std::string, double>& overrides = {});

} // namespace diffusym
