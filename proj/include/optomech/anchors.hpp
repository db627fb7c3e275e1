#pragma once

// Built-in registry of published reference numbers, each recomputed from the
// library with a fixed tolerance.

#include <functional>
#include <string>
#include <vector>

namespace om::cli {

struct AnchorResult {
    std::string name;
    double computed;
    double reference;
    double tolerance;
    bool relative;  // tolerance relative to |reference|, else absolute
    std::string unit;
    bool passed;
};

struct Anchor {
    std::string name;
    std::string description;
    std::function<double()> compute;
    double reference;
    double tolerance;
    bool relative;
    std::string unit;
};

const std::vector<Anchor>& anchor_registry();

// Throws om::ValidationError for an unknown name.
AnchorResult reproduce(const std::string& name);
AnchorResult evaluate(const Anchor& a);

}  // namespace om::cli
