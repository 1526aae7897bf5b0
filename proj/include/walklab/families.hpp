#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "walklab/graph.hpp"

namespace walklab {

enum class Family { sierpinski_gasket, vicsek_tree, lattice_box, cycle, path };

Family family_from_string(const std::string& name);
std::string family_name(Family f);

struct FamilySpec {
    Family family = Family::sierpinski_gasket;
    int level_or_size = 1;
    int dimension = 2;           // lattice only
    bool perturb = false;        // multiply each weight by a seeded value in [1/2, 2]
    std::uint64_t seed = 1;
    long long vertex_budget = 2'000'000;
};

/// Predicted vertex count for a family spec (exact).
long long predicted_vertex_count(const FamilySpec& spec);

/// Deterministic generator: unit weights (unless perturbed), canonical
/// vertex numbering, designated boundary set. Throws when the predicted
/// vertex count exceeds the budget.
GraphPtr generate(const FamilySpec& spec);

/// Reference exponents (volume alpha, escape gamma) used by acceptance
/// checks; empty for the control families.
std::optional<std::pair<double, double>> expected_exponents(Family f, int dimension = 2);

namespace detail {
/// Integer coordinates of the gasket construction, in canonical vertex-id
/// order. Exposed for structural tests (self-similarity, independent
/// enumeration).
std::vector<std::pair<long long, long long>> gasket_coordinates(int level);
}  // namespace detail

}  // namespace walklab
