#pragma once

// Experiment manifests: flat "key = value" lines grouped under the sections
// [lattice], [grid], [solver] and [experiment]. '#' starts a comment.
//
//   [lattice]
//   preset = hexagonal          # or: xi = x y / eta = x y
//   [grid]
//   n1 = 128
//   n2 = 128
//   [solver]
//   dt = 0.01
//   t_end = 20
//   diag_stride = 10
//   dealias = two_thirds        # or: none
//   integrator = rk4
//   [experiment]
//   coeffs = 1 0 1 0 1 0
//   epsilon = 0.001 0.01
//   seeds = 1 2 3 4 5
//   p_norm = 2
//   output_dir = out
//   snapshot_times = 5 10

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "torus/euler.hpp"
#include "torus/lattice.hpp"

namespace torus {

struct ExperimentManifest {
    std::string preset = "hexagonal";
    std::optional<Vec2> xi;  // explicit basis, overrides the preset when both are set
    std::optional<Vec2> eta;
    int n1 = 128;
    int n2 = 128;
    double dt = 1e-2;
    double t_end = 20.0;
    int diag_stride = 10;
    Dealias dealias = Dealias::TwoThirds;
    std::string coeffs;
    std::vector<double> epsilons{1e-2};
    std::vector<std::uint64_t> seeds{1};
    double p_norm = 2.0;
    std::string output_dir = "out";
    std::vector<double> snapshot_times;

    LatticeBasis basis() const;
    Grid grid() const;
    SolverConfig solver_config() const;

    friend bool operator==(const ExperimentManifest&, const ExperimentManifest&) = default;
};

/// Throws ConfigError with the offending line number on unknown sections or
/// keys and on malformed values.
ExperimentManifest parse_manifest(const std::string& text);
std::string emit_manifest(const ExperimentManifest& m);
ExperimentManifest load_manifest(const std::filesystem::path& path);

}  // namespace torus
