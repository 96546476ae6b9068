#pragma once

#include <array>
#include <functional>

namespace torus {

struct NelderMeadOptions {
    int max_iterations = 200;
    double simplex_tolerance = 1e-10;  // stop when every vertex is this close to the best one
    double initial_step = 0.05;
};

struct NelderMeadResult {
    std::array<double, 2> x{};
    double value = 0.0;
    int iterations = 0;
};

/// Downhill simplex minimization in two variables.
NelderMeadResult nelder_mead_2d(const std::function<double(std::array<double, 2>)>& f,
                                std::array<double, 2> start, NelderMeadOptions options = {});

}  // namespace torus
