// Runs every acceptance criterion at full size and prints one line per criterion.

#include <iostream>

#include "torus/verify.hpp"

int main() {
    const auto results = torus::run_acceptance({}, std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
