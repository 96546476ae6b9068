#include "torus/nelder_mead.hpp"

#include <algorithm>
#include <cmath>

namespace torus {

namespace {

using Point = std::array<double, 2>;

Point lerp(const Point& a, const Point& b, double t) {
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

}  // namespace

NelderMeadResult nelder_mead_2d(const std::function<double(Point)>& f, Point start,
                                NelderMeadOptions options) {
    std::array<Point, 3> x = {start, Point{start[0] + options.initial_step, start[1]},
                              Point{start[0], start[1] + options.initial_step}};
    std::array<double, 3> fx = {f(x[0]), f(x[1]), f(x[2])};

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        std::array<int, 3> order = {0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
        const Point best = x[order[0]];
        const Point mid = x[order[1]];
        const Point worst = x[order[2]];
        const double f_best = fx[order[0]];
        const double f_mid = fx[order[1]];
        const double f_worst = fx[order[2]];

        double size = 0.0;
        for (int i : {order[1], order[2]}) {
            size = std::max({size, std::abs(x[i][0] - best[0]), std::abs(x[i][1] - best[1])});
        }
        if (size < options.simplex_tolerance) break;

        const Point centroid = lerp(best, mid, 0.5);
        const Point reflected = lerp(worst, centroid, 2.0);
        const double f_reflected = f(reflected);

        Point replacement = reflected;
        double f_replacement = f_reflected;
        if (f_reflected < f_best) {
            const Point expanded = lerp(worst, centroid, 3.0);
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                replacement = expanded;
                f_replacement = f_expanded;
            }
        } else if (f_reflected >= f_mid) {
            const bool outside = f_reflected < f_worst;
            const Point contracted = outside ? lerp(worst, centroid, 1.5) : lerp(worst, centroid, 0.5);
            const double f_contracted = f(contracted);
            if (f_contracted < std::min(f_reflected, f_worst)) {
                replacement = contracted;
                f_replacement = f_contracted;
            } else {
                // Shrink towards the best vertex.
                for (int i : {order[1], order[2]}) {
                    x[i] = lerp(best, x[i], 0.5);
                    fx[i] = f(x[i]);
                }
                continue;
            }
        }
        x[order[2]] = replacement;
        fx[order[2]] = f_replacement;
    }

    const int best = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
    return {x[best], fx[best], iter};
}

}  // namespace torus
