#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace smolsim {

using Vec3 = std::array<double, 3>;

// Periodic box [0,L)^d. Positions are stored flat with stride d.
struct PeriodicBox {
    int dim = 1;
    double length = 1.0;

    double wrap(double x) const {
        double y = x - length * std::floor(x / length);
        // floor rounding can land exactly on L
        return y >= length ? y - length : y;
    }

    // minimum-image displacement component
    double min_image(double dx) const {
        return dx - length * std::nearbyint(dx / length);
    }

    double min_image_dist2(const double* a, const double* b) const {
        double r2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            double d = min_image(a[c] - b[c]);
            r2 += d * d;
        }
        return r2;
    }

    double volume() const {
        double v = 1.0;
        for (int c = 0; c < dim; ++c) v *= length;
        return v;
    }
};

}  // namespace smolsim
