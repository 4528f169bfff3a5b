#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "smolsim/geometry.hpp"

namespace smolsim {

// Uniform periodic grid holding one density field per species.
// Nodes sit at cell centers x_i = (i + 1/2) * spacing per axis; integrals
// are rectangle-rule sums over cells.
struct GridField {
    int dim = 1;
    int nodes_per_axis = 0;
    double length = 1.0;
    std::vector<std::vector<double>> values;  // [species][node]

    GridField() = default;
    GridField(int d, int n, double box_length, int species)
        : dim(d), nodes_per_axis(n), length(box_length),
          values(species, std::vector<double>(node_count_of(d, n), 0.0)) {}

    static std::size_t node_count_of(int d, int n) {
        std::size_t c = 1;
        for (int i = 0; i < d; ++i) c *= static_cast<std::size_t>(n);
        return c;
    }

    int species_count() const { return static_cast<int>(values.size()); }
    std::size_t node_count() const { return values.empty() ? 0 : values[0].size(); }
    double spacing() const { return length / nodes_per_axis; }
    double cell_volume() const {
        double v = 1.0;
        for (int c = 0; c < dim; ++c) v *= spacing();
        return v;
    }

    // multi-index of a flat node id, and node-center coordinates
    void node_coord(std::size_t node, double* x) const {
        std::size_t rem = node;
        for (int c = 0; c < dim; ++c) {
            int i = static_cast<int>(rem % nodes_per_axis);
            rem /= nodes_per_axis;
            x[c] = (i + 0.5) * spacing();
        }
    }

    std::size_t node_index(const int* idx) const {
        std::size_t flat = 0;
        for (int c = dim - 1; c >= 0; --c) {
            int i = idx[c] % nodes_per_axis;
            if (i < 0) i += nodes_per_axis;
            flat = flat * nodes_per_axis + i;
        }
        return flat;
    }

    // rectangle-rule integral of one species field
    double integral(int species) const {
        double s = 0.0;
        for (double v : values[species]) s += v;
        return s * cell_volume();
    }

    PeriodicBox box() const { return PeriodicBox{dim, length}; }
};

}  // namespace smolsim
