#pragma once

#include <vector>

#include "density.hpp"
#include "funcspec.hpp"
#include "mat.hpp"

namespace fivol {

// Tensor-grid sample of a convex function on a box; +inf entries mark points
// outside the domain.
struct GridFunction {
    int n = 0;
    Vec lo, hi;
    std::vector<int> res;        // points per axis (>= 2)
    std::vector<double> values;  // row-major, kInf sentinel allowed

    double coord(int axis, int idx) const {
        return lo[axis] + (hi[axis] - lo[axis]) * idx / (res[axis] - 1);
    }
    size_t index(const std::vector<int>& idx) const;
};

GridFunction sample_grid(const SpecPtr& f, const Vec& lo, const Vec& hi,
                         const std::vector<int>& res);

// Discrete Legendre-Fenchel transform onto the given dual grid.
GridFunction grid_conjugate(const GridFunction& g, const Vec& dual_lo, const Vec& dual_hi,
                            const std::vector<int>& dual_res);

// int beta(|x|) det(D^2 g) dx by central differences over interior nodes.
double grid_ma_integral(const GridFunction& g, const Density& beta);

}  // namespace fivol
