#ifndef IKNO_GRID_HPP
#define IKNO_GRID_HPP

#include <array>
#include <vector>

#include "ikno/tensor.hpp"

namespace ikno::grid {

// Batched field samples on a uniform Cartesian grid, channel-last:
// data is [batch, R_1, ..., R_dx, channels]. dt is the snapshot interval for
// trajectories stored along the channel axis (0 for steady fields).
template <typename T>
struct GridField {
    Tensor<T> data;
    std::vector<double> domain_lo;
    std::vector<double> domain_hi;
    double dt = 0.0;

    std::size_t spatial_rank() const { return data.rank() >= 2 ? data.rank() - 2 : 0; }
    std::size_t batch() const { return data.dim(0); }
    std::size_t channels() const { return data.dim(data.rank() - 1); }
    Shape spatial() const {
        return Shape(data.shape().begin() + 1, data.shape().end() - 1);
    }

    void validate() const;
};

template <typename T>
struct WindowPair {
    Tensor<T> input;   // [batch, R..., T_d]
    Tensor<T> target;  // [batch, R..., T_p]
};

// Target grid description for interpolation/resampling (endpoint-inclusive
// node placement: node i at lo + i*(hi-lo)/(R-1)).
struct GridSpec {
    Shape resolution;
    std::vector<double> lo;
    std::vector<double> hi;
};

// Strided subsampling from index 0; every spatial size must be divisible by
// its factor. Domain bounds, dt and channels unchanged.
template <typename T>
GridField<T> downsample(const GridField<T>& field, const std::vector<std::size_t>& factors);

// Sliding windows over the channel (time) axis: window k covers input
// snapshots [k*stride, k*stride + t_d) and targets the following t_p.
template <typename T>
std::vector<WindowPair<T>> make_windows(const GridField<T>& trajectory, std::size_t t_d,
                                        std::size_t t_p, std::size_t stride = 1);

// Piecewise-linear (simplex) interpolation of 2D scattered samples onto the
// grid nodes; nodes outside the convex hull receive `fill`. Exact on affine
// fields and at nodes coinciding with input points.
template <typename T>
GridField<T> interpolate_to_cartesian(const std::vector<std::array<double, 3>>& points,
                                      const GridSpec& target, T fill);

// Spreads n ordered boundary samples (uniform in arclength around the
// rectangle perimeter, starting at the (lo_x, lo_y) corner, counterclockwise)
// onto the grid's boundary ring by nearest-sample assignment; interior nodes
// receive `fill`.
template <typename T>
GridField<T> resample_boundary_to_channel(const std::vector<T>& boundary_values,
                                          const GridSpec& target, T fill = T(0));

// Arclength parameter in [0, perimeter) of boundary node (i, j); exposed for
// the data generators, which sample boundary curves at these positions.
double boundary_arclength(const GridSpec& spec, std::size_t i, std::size_t j);

}  // namespace ikno::grid

#endif  // IKNO_GRID_HPP
