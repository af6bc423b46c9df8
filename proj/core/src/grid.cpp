#include "ikno/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ikno/errors.hpp"

namespace ikno::grid {

template <typename T>
void GridField<T>::validate() const {
    if (data.rank() < 3)
        throw ShapeError("grid field needs [batch, space..., channels], got " +
                         shape_str(data.shape()));
    if (batch() < 1) throw ShapeError("grid field batch must be >= 1");
    if (channels() < 1) throw ShapeError("grid field channels must be >= 1");
    for (std::size_t a = 1; a + 1 < data.rank(); ++a)
        if (data.dim(a) < 2)
            throw ShapeError("grid field spatial axis " + std::to_string(a - 1) +
                             " has resolution " + std::to_string(data.dim(a)) + " (need >= 2)");
    if (domain_lo.size() != spatial_rank() || domain_hi.size() != spatial_rank())
        throw ShapeError("grid field domain bounds rank mismatch");
    for (std::size_t a = 0; a < spatial_rank(); ++a)
        if (!(domain_hi[a] > domain_lo[a]))
            throw InputError("grid field domain axis " + std::to_string(a) +
                             " has hi <= lo");
    if (!data.all_finite()) throw NumericError("grid field contains non-finite values");
}

template <typename T>
GridField<T> downsample(const GridField<T>& field, const std::vector<std::size_t>& factors) {
    field.validate();
    const std::size_t dx = field.spatial_rank();
    if (factors.size() != dx)
        throw ShapeError("downsample: " + std::to_string(factors.size()) + " factors for " +
                         std::to_string(dx) + " spatial axes");
    const Shape res = field.spatial();
    Shape out_res(dx);
    for (std::size_t a = 0; a < dx; ++a) {
        if (factors[a] == 0) throw InputError("downsample: factor must be positive");
        if (res[a] % factors[a] != 0)
            throw ShapeError("downsample: resolution " + std::to_string(res[a]) +
                             " not divisible by factor " + std::to_string(factors[a]));
        out_res[a] = res[a] / factors[a];
    }

    const std::size_t b_n = field.batch();
    const std::size_t ch = field.channels();
    Shape out_shape{b_n};
    out_shape.insert(out_shape.end(), out_res.begin(), out_res.end());
    out_shape.push_back(ch);

    GridField<T> out{Tensor<T>(out_shape), field.domain_lo, field.domain_hi, field.dt};
    const auto in_strides = strides_of(field.data.shape());
    const auto out_strides = strides_of(out_shape);

    std::vector<std::size_t> idx(dx, 0);
    const std::size_t cells = numel(out_res);
    for (std::size_t b = 0; b < b_n; ++b) {
        idx.assign(dx, 0);
        for (std::size_t cell = 0; cell < cells; ++cell) {
            std::size_t src = b * in_strides[0];
            std::size_t dst = b * out_strides[0];
            for (std::size_t a = 0; a < dx; ++a) {
                src += idx[a] * factors[a] * in_strides[a + 1];
                dst += idx[a] * out_strides[a + 1];
            }
            std::copy_n(field.data.data() + src, ch, out.data.data() + dst);
            for (std::size_t a = dx; a-- > 0;) {
                if (++idx[a] < out_res[a]) break;
                idx[a] = 0;
            }
        }
    }
    return out;
}

template <typename T>
std::vector<WindowPair<T>> make_windows(const GridField<T>& trajectory, std::size_t t_d,
                                        std::size_t t_p, std::size_t stride) {
    trajectory.validate();
    if (t_d < 1 || t_p < 1) throw InputError("make_windows: t_d and t_p must be >= 1");
    if (stride < 1) throw InputError("make_windows: stride must be >= 1");
    const std::size_t total = trajectory.channels();
    if (total < t_d + t_p)
        throw InputError("make_windows: trajectory has " + std::to_string(total) +
                         " snapshots, need at least " + std::to_string(t_d + t_p));

    const std::size_t count = (total - t_d - t_p) / stride + 1;
    const std::size_t fibers = trajectory.data.size() / total;

    Shape base(trajectory.data.shape().begin(), trajectory.data.shape().end() - 1);
    std::vector<WindowPair<T>> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t start = k * stride;
        Shape in_shape = base, tg_shape = base;
        in_shape.push_back(t_d);
        tg_shape.push_back(t_p);
        WindowPair<T>& w = out[k];
        w.input = Tensor<T>(in_shape);
        w.target = Tensor<T>(tg_shape);
        for (std::size_t f = 0; f < fibers; ++f) {
            const T* src = trajectory.data.data() + f * total + start;
            std::copy_n(src, t_d, w.input.data() + f * t_d);
            std::copy_n(src + t_d, t_p, w.target.data() + f * t_p);
        }
    }
    return out;
}

namespace {

struct Tri {
    std::size_t a, b, c;
};

bool in_circumcircle(const std::vector<std::array<double, 2>>& p, const Tri& t,
                     const std::array<double, 2>& q) {
    const double ax = p[t.a][0] - q[0], ay = p[t.a][1] - q[1];
    const double bx = p[t.b][0] - q[0], by = p[t.b][1] - q[1];
    const double cx = p[t.c][0] - q[0], cy = p[t.c][1] - q[1];
    const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                       (bx * bx + by * by) * (ax * cy - cx * ay) +
                       (cx * cx + cy * cy) * (ax * by - bx * ay);
    return det > 0.0;
}

double orient(const std::array<double, 2>& a, const std::array<double, 2>& b,
              const std::array<double, 2>& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// Bowyer-Watson triangulation of distinct 2D points. Returns triangles as
// vertex index triples, counterclockwise.
std::vector<Tri> delaunay(std::vector<std::array<double, 2>> pts) {
    const std::size_t n = pts.size();
    double lo_x = pts[0][0], hi_x = pts[0][0], lo_y = pts[0][1], hi_y = pts[0][1];
    for (const auto& p : pts) {
        lo_x = std::min(lo_x, p[0]);
        hi_x = std::max(hi_x, p[0]);
        lo_y = std::min(lo_y, p[1]);
        hi_y = std::max(hi_y, p[1]);
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1.0});
    const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
    pts.push_back({cx - 20.0 * span, cy - 10.0 * span});
    pts.push_back({cx + 20.0 * span, cy - 10.0 * span});
    pts.push_back({cx, cy + 20.0 * span});

    std::vector<Tri> tris{{n, n + 1, n + 2}};
    for (std::size_t ip = 0; ip < n; ++ip) {
        const auto& q = pts[ip];
        std::vector<Tri> keep;
        std::map<std::pair<std::size_t, std::size_t>, int> edge_count;
        auto add_edge = [&](std::size_t u, std::size_t v) {
            auto key = std::minmax(u, v);
            edge_count[{key.first, key.second}]++;
        };
        std::vector<std::array<std::size_t, 2>> cavity_edges;
        for (const Tri& t : tris) {
            if (in_circumcircle(pts, t, q)) {
                add_edge(t.a, t.b);
                add_edge(t.b, t.c);
                add_edge(t.c, t.a);
                cavity_edges.push_back({t.a, t.b});
                cavity_edges.push_back({t.b, t.c});
                cavity_edges.push_back({t.c, t.a});
            } else {
                keep.push_back(t);
            }
        }
        tris = std::move(keep);
        for (const auto& e : cavity_edges) {
            auto key = std::minmax(e[0], e[1]);
            if (edge_count[{key.first, key.second}] != 1) continue;  // interior cavity edge
            Tri t{e[0], e[1], ip};
            if (orient(pts[t.a], pts[t.b], pts[t.c]) < 0.0) std::swap(t.b, t.c);
            tris.push_back(t);
        }
    }
    std::vector<Tri> out;
    for (const Tri& t : tris)
        if (t.a < n && t.b < n && t.c < n) out.push_back(t);
    return out;
}

}  // namespace

template <typename T>
GridField<T> interpolate_to_cartesian(const std::vector<std::array<double, 3>>& points,
                                      const GridSpec& target, T fill) {
    if (points.empty()) throw InputError("interpolate_to_cartesian: empty point set");
    if (target.resolution.size() != 2 || target.lo.size() != 2 || target.hi.size() != 2)
        throw ShapeError("interpolate_to_cartesian: only 2D targets are supported");
    if (points.size() < 3)
        throw InputError("interpolate_to_cartesian: need at least 3 points");

    std::vector<std::array<double, 2>> coords(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        coords[i] = {points[i][0], points[i][1]};
        for (std::size_t j = 0; j < i; ++j)
            if (coords[j][0] == coords[i][0] && coords[j][1] == coords[i][1])
                throw InputError("interpolate_to_cartesian: duplicate point");
    }
    const std::vector<Tri> tris = delaunay(coords);
    if (tris.empty())
        throw InputError("interpolate_to_cartesian: points are collinear, no triangulation");

    const std::size_t r1 = target.resolution[0], r2 = target.resolution[1];
    GridField<T> out{Tensor<T>({1, r1, r2, 1}), target.lo, target.hi, 0.0};
    const double hx = (target.hi[0] - target.lo[0]) / static_cast<double>(r1 - 1);
    const double hy = (target.hi[1] - target.lo[1]) / static_cast<double>(r2 - 1);
    const double coincide_tol =
        1e-13 * std::max({std::abs(target.hi[0] - target.lo[0]),
                          std::abs(target.hi[1] - target.lo[1]), 1.0});
    constexpr double bary_tol = 1e-9;

    for (std::size_t i = 0; i < r1; ++i) {
        for (std::size_t j = 0; j < r2; ++j) {
            const double px = target.lo[0] + static_cast<double>(i) * hx;
            const double py = target.lo[1] + static_cast<double>(j) * hy;
            T value = fill;
            bool hit = false;
            for (std::size_t k = 0; k < points.size(); ++k) {
                if (std::abs(coords[k][0] - px) <= coincide_tol &&
                    std::abs(coords[k][1] - py) <= coincide_tol) {
                    value = static_cast<T>(points[k][2]);
                    hit = true;
                    break;
                }
            }
            if (!hit) {
                for (const Tri& t : tris) {
                    const auto& a = coords[t.a];
                    const auto& b = coords[t.b];
                    const auto& c = coords[t.c];
                    const double den = (b[1] - c[1]) * (a[0] - c[0]) + (c[0] - b[0]) * (a[1] - c[1]);
                    if (den == 0.0) continue;
                    const double l1 =
                        ((b[1] - c[1]) * (px - c[0]) + (c[0] - b[0]) * (py - c[1])) / den;
                    const double l2 =
                        ((c[1] - a[1]) * (px - c[0]) + (a[0] - c[0]) * (py - c[1])) / den;
                    const double l3 = 1.0 - l1 - l2;
                    if (l1 >= -bary_tol && l2 >= -bary_tol && l3 >= -bary_tol) {
                        value = static_cast<T>(l1 * points[t.a][2] + l2 * points[t.b][2] +
                                               l3 * points[t.c][2]);
                        hit = true;
                        break;
                    }
                }
            }
            out.data[i * r2 + j] = value;
        }
    }
    return out;
}

double boundary_arclength(const GridSpec& spec, std::size_t i, std::size_t j) {
    const std::size_t r1 = spec.resolution[0], r2 = spec.resolution[1];
    const double lx = spec.hi[0] - spec.lo[0];
    const double ly = spec.hi[1] - spec.lo[1];
    const double hx = lx / static_cast<double>(r1 - 1);
    const double hy = ly / static_cast<double>(r2 - 1);
    if (j == 0) return static_cast<double>(i) * hx;                                   // bottom
    if (i == r1 - 1) return lx + static_cast<double>(j) * hy;                         // right
    if (j == r2 - 1) return lx + ly + static_cast<double>(r1 - 1 - i) * hx;           // top
    if (i == 0) return 2.0 * lx + ly + static_cast<double>(r2 - 1 - j) * hy;          // left
    throw InputError("boundary_arclength: node (" + std::to_string(i) + "," +
                     std::to_string(j) + ") is not on the boundary");
}

template <typename T>
GridField<T> resample_boundary_to_channel(const std::vector<T>& boundary_values,
                                          const GridSpec& target, T fill) {
    if (boundary_values.size() < 2)
        throw InputError("resample_boundary_to_channel: need at least 2 boundary samples");
    if (target.resolution.size() != 2)
        throw ShapeError("resample_boundary_to_channel: only 2D targets are supported");

    const std::size_t r1 = target.resolution[0], r2 = target.resolution[1];
    const double perimeter =
        2.0 * ((target.hi[0] - target.lo[0]) + (target.hi[1] - target.lo[1]));
    const std::size_t n = boundary_values.size();

    GridField<T> out{Tensor<T>({1, r1, r2, 1}), target.lo, target.hi, 0.0};
    for (std::size_t i = 0; i < r1; ++i) {
        for (std::size_t j = 0; j < r2; ++j) {
            T value = fill;
            if (i == 0 || i == r1 - 1 || j == 0 || j == r2 - 1) {
                const double t = boundary_arclength(target, i, j);
                double best = perimeter;
                std::size_t best_k = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double s = perimeter * static_cast<double>(k) / static_cast<double>(n);
                    double d = std::abs(t - s);
                    d = std::min(d, perimeter - d);
                    if (d < best) {
                        best = d;
                        best_k = k;
                    }
                }
                value = boundary_values[best_k];
            }
            out.data[i * r2 + j] = value;
        }
    }
    return out;
}

template struct GridField<float>;
template struct GridField<double>;
template GridField<float> downsample<float>(const GridField<float>&,
                                            const std::vector<std::size_t>&);
template GridField<double> downsample<double>(const GridField<double>&,
                                              const std::vector<std::size_t>&);
template std::vector<WindowPair<float>> make_windows<float>(const GridField<float>&, std::size_t,
                                                            std::size_t, std::size_t);
template std::vector<WindowPair<double>> make_windows<double>(const GridField<double>&,
                                                              std::size_t, std::size_t,
                                                              std::size_t);
template GridField<float> interpolate_to_cartesian<float>(
    const std::vector<std::array<double, 3>>&, const GridSpec&, float);
template GridField<double> interpolate_to_cartesian<double>(
    const std::vector<std::array<double, 3>>&, const GridSpec&, double);
template GridField<float> resample_boundary_to_channel<float>(const std::vector<float>&,
                                                              const GridSpec&, float);
template GridField<double> resample_boundary_to_channel<double>(const std::vector<double>&,
                                                                const GridSpec&, double);

}  // namespace ikno::grid
