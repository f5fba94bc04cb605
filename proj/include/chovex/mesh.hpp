#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "chovex/common.hpp"

namespace chovex {

/// Bounded domain in dimension 1 or 2: an axis-aligned box or a ball
/// (realized as an indicator on the grid).
struct DomainSpec {
    enum class Shape { Box, Ball };

    int dim = 1;
    Shape shape = Shape::Box;
    std::array<double, 2> lo{0.0, 0.0};      // box corners
    std::array<double, 2> hi{1.0, 1.0};
    std::array<double, 2> center{0.0, 0.0};  // ball
    double radius = 1.0;

    static DomainSpec box1d(double a, double b) {
        DomainSpec d;
        d.dim = 1;
        d.lo = {a, 0.0};
        d.hi = {b, 0.0};
        return d;
    }
    static DomainSpec box2d(double ax, double ay, double bx, double by) {
        DomainSpec d;
        d.dim = 2;
        d.shape = Shape::Box;
        d.lo = {ax, ay};
        d.hi = {bx, by};
        return d;
    }
    static DomainSpec ball(int dim, std::array<double, 2> c, double r) {
        DomainSpec d;
        d.dim = dim;
        d.shape = Shape::Ball;
        d.center = c;
        d.radius = r;
        d.lo = {c[0] - r, c[1] - r};
        d.hi = {c[0] + r, c[1] + r};
        return d;
    }

    /// Euclidean diameter of the bounding box (exact diameter for balls).
    double diameter() const {
        if (shape == Shape::Ball) return 2.0 * radius;
        double d2 = 0.0;
        for (int k = 0; k < dim; ++k) d2 += (hi[k] - lo[k]) * (hi[k] - lo[k]);
        return std::sqrt(d2);
    }

    bool contains(const double* x) const {
        if (shape == Shape::Ball) {
            double d2 = 0.0;
            for (int k = 0; k < dim; ++k) d2 += (x[k] - center[k]) * (x[k] - center[k]);
            return d2 < radius * radius;
        }
        for (int k = 0; k < dim; ++k)
            if (x[k] < lo[k] || x[k] >= hi[k]) return false;
        return true;
    }
};

/// Uniform cell-centered grid over a padded box around the domain.
/// Nodes are cell centers; the first `insideCount` nodes lie in the domain,
/// the rest form the complement ring out to the padding radius.
struct Mesh {
    int dim = 1;
    int nPerAxis = 0;        // cells per axis across the domain bounding box
    double h = 0.0;          // uniform spacing
    double cellVolume = 0.0; // h^dim
    double padRadius = 0.0;  // padFactor * diam(domain)
    DomainSpec domain;

    std::size_t insideCount = 0;
    std::vector<double> coords;              // node coordinates, stride == dim
    std::vector<std::array<int, 2>> lattice; // integer lattice index per node

    std::size_t node_count() const { return coords.size() / dim; }
    const double* point(std::size_t i) const { return coords.data() + i * dim; }
    bool is_inside(std::size_t i) const { return i < insideCount; }

    /// Inside-node neighbor along +/- each axis, or -1 when the neighbor is
    /// not an inside node.  Used by the smoothing passes of the samplers.
    std::vector<std::array<int, 4>> insideNeighbors;

    std::string summary() const {
        return "mesh N=" + std::to_string(dim) + " n=" + std::to_string(nPerAxis) +
               " h=" + fmt_double(h) + " inside=" + std::to_string(insideCount) +
               " Rpad=" + fmt_double(padRadius);
    }
};

/// Weight of an off-diagonal node pair in double-sum quadrature; diagonal
/// pairs are punctured and carry weight 0 by contract.
inline double pair_weight(const Mesh& mesh, std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    return mesh.cellVolume * mesh.cellVolume;
}

inline double distance(const Mesh& mesh, std::size_t i, std::size_t j) {
    const double* a = mesh.point(i);
    const double* b = mesh.point(j);
    double d2 = 0.0;
    for (int k = 0; k < mesh.dim; ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(d2);
}

/// Surface measure of the unit sphere boundary in dimension N (sigma_{N-1}).
inline double unit_sphere_measure(int dim) {
    return dim == 1 ? 2.0 : 2.0 * 3.14159265358979323846;
}

/// Build the uniform grid: `n` cells per axis across the domain bounding
/// box, complement ring out to padFactor * diam(domain) beyond it.
inline Mesh build_mesh(const DomainSpec& spec, int n, double padFactor) {
    require(spec.dim == 1 || spec.dim == 2, "mesh: dimension must be 1 or 2");
    require(n >= 4, "mesh: need at least 4 cells per axis");
    require(padFactor >= 1.0, "mesh: padFactor must be >= 1");

    Mesh m;
    m.dim = spec.dim;
    m.nPerAxis = n;
    m.domain = spec;

    const double side0 = spec.hi[0] - spec.lo[0];
    require(side0 > 0, "mesh: degenerate domain");
    m.h = side0 / n;
    if (spec.dim == 2) {
        const double side1 = spec.hi[1] - spec.lo[1];
        require(std::fabs(side1 - side0) < 1e-12 * std::fabs(side0),
                "mesh: 2D bounding box must be square (uniform spacing)");
    }
    m.cellVolume = std::pow(m.h, spec.dim);
    m.padRadius = padFactor * spec.diameter();

    const int padCells = int(std::ceil(m.padRadius / m.h - 1e-12));
    const int lo = -padCells;
    const int hiA = n + padCells;  // exclusive

    // two passes: inside nodes first, then the ring, both in lattice scan order
    std::vector<double> ringCoords;
    std::vector<std::array<int, 2>> ringLattice;
    auto emit = [&](int i0, int i1) {
        double x[2] = {spec.lo[0] + (i0 + 0.5) * m.h,
                       spec.dim == 2 ? spec.lo[1] + (i1 + 0.5) * m.h : 0.0};
        if (spec.contains(x)) {
            for (int k = 0; k < spec.dim; ++k) m.coords.push_back(x[k]);
            m.lattice.push_back({i0, i1});
        } else {
            for (int k = 0; k < spec.dim; ++k) ringCoords.push_back(x[k]);
            ringLattice.push_back({i0, i1});
        }
    };
    if (spec.dim == 1) {
        for (int i = lo; i < hiA; ++i) emit(i, 0);
    } else {
        for (int j = lo; j < hiA; ++j)
            for (int i = lo; i < hiA; ++i) emit(i, j);
    }
    m.insideCount = m.coords.size() / spec.dim;
    require(m.insideCount > 0, "mesh: empty interior");
    m.coords.insert(m.coords.end(), ringCoords.begin(), ringCoords.end());
    m.lattice.insert(m.lattice.end(), ringLattice.begin(), ringLattice.end());

    // neighbor table over inside nodes (lattice lookup)
    std::vector<std::array<int, 2>> key(m.lattice.begin(),
                                        m.lattice.begin() + m.insideCount);
    auto find_inside = [&](int i0, int i1) -> int {
        for (std::size_t k = 0; k < key.size(); ++k)
            if (key[k][0] == i0 && key[k][1] == i1) return int(k);
        return -1;
    };
    // linear scan is fine at desk scale for 1D; use a map for 2D
    if (spec.dim == 1) {
        m.insideNeighbors.resize(m.insideCount);
        for (std::size_t k = 0; k < m.insideCount; ++k) {
            const int i0 = m.lattice[k][0];
            m.insideNeighbors[k] = {find_inside(i0 - 1, 0), find_inside(i0 + 1, 0), -1, -1};
        }
    } else {
        const int span = hiA - lo;
        std::vector<int> grid(std::size_t(span) * span, -1);
        auto cell = [&](int i0, int i1) -> int& {
            return grid[std::size_t(i1 - lo) * span + (i0 - lo)];
        };
        for (std::size_t k = 0; k < m.insideCount; ++k)
            cell(m.lattice[k][0], m.lattice[k][1]) = int(k);
        m.insideNeighbors.resize(m.insideCount);
        for (std::size_t k = 0; k < m.insideCount; ++k) {
            const int i0 = m.lattice[k][0], i1 = m.lattice[k][1];
            auto at = [&](int a, int b) -> int {
                if (a < lo || a >= hiA || b < lo || b >= hiA) return -1;
                return cell(a, b);
            };
            m.insideNeighbors[k] = {at(i0 - 1, i1), at(i0 + 1, i1),
                                    at(i0, i1 - 1), at(i0, i1 + 1)};
        }
    }
    return m;
}

}  // namespace chovex
