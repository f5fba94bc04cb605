#pragma once

#include <vector>

#include "chovex/common.hpp"
#include "chovex/mesh.hpp"

namespace chovex {

/// Nodal values on the interior nodes of a mesh.  Values outside the domain
/// are identically zero by representation: the ring carries no storage, so
/// the exterior Dirichlet condition can never be violated.
struct GridFunction {
    std::vector<double> v;

    GridFunction() = default;
    explicit GridFunction(const Mesh& mesh) : v(mesh.insideCount, 0.0) {}
    GridFunction(const Mesh& mesh, double c) : v(mesh.insideCount, c) {}

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }

    /// Value at any mesh node index (0 outside the domain).
    double at_node(std::size_t node) const {
        return node < v.size() ? v[node] : 0.0;
    }

    bool is_zero() const {
        for (double x : v)
            if (x != 0.0) return false;
        return true;
    }

    GridFunction& operator*=(double c) {
        for (double& x : v) x *= c;
        return *this;
    }
    GridFunction& axpy(double a, const GridFunction& w) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += a * w.v[i];
        return *this;
    }

    friend GridFunction operator*(double c, GridFunction u) {
        u *= c;
        return u;
    }
    friend GridFunction operator+(GridFunction a, const GridFunction& b) {
        a.axpy(1.0, b);
        return a;
    }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) {
        a.axpy(-1.0, b);
        return a;
    }

    double dot(const GridFunction& w) const {
        KahanSum s;
        for (std::size_t i = 0; i < v.size(); ++i) s.add(v[i] * w.v[i]);
        return s.value();
    }
    double norm2() const { return std::sqrt(dot(*this)); }
};

}  // namespace chovex
