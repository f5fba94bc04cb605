#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "chovex/expr.hpp"
#include "chovex/mesh.hpp"

namespace chovex {

/// Scalar field of one spatial point (alpha, r, beta, gamma).
class OnePointField {
public:
    OnePointField() = default;
    OnePointField(std::string label, Expr expr)
        : label_(std::move(label)), expr_(std::move(expr)), prog_(expr_) {
        require(!expr_.uses_y(),
                "field '" + label_ + "' must not reference y variables");
    }

    static OnePointField parse(std::string label, std::string_view src, int dim) {
        return OnePointField(std::move(label), parse_expr(src, dim));
    }
    static OnePointField constant(std::string label, double v) {
        return OnePointField(std::move(label), Expr::constant(v));
    }

    double operator()(const double* x) const { return prog_.eval(x, nullptr); }
    const std::string& label() const { return label_; }
    const Expr& expr() const { return expr_; }
    bool valid() const { return !expr_.empty(); }

private:
    std::string label_;
    Expr expr_;
    Program prog_;
};

/// Symmetric scalar field of a pair of points (s, p, mu, q).  Evaluation is
/// the exact symmetrization (e(x,y) + e(y,x)) / 2, so value(x,y) == value(y,x)
/// bit for bit regardless of the underlying expression.
class TwoPointField {
public:
    TwoPointField() = default;
    TwoPointField(std::string label, Expr expr)
        : label_(std::move(label)), expr_(std::move(expr)), prog_(expr_) {}

    static TwoPointField parse(std::string label, std::string_view src, int dim) {
        return TwoPointField(std::move(label), parse_expr(src, dim));
    }
    static TwoPointField constant(std::string label, double v) {
        return TwoPointField(std::move(label), Expr::constant(v));
    }

    double operator()(const double* x, const double* y) const {
        return 0.5 * (prog_.eval(x, y) + prog_.eval(y, x));
    }
    /// Diagonal value f(x, x).
    double diag(const double* x) const { return prog_.eval(x, x); }

    const std::string& label() const { return label_; }
    const Expr& expr() const { return expr_; }
    bool valid() const { return !expr_.empty(); }

private:
    std::string label_;
    Expr expr_;
    Program prog_;
};

/// Exponent tied to the Riesz kernel by 2/q + mu/N = 2, i.e.
/// q(x,y) = 2N / (2N - mu(x,y)).  Built symbolically from mu's expression
/// so it prints, samples and symmetrizes like any other field.
inline TwoPointField q_from_mu(const TwoPointField& mu, int dim) {
    const double twoN = 2.0 * dim;
    return TwoPointField("q", Expr::reciprocal_of(twoN, twoN, mu.expr()));
}

// ---------------------------------------------------------------------------
// Extrema sampling
// ---------------------------------------------------------------------------

/// Which sample set the extrema are taken over.
enum class ExtremaDomain {
    Inside,      // domain nodes / domain node pairs only
    All,         // every node / every node pair including the padded ring
    InsideAll,   // pairs with at least one node inside (plus the diagonal)
};

struct FieldExtrema {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::array<double, 4> argmin{};  // (x, y) pair for two-point fields
    std::array<double, 4> argmax{};
    std::string label;

    void take(double v, const double* x, const double* y, int dim) {
        if (v < lo) {
            lo = v;
            for (int k = 0; k < dim; ++k) {
                argmin[k] = x[k];
                argmin[2 + k] = y ? y[k] : x[k];
            }
        }
        if (v > hi) {
            hi = v;
            for (int k = 0; k < dim; ++k) {
                argmax[k] = x[k];
                argmax[2 + k] = y ? y[k] : x[k];
            }
        }
    }
};

namespace detail {
// Exhaustive pair sampling is quadratic in the node count; above this many
// pairs fall back to diagonal + strided sampling (documented as an
// under-approximation of sup / over-approximation of inf, like any sampling).
constexpr std::size_t kMaxExhaustivePairs = std::size_t(3) << 25;
}  // namespace detail

inline FieldExtrema field_extrema(const OnePointField& f, const Mesh& mesh,
                                  ExtremaDomain dom = ExtremaDomain::All) {
    FieldExtrema ex;
    ex.label = f.label();
    const std::size_t count =
        dom == ExtremaDomain::Inside ? mesh.insideCount : mesh.node_count();
    for (std::size_t i = 0; i < count; ++i) {
        const double v = f(mesh.point(i));
        if (!std::isfinite(v))
            throw Error("field '" + f.label() + "' is non-finite at a mesh node");
        ex.take(v, mesh.point(i), nullptr, mesh.dim);
    }
    return ex;
}

inline FieldExtrema field_extrema(const TwoPointField& f, const Mesh& mesh,
                                  ExtremaDomain dom = ExtremaDomain::All) {
    FieldExtrema ex;
    ex.label = f.label();
    const std::size_t inner =
        dom == ExtremaDomain::Inside ? mesh.insideCount : mesh.node_count();
    const std::size_t outer =
        dom == ExtremaDomain::Inside ? mesh.insideCount : mesh.node_count();

    auto probe = [&](std::size_t i, std::size_t j) {
        const double v = f(mesh.point(i), mesh.point(j));
        if (!std::isfinite(v))
            throw Error("field '" + f.label() + "' is non-finite at a mesh pair");
        ex.take(v, mesh.point(i), mesh.point(j), mesh.dim);
    };

    const std::size_t pairs = inner * outer;
    std::size_t stride = 1;
    if (pairs > detail::kMaxExhaustivePairs)
        stride = pairs / detail::kMaxExhaustivePairs + 1;

    // diagonal first: many fields attain an extremum at x == y
    for (std::size_t i = 0; i < outer; ++i) probe(i, i);
    std::size_t k = 0;
    for (std::size_t i = 0; i < outer; ++i) {
        const std::size_t jmax = dom == ExtremaDomain::InsideAll && i >= mesh.insideCount
                                     ? mesh.insideCount
                                     : inner;
        for (std::size_t j = i + 1; j < jmax; ++j, ++k) {
            if (stride > 1 && (k % stride) != 0) continue;
            probe(i, j);
        }
    }
    return ex;
}

/// Critical Sobolev exponent N p(x,x) / (N - s(x,x) p(x,x)) at a point.
/// In dimension 1 the regime s(x,x) p(x,x) >= N gives embeddings into every
/// Lebesgue exponent, encoded as +infinity; in dimension >= 2 a nonpositive
/// denominator is a structural violation and throws.
inline double critical_exponent(const TwoPointField& p, const TwoPointField& s,
                                const double* x, int dim) {
    const double pd = p.diag(x);
    const double sd = s.diag(x);
    const double den = dim - sd * pd;
    if (den <= 0.0) {
        if (dim == 1) return std::numeric_limits<double>::infinity();
        throw Error("critical exponent undefined: s(x,x)p(x,x) >= N at a node");
    }
    return dim * pd / den;
}

/// The full set of problem fields.
struct ProblemFields {
    TwoPointField s;      // fractional order
    TwoPointField p;      // integrability exponent
    TwoPointField mu;     // Riesz kernel exponent
    OnePointField alpha;  // concave-term exponent
    OnePointField r;      // nonlinearity growth exponent
};

}  // namespace chovex
