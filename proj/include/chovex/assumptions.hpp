#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chovex/fields.hpp"

namespace chovex {

struct AssumptionEntry {
    std::string name;
    bool pass = false;
    double value = 0.0;          // the decisive number (product, bound, ...)
    std::string detail;          // human-readable condition with numbers
    bool hasWitness = false;
    std::array<double, 4> witness{};  // (x, y) or (x, -) attaining the value
};

struct ThetaInterval {
    double lo = 0.0;   // exclusive: p+
    double hi = 0.0;   // inclusive: 2 r-
    bool empty() const { return !(hi > lo); }
};

/// Admissible interval for the superlinearity constant: (p+, 2 r-].
/// Throws when the interval is empty (the power family cannot satisfy the
/// two-sided growth bound then).
inline ThetaInterval theta_interval(const OnePointField& r, const TwoPointField& p,
                                    const Mesh& mesh) {
    const FieldExtrema rEx = field_extrema(r, mesh, ExtremaDomain::Inside);
    const FieldExtrema pEx = field_extrema(p, mesh, ExtremaDomain::Inside);
    ThetaInterval t{pEx.hi, 2.0 * rEx.lo};
    if (t.empty())
        throw Error("empty admissible Theta interval: 2 r- = " + fmt_double(t.hi) +
                    " <= p+ = " + fmt_double(t.lo));
    return t;
}

struct AssumptionReport {
    std::vector<AssumptionEntry> entries;

    // derived extrema over the domain (one-point) / domain pairs (two-point)
    FieldExtrema s, p, mu, alpha, r, q;
    ThetaInterval theta;          // admissible interval (may be empty)
    double chosenTheta = 0.0;

    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }

    const AssumptionEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }

    std::string table() const {
        std::ostringstream os;
        os << "assumption              status  value                   witness\n";
        for (const auto& e : entries) {
            std::string name = e.name;
            name.resize(24, ' ');
            os << name << (e.pass ? "pass    " : "FAIL    ");
            std::string v = fmt_double(e.value);
            v.resize(24, ' ');
            os << v;
            if (e.hasWitness) {
                os << "(" << fmt_double(e.witness[0]);
                os << ", " << fmt_double(e.witness[1]) << ")";
                if (e.witness[2] != e.witness[0] || e.witness[3] != e.witness[1]) {
                    os << " / (" << fmt_double(e.witness[2]) << ", "
                       << fmt_double(e.witness[3]) << ")";
                }
            }
            os << "  " << e.detail << "\n";
        }
        os << "derived: s in [" << fmt_double(s.lo) << ", " << fmt_double(s.hi)
           << "]  p in [" << fmt_double(p.lo) << ", " << fmt_double(p.hi)
           << "]  mu in [" << fmt_double(mu.lo) << ", " << fmt_double(mu.hi)
           << "]\n";
        os << "derived: alpha in [" << fmt_double(alpha.lo) << ", "
           << fmt_double(alpha.hi) << "]  r in [" << fmt_double(r.lo) << ", "
           << fmt_double(r.hi) << "]  q in [" << fmt_double(q.lo) << ", "
           << fmt_double(q.hi) << "]\n";
        os << "derived: Theta admissible (" << fmt_double(theta.lo) << ", "
           << fmt_double(theta.hi) << "]  chosen Theta = " << fmt_double(chosenTheta)
           << "\n";
        return os.str();
    }
};

namespace detail {

inline AssumptionEntry range_entry(const std::string& name, const FieldExtrema& ex,
                                   double lo, double hi, bool hiStrict,
                                   const std::string& what) {
    AssumptionEntry e;
    e.name = name;
    const bool loOk = ex.lo > lo;
    const bool hiOk = hiStrict ? ex.hi < hi : ex.hi <= hi;
    e.pass = loOk && hiOk;
    e.value = loOk ? ex.hi : ex.lo;
    e.hasWitness = true;
    e.witness = loOk ? ex.argmax : ex.argmin;
    std::ostringstream os;
    os << what << ": need " << fmt_double(lo) << " < " << ex.label << "- <= "
       << ex.label << "+ " << (hiStrict ? "< " : "<= ") << fmt_double(hi)
       << ", sampled [" << fmt_double(ex.lo) << ", " << fmt_double(ex.hi) << "]";
    e.detail = os.str();
    return e;
}

/// Sampled Lipschitz estimate of a one-point field over neighboring nodes.
inline double lipschitz_estimate(const OnePointField& f, const Mesh& mesh) {
    double L = 0.0;
    for (std::size_t i = 0; i < mesh.insideCount; ++i) {
        const double fi = f(mesh.point(i));
        for (int nb : mesh.insideNeighbors[i]) {
            if (nb < 0) continue;
            L = std::max(L, std::fabs(f(mesh.point(nb)) - fi) / mesh.h);
        }
    }
    return L;
}

inline double lipschitz_estimate(const TwoPointField& f, const Mesh& mesh) {
    double L = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, mesh.insideCount / 16);
    for (std::size_t j = 0; j < mesh.insideCount; j += stride) {
        const double* y = mesh.point(j);
        for (std::size_t i = 0; i < mesh.insideCount; ++i) {
            const double fi = f(mesh.point(i), y);
            for (int nb : mesh.insideNeighbors[i]) {
                if (nb < 0) continue;
                L = std::max(L, std::fabs(f(mesh.point(nb), y) - fi) / mesh.h);
            }
        }
    }
    return L;
}

}  // namespace detail

/// Chain check r in M: p(x,x) <= r(x) q- <= r(x) q+ < p_s*(x) at every domain
/// node, plus r- > p+.  Failures come back as report entries with witnesses.
inline std::vector<AssumptionEntry> check_r_admissible(
    const OnePointField& r, const FieldExtrema& qEx, const TwoPointField& p,
    const TwoPointField& s, const FieldExtrema& pEx, const Mesh& mesh) {
    std::vector<AssumptionEntry> out;

    AssumptionEntry chain;
    chain.name = "r-in-M";
    chain.pass = true;
    chain.value = 0.0;
    double worstMargin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mesh.insideCount; ++i) {
        const double* x = mesh.point(i);
        const double rx = r(x);
        const double pd = p.diag(x);
        double pstar;
        try {
            pstar = critical_exponent(p, s, x, mesh.dim);
        } catch (const Error&) {
            chain.pass = false;
            chain.detail = "critical exponent undefined (s(x,x)p(x,x) >= N)";
            chain.hasWitness = true;
            chain.witness = {x[0], mesh.dim == 2 ? x[1] : 0.0, 0, 0};
            break;
        }
        const double lo = rx * qEx.lo;
        const double hi = rx * qEx.hi;
        const double margin = std::isinf(pstar)
                                  ? std::numeric_limits<double>::infinity()
                                  : pstar - hi;
        const bool ok = (pd <= lo) && (lo <= hi) && (hi < pstar);
        if (margin < worstMargin) {
            worstMargin = margin;
            chain.value = hi;
            chain.hasWitness = true;
            chain.witness = {x[0], mesh.dim == 2 ? x[1] : 0.0, 0, 0};
        }
        if (!ok) {
            chain.pass = false;
            std::ostringstream os;
            os << "violated at node: p(x,x)=" << fmt_double(pd) << " r(x)q-="
               << fmt_double(lo) << " r(x)q+=" << fmt_double(hi) << " p_s*(x)="
               << fmt_double(pstar);
            chain.detail = os.str();
            chain.hasWitness = true;
            chain.witness = {x[0], mesh.dim == 2 ? x[1] : 0.0, 0, 0};
            break;
        }
    }
    if (chain.pass)
        chain.detail = "p(x,x) <= r(x)q- <= r(x)q+ < p_s*(x) at all domain nodes";
    out.push_back(chain);

    const FieldExtrema rEx = field_extrema(r, mesh, ExtremaDomain::Inside);
    AssumptionEntry growth;
    growth.name = "r- > p+";
    growth.pass = rEx.lo > pEx.hi;
    growth.value = rEx.lo;
    growth.hasWitness = true;
    growth.witness = rEx.argmin;
    growth.detail = "r- = " + fmt_double(rEx.lo) + " vs p+ = " + fmt_double(pEx.hi);
    out.push_back(growth);
    return out;
}

/// Validate every structural assumption on the fields over the given mesh.
/// `theta` <= 0 picks the default 2 r-.
inline AssumptionReport validate_assumptions(const ProblemFields& f, const Mesh& mesh,
                                             double theta = 0.0) {
    AssumptionReport rep;
    rep.s = field_extrema(f.s, mesh, ExtremaDomain::Inside);
    rep.p = field_extrema(f.p, mesh, ExtremaDomain::Inside);
    rep.mu = field_extrema(f.mu, mesh, ExtremaDomain::Inside);
    rep.alpha = field_extrema(f.alpha, mesh, ExtremaDomain::Inside);
    rep.r = field_extrema(f.r, mesh, ExtremaDomain::Inside);
    const TwoPointField q = q_from_mu(f.mu, mesh.dim);
    rep.q = field_extrema(q, mesh, ExtremaDomain::Inside);

    rep.entries.push_back(detail::range_entry("S1: 0<s-<=s+<1", rep.s, 0.0, 1.0, true,
                                              "fractional order range"));

    // P1: p in C+, and for N >= 2 the product bound s+p+ < N.  In dimension 1
    // the product bound is dropped: s p >= 1 there lands in the Morrey regime
    // where the critical exponent is +infinity and every subcritical condition
    // below is vacuous.
    {
        AssumptionEntry cp = detail::range_entry(
            "P1: p in C+", rep.p, 1.0, std::numeric_limits<double>::infinity(), true,
            "integrability exponent range");
        rep.entries.push_back(cp);

        AssumptionEntry prod;
        prod.name = "P1: s+p+ < N";
        // sampled max of the product over domain pairs
        double best = -std::numeric_limits<double>::infinity();
        std::array<double, 4> w{};
        for (std::size_t i = 0; i < mesh.insideCount; ++i)
            for (std::size_t j = i; j < mesh.insideCount; ++j) {
                const double v =
                    f.s(mesh.point(i), mesh.point(j)) * f.p(mesh.point(i), mesh.point(j));
                if (v > best) {
                    best = v;
                    w = {mesh.point(i)[0], mesh.dim == 2 ? mesh.point(i)[1] : 0.0,
                         mesh.point(j)[0], mesh.dim == 2 ? mesh.point(j)[1] : 0.0};
                }
            }
        prod.value = best;
        prod.hasWitness = true;
        prod.witness = w;
        if (mesh.dim >= 2) {
            prod.pass = best < mesh.dim;
            prod.detail = "sampled max s*p = " + fmt_double(best) + " vs N = " +
                          std::to_string(mesh.dim);
        } else {
            prod.pass = true;
            prod.detail = "N=1: bound waived (Morrey regime, critical exponent = inf); "
                          "sampled max s*p = " + fmt_double(best);
        }
        rep.entries.push_back(prod);
    }

    rep.entries.push_back(detail::range_entry("mu1: 0<mu-<=mu+<N", rep.mu, 0.0,
                                              double(mesh.dim), true,
                                              "Riesz exponent range"));

    // q derived from mu must land in C+ (fails exactly when mu1 fails)
    {
        AssumptionEntry qe = detail::range_entry(
            "q1: q in C+", rep.q, 1.0, std::numeric_limits<double>::infinity(), true,
            "kernel-conjugate exponent range");
        rep.entries.push_back(qe);
    }

    // alpha in C+ on the domain and alpha+ < p-
    rep.entries.push_back(detail::range_entry(
        "alpha in C+", rep.alpha, 1.0, std::numeric_limits<double>::infinity(), true,
        "concave exponent range"));
    {
        AssumptionEntry a;
        a.name = "alpha+ < p-";
        a.pass = rep.alpha.hi < rep.p.lo;
        a.value = rep.alpha.hi;
        a.hasWitness = true;
        a.witness = rep.alpha.argmax;
        a.detail = "alpha+ = " + fmt_double(rep.alpha.hi) + " vs p- = " +
                   fmt_double(rep.p.lo);
        rep.entries.push_back(a);
    }

    // F1 for the power family is exact with M = 1 once r is in C+.
    {
        AssumptionEntry f1 = detail::range_entry(
            "F1: r in C+ (M=1)", rep.r, 1.0, std::numeric_limits<double>::infinity(),
            true, "growth exponent range");
        rep.entries.push_back(f1);
    }

    for (auto& e : check_r_admissible(f.r, rep.q, f.p, f.s, rep.p, mesh))
        rep.entries.push_back(e);

    // F2: Theta in (p+, 2 r-]
    {
        rep.theta = ThetaInterval{rep.p.hi, 2.0 * rep.r.lo};
        rep.chosenTheta = theta > 0.0 ? theta : rep.theta.hi;
        AssumptionEntry f2;
        f2.name = "F2: Theta interval";
        f2.pass = !rep.theta.empty() && rep.chosenTheta > rep.theta.lo &&
                  rep.chosenTheta <= rep.theta.hi;
        f2.value = rep.chosenTheta;
        f2.detail = "admissible (" + fmt_double(rep.theta.lo) + ", " +
                    fmt_double(rep.theta.hi) + "], Theta = " + fmt_double(rep.chosenTheta);
        rep.entries.push_back(f2);
    }

    // continuity proxy: finite everywhere on the padded box (pair sampling for
    // two-point fields) + sampled Lipschitz estimate recorded for reference
    {
        AssumptionEntry cont;
        cont.name = "continuity proxy";
        cont.pass = true;
        try {
            (void)field_extrema(f.s, mesh, ExtremaDomain::InsideAll);
            (void)field_extrema(f.p, mesh, ExtremaDomain::InsideAll);
            (void)field_extrema(f.mu, mesh, ExtremaDomain::Inside);
            (void)field_extrema(f.alpha, mesh, ExtremaDomain::Inside);
            (void)field_extrema(f.r, mesh, ExtremaDomain::Inside);
            const double L = std::max(
                {detail::lipschitz_estimate(f.s, mesh), detail::lipschitz_estimate(f.p, mesh),
                 detail::lipschitz_estimate(f.alpha, mesh),
                 detail::lipschitz_estimate(f.r, mesh)});
            cont.value = L;
            cont.detail = "fields finite on sampled pairs; max sampled Lipschitz = " +
                          fmt_double(L);
        } catch (const Error& err) {
            cont.pass = false;
            cont.detail = err.what();
        }
        rep.entries.push_back(cont);
    }

    return rep;
}

}  // namespace chovex
