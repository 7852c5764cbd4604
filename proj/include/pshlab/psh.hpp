#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pshlab/complex_poly.hpp"

namespace pshlab {

// Product polydisc; the standard domain is the unit polydisc about 0.
struct Polydisc {
    std::vector<Complex> center;
    std::vector<double> radii;

    Polydisc() = default;
    Polydisc(std::vector<Complex> c, std::vector<double> r)
        : center(std::move(c)), radii(std::move(r)) {
        if (center.size() != radii.size())
            throw std::invalid_argument("Polydisc: center/radii size mismatch");
        for (double rr : radii)
            if (!(rr > 0)) throw std::invalid_argument("Polydisc: radii must be positive");
    }

    static Polydisc unit(int dim) {
        return Polydisc(std::vector<Complex>(dim, 0.0), std::vector<double>(dim, 1.0));
    }

    int dim() const { return static_cast<int>(center.size()); }

    bool contains(std::span<const Complex> p, double slack = 0.0) const {
        if (static_cast<int>(p.size()) != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (std::abs(p[i] - center[i]) > radii[i] + slack) return false;
        return true;
    }

    // distance from p to the polydisc boundary measured coordinatewise
    double boundary_gap(std::span<const Complex> p) const {
        double g = kPosInf;
        for (int i = 0; i < dim(); ++i)
            g = std::min(g, radii[i] - std::abs(p[i] - center[i]));
        return g;
    }
};

// The closed expression class of plurisubharmonic functions used by the lab:
//  - analytic-singularity leaves (alpha/2) log(sum |f_i|^2)
//  - pointwise max of two expressions
//  - non-negative weighted sums
//  - log-Hoelder terms log(|a(z,w)|^alpha + |z|^beta)
//  - external scalar fields (the Cantor potential enters through one)
// Nodes are immutable and shared; every operation on PshExpr is pure.
class PshExpr {
public:
    struct AnalyticLeaf {
        double alpha = 1.0;
        std::vector<ComplexPoly> gens;
    };
    struct MaxNode {
        std::shared_ptr<const PshExpr> a, b;
    };
    struct SumNode {
        std::vector<std::pair<double, std::shared_ptr<const PshExpr>>> parts;
        double constant = 0.0;
    };
    struct LogHoelderLeaf {
        ComplexPoly a;       // inner holomorphic argument, polynomial in all vars
        double alpha = 1.0;  // exponent on |a|
        double beta = 1.0;   // exponent on |z_block|
        int z_dim = 1;       // |z| is the euclidean norm of the first z_dim coords
    };
    struct ScalarFieldLeaf {
        std::function<double(std::span<const Complex>)> value;
        std::string tag;
        bool locally_bounded = true;  // true: contributes 0 to Lelong numbers
    };

    using Node = std::variant<AnalyticLeaf, MaxNode, SumNode, LogHoelderLeaf, ScalarFieldLeaf>;

    PshExpr() = default;

    static PshExpr analytic(double alpha, std::vector<ComplexPoly> gens) {
        if (!(alpha > 0)) throw std::invalid_argument("PshExpr: alpha must be positive");
        if (gens.empty()) throw std::invalid_argument("PshExpr: empty generator list");
        int d = gens.front().dim();
        bool nonzero = false;
        for (const auto& g : gens) {
            if (g.dim() != d) throw std::invalid_argument("PshExpr: generator dims differ");
            if (!g.is_zero()) nonzero = true;
        }
        if (!nonzero) throw std::invalid_argument("PshExpr: all generators are zero");
        PshExpr e;
        e.dim_ = d;
        e.node_ = std::make_shared<Node>(AnalyticLeaf{alpha, std::move(gens)});
        return e;
    }

    static PshExpr max(PshExpr a, PshExpr b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("PshExpr::max: dim mismatch");
        PshExpr e;
        e.dim_ = a.dim_;
        e.node_ = std::make_shared<Node>(
            MaxNode{std::make_shared<PshExpr>(std::move(a)), std::make_shared<PshExpr>(std::move(b))});
        return e;
    }

    static PshExpr weighted_sum(std::vector<std::pair<double, PshExpr>> parts, double constant = 0.0) {
        if (parts.empty()) throw std::invalid_argument("PshExpr::sum: empty");
        PshExpr e;
        e.dim_ = parts.front().second.dim_;
        SumNode n;
        n.constant = constant;
        for (auto& [w, p] : parts) {
            if (w < 0) throw std::invalid_argument("PshExpr::sum: negative weight");
            if (p.dim_ != e.dim_) throw std::invalid_argument("PshExpr::sum: dim mismatch");
            n.parts.emplace_back(w, std::make_shared<PshExpr>(std::move(p)));
        }
        e.node_ = std::make_shared<Node>(std::move(n));
        return e;
    }

    static PshExpr scaled(double w, PshExpr p, double constant = 0.0) {
        std::vector<std::pair<double, PshExpr>> parts;
        parts.emplace_back(w, std::move(p));
        return weighted_sum(std::move(parts), constant);
    }

    static PshExpr log_hoelder(ComplexPoly a, double alpha, double beta, int z_dim) {
        if (!(alpha > 0) || !(beta > 0))
            throw std::invalid_argument("PshExpr: log-Hoelder exponents must be positive");
        if (z_dim < 1 || z_dim > a.dim())
            throw std::invalid_argument("PshExpr: log-Hoelder z_dim out of range");
        PshExpr e;
        e.dim_ = a.dim();
        e.node_ = std::make_shared<Node>(LogHoelderLeaf{std::move(a), alpha, beta, z_dim});
        return e;
    }

    static PshExpr scalar_field(int dim, std::function<double(std::span<const Complex>)> f,
                                std::string tag, bool locally_bounded = true) {
        PshExpr e;
        e.dim_ = dim;
        e.node_ = std::make_shared<Node>(ScalarFieldLeaf{std::move(f), std::move(tag), locally_bounded});
        return e;
    }

    int dim() const { return dim_; }
    bool empty() const { return node_ == nullptr; }
    const Node& node() const {
        if (!node_) throw std::logic_error("PshExpr: empty expression");
        return *node_;
    }

    const Polydisc& domain() const {
        if (!domain_) domain_ = std::make_shared<Polydisc>(Polydisc::unit(dim_));
        return *domain_;
    }
    PshExpr with_domain(Polydisc d) const {
        if (d.dim() != dim_) throw std::invalid_argument("PshExpr: domain dim mismatch");
        PshExpr e = *this;
        e.domain_ = std::make_shared<Polydisc>(std::move(d));
        return e;
    }

    // Value at a point, in [-inf, +inf).  Scale-aware throughout.
    double evaluate(std::span<const Complex> x) const;

    // Freeze the parameter block: phi(z, w) -> phi(z, w0) as an expression
    // over the first nz variables.  w0 must lie in the parameter factor of
    // the declared polydisc.
    PshExpr restrict_fiber(int nz, std::span<const Complex> w0) const;

    // Largest total degree over all polynomial data in the tree (sampler hint).
    int max_poly_degree() const;

private:
    int dim_ = 0;
    std::shared_ptr<const Node> node_;
    mutable std::shared_ptr<const Polydisc> domain_;
};

inline double PshExpr::evaluate(std::span<const Complex> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("PshExpr::evaluate: point dim mismatch");
    const Node& n = node();
    if (const auto* a = std::get_if<AnalyticLeaf>(&n)) {
        // (alpha/2) log(sum |f_i|^2) via logs of |f_i|
        thread_local std::vector<double> twice;
        twice.clear();
        for (const auto& g : a->gens) {
            if (g.is_zero()) continue;
            twice.push_back(2.0 * g.log_abs(x));
        }
        double s = log_sum_exp(twice);
        return s == kNegInf ? kNegInf : 0.5 * a->alpha * s;
    }
    if (const auto* m = std::get_if<MaxNode>(&n))
        return std::max(m->a->evaluate(x), m->b->evaluate(x));
    if (const auto* s = std::get_if<SumNode>(&n)) {
        double acc = s->constant;
        for (const auto& [w, p] : s->parts) {
            if (w == 0.0) continue;
            double v = p->evaluate(x);
            if (v == kNegInf) return kNegInf;
            acc += w * v;
        }
        return acc;
    }
    if (const auto* lh = std::get_if<LogHoelderLeaf>(&n)) {
        double la = lh->a.log_abs(x);
        double lz = kNegInf;
        for (int i = 0; i < lh->z_dim; ++i) {
            double ai = std::abs(x[i]);
            if (ai > 0) lz = log_sum_exp2(lz, 2.0 * std::log(ai));
        }
        if (lz != kNegInf) lz *= 0.5;  // log |z_block|
        double t1 = la == kNegInf ? kNegInf : lh->alpha * la;
        double t2 = lz == kNegInf ? kNegInf : lh->beta * lz;
        return log_sum_exp2(t1, t2);
    }
    const auto& sf = std::get<ScalarFieldLeaf>(n);
    return sf.value(x);
}

inline PshExpr PshExpr::restrict_fiber(int nz, std::span<const Complex> w0) const {
    if (nz < 1 || nz >= dim_)
        throw std::invalid_argument("restrict_fiber: nz must split the variables");
    if (static_cast<int>(w0.size()) != dim_ - nz)
        throw std::invalid_argument("restrict_fiber: w0 dim mismatch");
    {
        const Polydisc& d = domain();
        for (int i = nz; i < dim_; ++i)
            if (std::abs(w0[i - nz] - d.center[i]) > d.radii[i])
                throw std::invalid_argument("restrict_fiber: w0 outside declared polydisc");
    }
    const Node& n = node();
    PshExpr out;
    if (const auto* a = std::get_if<AnalyticLeaf>(&n)) {
        std::vector<ComplexPoly> gens;
        for (const auto& g : a->gens) {
            ComplexPoly h = g.substitute_tail(nz, w0);
            if (!h.is_zero()) gens.push_back(std::move(h));
        }
        if (gens.empty())
            gens.push_back(ComplexPoly(nz));  // identically -inf fiber, kept as zero ideal
        out.dim_ = nz;
        if (gens.size() == 1 && gens.front().is_zero()) {
            // degenerate fiber: phi == -inf; represent as a scalar field
            out.node_ = std::make_shared<Node>(ScalarFieldLeaf{
                [](std::span<const Complex>) { return kNegInf; }, "neg-inf", false});
        } else {
            out.node_ = std::make_shared<Node>(AnalyticLeaf{a->alpha, std::move(gens)});
        }
    } else if (const auto* m = std::get_if<MaxNode>(&n)) {
        out = PshExpr::max(m->a->restrict_fiber(nz, w0), m->b->restrict_fiber(nz, w0));
    } else if (const auto* s = std::get_if<SumNode>(&n)) {
        std::vector<std::pair<double, PshExpr>> parts;
        for (const auto& [w, p] : s->parts) parts.emplace_back(w, p->restrict_fiber(nz, w0));
        out = PshExpr::weighted_sum(std::move(parts), s->constant);
    } else if (const auto* lh = std::get_if<LogHoelderLeaf>(&n)) {
        out = PshExpr::log_hoelder(lh->a.substitute_tail(nz, w0), lh->alpha, lh->beta,
                                   std::min(lh->z_dim, nz));
    } else {
        const auto& sf = std::get<ScalarFieldLeaf>(n);
        std::vector<Complex> tail(w0.begin(), w0.end());
        auto f = sf.value;
        int total = dim_;
        out = PshExpr::scalar_field(
            nz,
            [f, tail, total, nz](std::span<const Complex> z) {
                std::vector<Complex> full(total);
                for (int i = 0; i < nz; ++i) full[i] = z[i];
                for (int i = nz; i < total; ++i) full[i] = tail[i - nz];
                return f(full);
            },
            sf.tag + "|fiber", sf.locally_bounded);
    }
    // restrict the declared domain to the z factor
    const Polydisc& d = domain();
    Polydisc dz(std::vector<Complex>(d.center.begin(), d.center.begin() + nz),
                std::vector<double>(d.radii.begin(), d.radii.begin() + nz));
    return out.with_domain(std::move(dz));
}

inline int PshExpr::max_poly_degree() const {
    const Node& n = node();
    if (const auto* a = std::get_if<AnalyticLeaf>(&n)) {
        int d = 1;
        for (const auto& g : a->gens) d = std::max(d, g.total_degree());
        return d;
    }
    if (const auto* m = std::get_if<MaxNode>(&n))
        return std::max(m->a->max_poly_degree(), m->b->max_poly_degree());
    if (const auto* s = std::get_if<SumNode>(&n)) {
        int d = 1;
        for (const auto& [w, p] : s->parts) d = std::max(d, p->max_poly_degree());
        return d;
    }
    if (const auto* lh = std::get_if<LogHoelderLeaf>(&n)) return std::max(1, lh->a.total_degree());
    return 1;
}

} // namespace pshlab
