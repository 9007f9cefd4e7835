#ifndef SVFA_QUADRATURE_HPP
#define SVFA_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

#include "svfa/svf.hpp"

namespace svfa {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    static const GaussLegendre& get(int order);
};

enum class QuadKind {
    gauss_composite,     ///< composite Gauss-Legendre over breakpoint-aligned panels
    piecewise_constant,  ///< midpoint times length; exact when panels match the pieces
};

/// Composite rule over panels derived from the given breakpoints; long
/// panels are split until none exceeds (b-a)/min_panels.
struct QuadratureRule {
    QuadKind kind = QuadKind::gauss_composite;
    int order = 8;
    int min_panels = 16;

    double integrate(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> breakpoints = {}) const;
    Point integrate_vector(const std::function<Point(double)>& f, double a, double b, int dim,
                           std::span<const double> breakpoints = {}) const;
    Point integrate_vector(const VectorFunction& f,
                           std::span<const double> breakpoints = {}) const;

    /// The panel decomposition the rule would use.
    std::vector<double> panels(double a, double b, std::span<const double> breakpoints = {}) const;
};

/// Weight function kappa on [a, b]; the optional antiderivative makes
/// integrals against step functions exact.
struct WeightFunction {
    std::function<double(double)> eval;
    bool continuous = true;
    bool bounded_variation = true;
    std::function<double(double)> antiderivative;  // may be empty

    static WeightFunction constant(double c);
    double integral_on(double u, double v, const QuadratureRule& rule) const;
};

}  // namespace svfa

#endif  // SVFA_QUADRATURE_HPP
