#ifndef SVFA_METRIC_INTEGRAL_HPP
#define SVFA_METRIC_INTEGRAL_HPP

#include "svfa/quadrature.hpp"
#include "svfa/selections.hpp"
#include "svfa/sets.hpp"
#include "svfa/svf.hpp"

namespace svfa {

struct MetricIntegralResult {
    CompactSet set;
    bool truncated = false;
};

/// Weighted metric Riemann sum over the fibers F(x_0..x_{n-1}) with
/// weights (x_{i+1} - x_i) kappa(x_i); a metric linear combination.
MetricIntegralResult weighted_metric_riemann_sum(const SetValuedFunction& F,
                                                 const WeightFunction& kappa,
                                                 const Partition& chi, NormChoice norm,
                                                 std::size_t chain_cap = kChainCap);

/// integral of kappa * s over the selection's domain; exact for the step
/// values when kappa has an antiderivative, panel-aligned quadrature
/// otherwise.
Point integrate_weighted_selection(const Selection& s, const WeightFunction& kappa,
                                   const QuadratureRule& rule);

/// The weighted metric integral computed through the selection
/// representation: { integral of kappa s : s in the selection family }.
/// kappa must be flagged as bounded variation.
CompactSet weighted_metric_integral(const SetValuedFunction& F, const WeightFunction& kappa,
                                    const Partition& chi, int seeds_per_fiber,
                                    const QuadratureRule& rule, NormChoice norm,
                                    double dedup_tol = 1e-12);

CompactSet weighted_metric_integral(std::span<const Selection> family,
                                    const WeightFunction& kappa, const QuadratureRule& rule,
                                    double dedup_tol = 1e-12);

}  // namespace svfa

#endif  // SVFA_METRIC_INTEGRAL_HPP
