#include "svfa/metric_integral.hpp"

#include <cmath>
#include <stdexcept>

namespace svfa {

MetricIntegralResult weighted_metric_riemann_sum(const SetValuedFunction& F,
                                                 const WeightFunction& kappa,
                                                 const Partition& chi, NormChoice norm,
                                                 std::size_t chain_cap) {
    std::vector<CompactSet> fibers;
    std::vector<double> lambdas;
    fibers.reserve(chi.size() - 1);
    lambdas.reserve(chi.size() - 1);
    for (std::size_t i = 0; i + 1 < chi.size(); ++i) {
        fibers.push_back(F(chi[i]));
        lambdas.push_back((chi[i + 1] - chi[i]) * kappa.eval(chi[i]));
    }
    auto r = metric_linear_combination(lambdas, fibers, chain_cap, norm);
    return {r.set, r.truncated};
}

Point integrate_weighted_selection(const Selection& s, const WeightFunction& kappa,
                                   const QuadratureRule& rule) {
    const Partition& chi = s.partition();
    const auto& vals = s.values();
    std::vector<double> acc(static_cast<std::size_t>(s.dim()), 0.0);
    std::vector<double> comp(acc.size(), 0.0);
    for (std::size_t i = 0; i + 1 < chi.size(); ++i) {
        double w = kappa.integral_on(chi[i], chi[i + 1], rule);
        for (std::size_t c = 0; c < acc.size(); ++c) {
            double term = w * vals[i][c] - comp[c];
            double t = acc[c] + term;
            comp[c] = (t - acc[c]) - term;
            acc[c] = t;
        }
    }
    return Point(std::move(acc));
}

CompactSet weighted_metric_integral(std::span<const Selection> family,
                                    const WeightFunction& kappa, const QuadratureRule& rule,
                                    double dedup_tol) {
    if (family.empty()) throw std::invalid_argument("weighted_metric_integral: empty family");
    std::vector<Point> pts;
    pts.reserve(family.size());
    for (const Selection& s : family) pts.push_back(integrate_weighted_selection(s, kappa, rule));
    return dedup_points(std::move(pts), dedup_tol);
}

CompactSet weighted_metric_integral(const SetValuedFunction& F, const WeightFunction& kappa,
                                    const Partition& chi, int seeds_per_fiber,
                                    const QuadratureRule& rule, NormChoice norm,
                                    double dedup_tol) {
    if (!kappa.bounded_variation)
        throw std::invalid_argument(
            "weighted_metric_integral: weight must be flagged bounded variation");
    std::vector<Selection> family = selection_family(F, chi, seeds_per_fiber, norm);
    return weighted_metric_integral(family, kappa, rule, dedup_tol);
}

}  // namespace svfa
