#ifndef SVFA_SVF_HPP
#define SVFA_SVF_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svfa/sets.hpp"

namespace svfa {

/// Strictly increasing nodes a = x_0 < ... < x_n = b.
class Partition {
public:
    explicit Partition(std::vector<double> nodes);
    static Partition uniform(double a, double b, int segments);

    double a() const { return x_.front(); }
    double b() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }  ///< node count
    double operator[](std::size_t i) const { return x_[i]; }
    const std::vector<double>& nodes() const { return x_; }

    /// |chi| = max gap.
    double mesh() const;

    /// Dyadic refinement: inserts all midpoints.
    Partition refined() const;

    /// Piece index i with x in [x_i, x_{i+1}); returns n-1 for x >= b and
    /// 0 for x < a (constant extension).
    std::size_t locate(double x) const;

    /// Node index of x if x is a node (within tol), otherwise nullopt.
    std::optional<std::size_t> index_of(double x, double tol = 1e-12) const;

private:
    std::vector<double> x_;
};

/// A (possibly vector-valued) function on [a, b], extended by constants
/// outside the interval.
class VectorFunction {
public:
    VectorFunction(double a, double b, int dim, std::function<Point(double)> f);
    static VectorFunction scalar(double a, double b, std::function<double(double)> f);
    /// e_i(t) = t^i on [a, b].
    static VectorFunction monomial(double a, double b, int i);

    double a() const { return a_; }
    double b() const { return b_; }
    int dim() const { return dim_; }
    Point operator()(double x) const;

private:
    double a_, b_;
    int dim_;
    std::function<Point(double)> f_;
};

/// A set-valued function on [a, b]. Grid-backed instances are step
/// functions F(x) = F_i on [x_i, x_{i+1}), F(b) = F_N, with exact
/// one-sided limits; closed-form instances evaluate an oracle and
/// approximate one-sided limits by a small offset. Both are extended by
/// constants outside [a, b].
class SetValuedFunction {
public:
    static SetValuedFunction closed_form(double a, double b, int dim,
                                         std::function<CompactSet(double)> f,
                                         std::string name = "closed-form");
    static SetValuedFunction grid(Partition nodes, std::vector<CompactSet> fibers,
                                  std::string name = "grid");

    double a() const { return a_; }
    double b() const { return b_; }
    int dim() const { return dim_; }
    bool is_grid() const { return grid_.has_value(); }
    const std::string& name() const { return name_; }

    CompactSet operator()(double x) const;
    /// One-sided limits; h_lim is used only by closed-form instances.
    CompactSet left_limit(double x, double h_lim) const;
    CompactSet right_limit(double x, double h_lim) const;

    const Partition& grid_nodes() const;
    const std::vector<CompactSet>& grid_fibers() const;

private:
    SetValuedFunction() = default;
    double a_ = 0, b_ = 1;
    int dim_ = 1;
    std::function<CompactSet(double)> f_;
    std::optional<Partition> grid_;
    std::vector<CompactSet> fibers_;
    std::string name_;
};

/// What the variation machinery needs from a metric-space-valued
/// function: pairwise distances, distances to one-sided limits, and the
/// distance to the origin. Built by the as_metric adapters.
struct MetricFunction {
    double a = 0, b = 1;
    std::function<double(double, double)> dist;        ///< rho(f(x1), f(x2))
    std::function<double(double, double)> dist_left;   ///< rho(f(x*-), f(x)), args (x*, x)
    std::function<double(double, double)> dist_right;  ///< rho(f(x*+), f(x))
    std::function<double(double)> norm_at;             ///< rho(f(x), 0)
    bool monotone_scalar = false;  ///< true for variation-function tables
};

/// Default offset used to realize one-sided limits of closed-form inputs.
double default_h_lim(const Partition& chi);

MetricFunction as_metric(const SetValuedFunction& F, NormChoice norm, double h_lim);
MetricFunction as_metric(const VectorFunction& f, NormChoice norm, double h_lim);

/// Scalar step function given by values at partition nodes (value v_i on
/// [x_i, x_{i+1}), v_n at b), e.g. a variation-function table.
MetricFunction step_metric(Partition chi, std::vector<double> values);

/// V(f, chi) = sum of consecutive distances over the partition. A lower
/// bound for the total variation that converges under refinement for the
/// BV inputs in scope.
double variation(const MetricFunction& f, const Partition& chi);

/// v_f at every node of chi; v_f(a) = 0, monotone non-decreasing.
std::vector<double> variation_function(const MetricFunction& f, const Partition& chi);

/// Total variation by dyadic refinement of `start` until the increment
/// falls below tol or the node budget is exhausted.
double total_variation(const MetricFunction& f, const Partition& start, double tol = 1e-6,
                       std::size_t max_nodes = std::size_t{1} << 20);

/// Local modulus of continuity at x*: sup of rho(f(x1), f(x2)) over the
/// sampled window [x* - delta/2, x* + delta/2] (partition nodes plus the
/// window endpoints and x*).
double local_modulus(const MetricFunction& f, double x_star, double delta, const Partition& chi);

/// One-sided quasi-moduli: sup of rho(f(x*-), f(x)) over the sampled
/// window [x* - delta, x*), and its right-sided mirror.
double quasi_modulus_left(const MetricFunction& f, double x_star, double delta,
                          const Partition& chi);
double quasi_modulus_right(const MetricFunction& f, double x_star, double delta,
                           const Partition& chi);
/// max of the two one-sided quasi-moduli.
double quasi_modulus(const MetricFunction& f, double x_star, double delta, const Partition& chi);

/// max over partition nodes of rho(f(x_i), 0).
double sup_norm(const MetricFunction& f, const Partition& chi);

double sup_norm(const SetValuedFunction& F, const Partition& chi, NormChoice norm);

enum class LipschitzProbeMode {
    around,   ///< all sample pairs in the window
    at_point  ///< pairs (z, x) only
};

/// Estimated local Lipschitz constant: max distance ratio over sampled
/// pairs in shrinking windows of the given radii. Diagnostic only.
double lipschitz_probe(const MetricFunction& f, double x, std::span<const double> radii,
                       LipschitzProbeMode mode = LipschitzProbeMode::around,
                       int samples_per_radius = 16);

// Convenience overloads matching the usual call sites.
double variation(const SetValuedFunction& F, const Partition& chi, NormChoice norm);
double variation(const VectorFunction& f, const Partition& chi, NormChoice norm);
std::vector<double> variation_function(const SetValuedFunction& F, const Partition& chi,
                                       NormChoice norm);

}  // namespace svfa

#endif  // SVFA_SVF_HPP
