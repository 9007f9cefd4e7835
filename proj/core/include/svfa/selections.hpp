#ifndef SVFA_SELECTIONS_HPP
#define SVFA_SELECTIONS_HPP

#include <cstddef>
#include <vector>

#include "svfa/sets.hpp"
#include "svfa/svf.hpp"

namespace svfa {

/// Step function on a partition built from a metric chain over the
/// fibers: value y_i on [x_i, x_{i+1}), y_n at x_n, constant outside.
class ChainFunction {
public:
    ChainFunction(Partition chi, std::vector<Point> values);

    const Partition& partition() const { return chi_; }
    const std::vector<Point>& values() const { return values_; }
    int dim() const { return values_.front().dim(); }

    Point operator()(double x) const;
    Point left_limit(double x) const;
    Point right_limit(double x) const;

private:
    Partition chi_;
    std::vector<Point> values_;
};

/// Validates phi against the fibers of F on chi and wraps it as a step
/// function.
ChainFunction chain_function(const SetValuedFunction& F, const Partition& chi,
                             const MetricChain& phi, NormChoice norm,
                             double tie_tol = kTieTolerance);

/// A single-valued selection of an SVF on a partition, anchored at a
/// seed point of the graph; consecutive values form metric pairs of
/// consecutive fibers.
class Selection {
public:
    Selection(Partition chi, std::vector<Point> values, double seed_x, Point seed_y);

    const Partition& partition() const { return step_.partition(); }
    const std::vector<Point>& values() const { return step_.values(); }
    int dim() const { return step_.dim(); }
    double seed_x() const { return seed_x_; }
    const Point& seed_y() const { return seed_y_; }

    Point operator()(double x) const { return step_(x); }
    Point left_limit(double x) const { return step_.left_limit(x); }
    Point right_limit(double x) const { return step_.right_limit(x); }

private:
    ChainFunction step_;
    double seed_x_;
    Point seed_y_;
};

/// The metric selection through (x_j, y): values[j] = y, propagated left
/// and right by greedy projection onto the neighboring fibers, breaking
/// ties by the lexicographically smallest point.
Selection metric_selection_through(const SetValuedFunction& F, const Partition& chi,
                                   double seed_x, const Point& seed_y, NormChoice norm,
                                   double tie_tol = kTieTolerance);

struct FamilyOptions {
    double dedup_tol = 1e-12;     ///< per-coordinate value-table tolerance
    double jump_threshold = 0;    ///< fiber-change size treated as a jump; 0 = automatic
    bool parallel = true;
    std::size_t max_fiber_points_for_jump_seeding = 64;
};

/// Finite surrogate for the set of metric selections: one anchored
/// selection per seed, seeds chosen by stratified striding over each
/// fiber plus every point of every detected jump fiber, deduplicated by
/// value table.
std::vector<Selection> selection_family(const SetValuedFunction& F, const Partition& chi,
                                        int seeds_per_fiber, NormChoice norm,
                                        const FamilyOptions& opts = {});

/// Re-anchors the seed of s on dyadically refined partitions and returns
/// the refinement sequence (original first) for convergence diagnostics.
std::vector<Selection> refine_selection(const SetValuedFunction& F, const Selection& s,
                                        int levels, NormChoice norm);

MetricFunction as_metric(const Selection& s, NormChoice norm);

/// Step-function view of a selection, for the integral machinery.
VectorFunction to_vector_function(const Selection& s);

}  // namespace svfa

#endif  // SVFA_SELECTIONS_HPP
