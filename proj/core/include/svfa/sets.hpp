#ifndef SVFA_SETS_HPP
#define SVFA_SETS_HPP

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace svfa {

/// Choice of norm on R^d. A computation must use one norm throughout;
/// mixing norms between calls that feed each other is not supported.
enum class NormChoice { euclidean, max, sum };

/// A point of R^d with finite coordinates.
class Point {
public:
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords);

    static Point zero(int dim);

    int dim() const { return static_cast<int>(c_.size()); }
    double operator[](std::size_t i) const { return c_[i]; }
    const std::vector<double>& coords() const { return c_; }

    bool operator==(const Point& o) const { return c_ == o.c_; }
    /// Lexicographic coordinate order; used everywhere ties must be
    /// broken deterministically.
    bool operator<(const Point& o) const;

private:
    std::vector<double> c_;
};

Point operator+(const Point& p, const Point& q);
Point operator-(const Point& p, const Point& q);
Point operator*(double s, const Point& p);

double point_norm(const Point& p, NormChoice norm);
double point_dist(const Point& p, const Point& q, NormChoice norm);

/// A finite nonempty subset of R^d: the computational stand-in for a
/// compact set. Points are kept sorted lexicographically and
/// deduplicated under exact equality.
class CompactSet {
public:
    explicit CompactSet(std::vector<Point> points);
    static CompactSet singleton(Point p);

    int dim() const { return dim_; }
    std::size_t size() const { return pts_.size(); }
    const std::vector<Point>& points() const { return pts_; }
    const Point& operator[](std::size_t i) const { return pts_[i]; }

    /// |A| = haus(A, {0}), which for finite sets is max_a |a|.
    double norm(NormChoice norm) const;

    bool operator==(const CompactSet& o) const { return pts_ == o.pts_; }

private:
    int dim_;
    std::vector<Point> pts_;
};

/// Tuple of points, one per set in an ordered list, whose consecutive
/// entries are metric pairs of the corresponding sets.
using MetricChain = std::vector<Point>;

/// Default absolute tolerance for projection ties.
inline constexpr double kTieTolerance = 1e-9;

/// Default cap on enumerated metric chains.
inline constexpr std::size_t kChainCap = 10000;

/// min_{a in A} |p - a|.
double dist_point_set(const Point& p, const CompactSet& A, NormChoice norm);

/// The projection set Pi_A(p) = { a in A : |p-a| = dist(p,A) }.
/// Ties within tie_tol (absolute) are all included.
CompactSet project(const Point& p, const CompactSet& A, NormChoice norm,
                   double tie_tol = kTieTolerance);

/// Hausdorff distance, exact over all point pairs.
double hausdorff(const CompactSet& A, const CompactSet& B, NormChoice norm);

/// All pairs (a, b) with a in Pi_A(b) or b in Pi_B(a). The maximum of
/// |a-b| over the result equals hausdorff(A, B) up to the tie tolerance.
std::vector<std::pair<Point, Point>> metric_pairs(const CompactSet& A,
                                                  const CompactSet& B,
                                                  NormChoice norm,
                                                  double tie_tol = kTieTolerance);

struct ChainList {
    std::vector<MetricChain> chains;
    bool truncated = false;  ///< true when the cap stopped the enumeration
};

/// Enumerates CH(A_0,...,A_n) depth-first in lexicographic point order,
/// stopping after `cap` chains.
ChainList metric_chains(const std::vector<CompactSet>& sets, std::size_t cap = kChainCap,
                        NormChoice norm = NormChoice::euclidean,
                        double tie_tol = kTieTolerance);

/// The anchored construction: a single chain through the given point of
/// sets[j], extended left and right by greedy projection
/// (lexicographically smallest among ties).
MetricChain metric_chain_through(const std::vector<CompactSet>& sets, std::size_t j,
                                 const Point& a, NormChoice norm,
                                 double tie_tol = kTieTolerance);

/// Checks the consecutive metric-pair predicate.
bool is_metric_chain(const std::vector<CompactSet>& sets, const MetricChain& chain,
                     NormChoice norm, double tie_tol = kTieTolerance);

struct CombinationResult {
    CompactSet set;
    bool truncated = false;
};

/// Metric linear combination: { sum_i lambda_i a_i : chains }, deduplicated.
CombinationResult metric_linear_combination(const std::vector<double>& lambdas,
                                            const std::vector<CompactSet>& sets,
                                            std::size_t cap = kChainCap,
                                            NormChoice norm = NormChoice::euclidean,
                                            double tie_tol = kTieTolerance);

/// Minkowski linear combination: full Cartesian sum over all selections.
CompactSet minkowski_linear_combination(const std::vector<double>& lambdas,
                                        const std::vector<CompactSet>& sets);

/// Collapses points that agree within tol per coordinate (first
/// occurrence kept) and builds the set.
CompactSet dedup_points(std::vector<Point> pts, double tol);

/// Windowed diagnostic approximation of the upper Kuratowski limit of a
/// finite sequence: points of the trailing `window` sets that are within
/// eps of at least half of those sets. window = 0 means half the
/// sequence length. Never used on the main computational path.
CompactSet kuratowski_limsup(const std::vector<CompactSet>& sequence, double eps,
                             std::size_t window = 0,
                             NormChoice norm = NormChoice::euclidean);

}  // namespace svfa

#endif  // SVFA_SETS_HPP
