#include "svfa/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svfa {

namespace {

void require_finite(const std::vector<double>& c) {
    for (double v : c)
        if (!std::isfinite(v)) throw std::invalid_argument("Point: non-finite coordinate");
}

void require_same_dim(int da, int db, const char* what) {
    if (da != db) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

Point::Point(std::vector<double> coords) : c_(std::move(coords)) {
    if (c_.empty()) throw std::invalid_argument("Point: empty coordinate list");
    require_finite(c_);
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Point Point::zero(int dim) { return Point(std::vector<double>(static_cast<std::size_t>(dim), 0.0)); }

bool Point::operator<(const Point& o) const {
    return std::lexicographical_compare(c_.begin(), c_.end(), o.c_.begin(), o.c_.end());
}

Point operator+(const Point& p, const Point& q) {
    require_same_dim(p.dim(), q.dim(), "Point+");
    std::vector<double> r(p.coords());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += q[i];
    return Point(std::move(r));
}

Point operator-(const Point& p, const Point& q) {
    require_same_dim(p.dim(), q.dim(), "Point-");
    std::vector<double> r(p.coords());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= q[i];
    return Point(std::move(r));
}

Point operator*(double s, const Point& p) {
    std::vector<double> r(p.coords());
    for (double& v : r) v *= s;
    return Point(std::move(r));
}

double point_norm(const Point& p, NormChoice norm) {
    const auto& c = p.coords();
    switch (norm) {
        case NormChoice::euclidean: {
            double s = 0;
            for (double v : c) s += v * v;
            return std::sqrt(s);
        }
        case NormChoice::max: {
            double m = 0;
            for (double v : c) m = std::max(m, std::fabs(v));
            return m;
        }
        case NormChoice::sum: {
            double s = 0;
            for (double v : c) s += std::fabs(v);
            return s;
        }
    }
    return 0;
}

double point_dist(const Point& p, const Point& q, NormChoice norm) {
    require_same_dim(p.dim(), q.dim(), "point_dist");
    const auto& a = p.coords();
    const auto& b = q.coords();
    switch (norm) {
        case NormChoice::euclidean: {
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                double d = a[i] - b[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case NormChoice::max: {
            double m = 0;
            for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
            return m;
        }
        case NormChoice::sum: {
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
            return s;
        }
    }
    return 0;
}

CompactSet::CompactSet(std::vector<Point> points) : dim_(0), pts_(std::move(points)) {
    if (pts_.empty()) throw std::invalid_argument("CompactSet: empty point set");
    dim_ = pts_.front().dim();
    for (const Point& p : pts_) require_same_dim(p.dim(), dim_, "CompactSet");
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
}

CompactSet CompactSet::singleton(Point p) {
    std::vector<Point> v;
    v.push_back(std::move(p));
    return CompactSet(std::move(v));
}

double CompactSet::norm(NormChoice norm) const {
    double m = 0;
    for (const Point& p : pts_) m = std::max(m, point_norm(p, norm));
    return m;
}

double dist_point_set(const Point& p, const CompactSet& A, NormChoice norm) {
    require_same_dim(p.dim(), A.dim(), "dist_point_set");
    double best = std::numeric_limits<double>::infinity();
    for (const Point& a : A.points()) best = std::min(best, point_dist(p, a, norm));
    return best;
}

CompactSet project(const Point& p, const CompactSet& A, NormChoice norm, double tie_tol) {
    double d = dist_point_set(p, A, norm);
    std::vector<Point> keep;
    for (const Point& a : A.points())
        if (point_dist(p, a, norm) <= d + tie_tol) keep.push_back(a);
    return CompactSet(std::move(keep));
}

double hausdorff(const CompactSet& A, const CompactSet& B, NormChoice norm) {
    require_same_dim(A.dim(), B.dim(), "hausdorff");
    double ab = 0;
    for (const Point& a : A.points()) ab = std::max(ab, dist_point_set(a, B, norm));
    double ba = 0;
    for (const Point& b : B.points()) ba = std::max(ba, dist_point_set(b, A, norm));
    return std::max(ab, ba);
}

std::vector<std::pair<Point, Point>> metric_pairs(const CompactSet& A, const CompactSet& B,
                                                  NormChoice norm, double tie_tol) {
    require_same_dim(A.dim(), B.dim(), "metric_pairs");
    std::vector<std::pair<Point, Point>> out;
    for (const Point& a : A.points()) {
        CompactSet proj = project(a, B, norm, tie_tol);
        for (const Point& b : proj.points()) out.emplace_back(a, b);
    }
    for (const Point& b : B.points()) {
        CompactSet proj = project(b, A, norm, tie_tol);
        for (const Point& a : proj.points()) out.emplace_back(a, b);
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        if (l.first < r.first) return true;
        if (r.first < l.first) return false;
        return l.second < r.second;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& l, const auto& r) {
                              return l.first == r.first && l.second == r.second;
                          }),
              out.end());
    return out;
}

namespace {

// Successor candidates per consecutive pair (A, B): for a in A, the points
// b in B with (a, b) a metric pair, sorted lexicographically.
std::vector<std::vector<std::size_t>> successor_table(const CompactSet& A, const CompactSet& B,
                                                      NormChoice norm, double tie_tol) {
    const auto& as = A.points();
    const auto& bs = B.points();
    std::vector<std::vector<std::size_t>> succ(as.size());
    for (std::size_t i = 0; i < as.size(); ++i) {
        double d = dist_point_set(as[i], B, norm);
        for (std::size_t j = 0; j < bs.size(); ++j)
            if (point_dist(as[i], bs[j], norm) <= d + tie_tol) succ[i].push_back(j);
    }
    // b in B whose projection onto A contains a.
    for (std::size_t j = 0; j < bs.size(); ++j) {
        double d = dist_point_set(bs[j], A, norm);
        for (std::size_t i = 0; i < as.size(); ++i)
            if (point_dist(bs[j], as[i], norm) <= d + tie_tol) succ[i].push_back(j);
    }
    for (auto& v : succ) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return succ;
}

}  // namespace

ChainList metric_chains(const std::vector<CompactSet>& sets, std::size_t cap, NormChoice norm,
                        double tie_tol) {
    if (sets.size() < 2) throw std::invalid_argument("metric_chains: need at least 2 sets");
    if (cap == 0) throw std::invalid_argument("metric_chains: cap must be positive");
    for (const CompactSet& s : sets) require_same_dim(s.dim(), sets.front().dim(), "metric_chains");

    std::vector<std::vector<std::vector<std::size_t>>> succ;
    succ.reserve(sets.size() - 1);
    for (std::size_t i = 0; i + 1 < sets.size(); ++i)
        succ.push_back(successor_table(sets[i], sets[i + 1], norm, tie_tol));

    ChainList result;
    std::vector<std::size_t> idx(sets.size(), 0);

    // Depth-first over candidate indices; position 0 ranges over all of
    // sets[0], later positions over the successor table.
    struct Frame {
        std::size_t pos;     // which candidate at this depth
        std::size_t count;   // number of candidates
    };
    std::vector<Frame> stack;
    stack.push_back({0, sets[0].size()});
    std::vector<std::size_t> chosen(sets.size(), 0);

    while (!stack.empty()) {
        Frame& f = stack.back();
        std::size_t depth = stack.size() - 1;
        if (f.pos >= f.count) {
            stack.pop_back();
            if (!stack.empty()) ++stack.back().pos;
            continue;
        }
        if (depth == 0)
            chosen[0] = f.pos;
        else
            chosen[depth] = succ[depth - 1][chosen[depth - 1]][f.pos];
        if (depth + 1 == sets.size()) {
            MetricChain chain;
            chain.reserve(sets.size());
            for (std::size_t i = 0; i < sets.size(); ++i) chain.push_back(sets[i][chosen[i]]);
            result.chains.push_back(std::move(chain));
            if (result.chains.size() >= cap) {
                result.truncated = true;
                return result;
            }
            ++f.pos;
        } else {
            stack.push_back({0, succ[depth][chosen[depth]].size()});
        }
    }
    return result;
}

MetricChain metric_chain_through(const std::vector<CompactSet>& sets, std::size_t j,
                                 const Point& a, NormChoice norm, double tie_tol) {
    if (sets.empty()) throw std::invalid_argument("metric_chain_through: no sets");
    if (j >= sets.size()) throw std::invalid_argument("metric_chain_through: index out of range");
    if (dist_point_set(a, sets[j], norm) > tie_tol)
        throw std::invalid_argument("metric_chain_through: anchor point not in set");
    // Snap to the exact stored point.
    Point anchor = project(a, sets[j], norm, tie_tol)[0];

    MetricChain chain(sets.size(), anchor);
    for (std::size_t i = j; i + 1 < sets.size(); ++i)
        chain[i + 1] = project(chain[i], sets[i + 1], norm, tie_tol)[0];
    for (std::size_t i = j; i > 0; --i)
        chain[i - 1] = project(chain[i], sets[i - 1], norm, tie_tol)[0];
    return chain;
}

bool is_metric_chain(const std::vector<CompactSet>& sets, const MetricChain& chain,
                     NormChoice norm, double tie_tol) {
    if (chain.size() != sets.size() || sets.size() < 2) return false;
    for (std::size_t i = 0; i < sets.size(); ++i)
        if (dist_point_set(chain[i], sets[i], norm) > tie_tol) return false;
    for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
        double d = point_dist(chain[i], chain[i + 1], norm);
        bool fwd = d <= dist_point_set(chain[i], sets[i + 1], norm) + tie_tol;
        bool bwd = d <= dist_point_set(chain[i + 1], sets[i], norm) + tie_tol;
        if (!fwd && !bwd) return false;
    }
    return true;
}

CombinationResult metric_linear_combination(const std::vector<double>& lambdas,
                                            const std::vector<CompactSet>& sets, std::size_t cap,
                                            NormChoice norm, double tie_tol) {
    if (lambdas.size() != sets.size())
        throw std::invalid_argument("metric_linear_combination: length mismatch");
    if (sets.empty()) throw std::invalid_argument("metric_linear_combination: no sets");
    if (sets.size() == 1) {
        std::vector<Point> pts;
        for (const Point& p : sets[0].points()) pts.push_back(lambdas[0] * p);
        return {CompactSet(std::move(pts)), false};
    }
    ChainList chains = metric_chains(sets, cap, norm, tie_tol);
    std::vector<Point> pts;
    pts.reserve(chains.chains.size());
    for (const MetricChain& ch : chains.chains) {
        Point acc = lambdas[0] * ch[0];
        for (std::size_t i = 1; i < ch.size(); ++i) acc = acc + lambdas[i] * ch[i];
        pts.push_back(std::move(acc));
    }
    return {CompactSet(std::move(pts)), chains.truncated};
}

CompactSet minkowski_linear_combination(const std::vector<double>& lambdas,
                                        const std::vector<CompactSet>& sets) {
    if (lambdas.size() != sets.size())
        throw std::invalid_argument("minkowski_linear_combination: length mismatch");
    if (sets.empty()) throw std::invalid_argument("minkowski_linear_combination: no sets");
    std::vector<Point> acc;
    for (const Point& p : sets[0].points()) acc.push_back(lambdas[0] * p);
    for (std::size_t i = 1; i < sets.size(); ++i) {
        std::vector<Point> next;
        next.reserve(acc.size() * sets[i].size());
        for (const Point& p : acc)
            for (const Point& q : sets[i].points()) next.push_back(p + lambdas[i] * q);
        CompactSet dedup(std::move(next));  // sort + dedup keeps sizes in check
        acc.assign(dedup.points().begin(), dedup.points().end());
    }
    return CompactSet(std::move(acc));
}

CompactSet dedup_points(std::vector<Point> pts, double tol) {
    std::vector<Point> keep;
    for (Point& p : pts) {
        bool dup = false;
        for (const Point& q : keep) {
            bool close = true;
            for (int c = 0; c < p.dim(); ++c)
                if (std::fabs(p[static_cast<std::size_t>(c)] - q[static_cast<std::size_t>(c)]) >
                    tol) {
                    close = false;
                    break;
                }
            if (close) {
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(std::move(p));
    }
    return CompactSet(std::move(keep));
}

CompactSet kuratowski_limsup(const std::vector<CompactSet>& sequence, double eps,
                             std::size_t window, NormChoice norm) {
    if (sequence.empty()) throw std::invalid_argument("kuratowski_limsup: empty sequence");
    if (eps <= 0) throw std::invalid_argument("kuratowski_limsup: eps must be positive");
    // Default window: half the sequence, rounded down to even so that a
    // period-2 sequence keeps both accumulation points.
    std::size_t w = window;
    if (w == 0) {
        w = sequence.size() / 2;
        w -= w % 2;
        w = std::max<std::size_t>(2, w);
    }
    w = std::min(w, sequence.size());
    std::size_t first = sequence.size() - w;

    std::vector<Point> candidates;
    for (std::size_t i = first; i < sequence.size(); ++i)
        for (const Point& p : sequence[i].points()) candidates.push_back(p);

    std::size_t need = (w + 1) / 2;
    std::vector<Point> keep;
    for (const Point& p : candidates) {
        std::size_t hits = 0;
        for (std::size_t i = first; i < sequence.size(); ++i)
            if (dist_point_set(p, sequence[i], norm) <= eps) ++hits;
        if (hits >= need) keep.push_back(p);
    }
    if (keep.empty())
        throw std::domain_error("kuratowski_limsup: no recurrent point at this eps/window");
    return CompactSet(std::move(keep));
}

}  // namespace svfa
