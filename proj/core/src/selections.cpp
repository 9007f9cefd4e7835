#include "svfa/selections.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

namespace svfa {

ChainFunction::ChainFunction(Partition chi, std::vector<Point> values)
    : chi_(std::move(chi)), values_(std::move(values)) {
    if (values_.size() != chi_.size())
        throw std::invalid_argument("ChainFunction: one value per node required");
    int d = values_.front().dim();
    for (const Point& p : values_)
        if (p.dim() != d) throw std::invalid_argument("ChainFunction: mixed dimensions");
}

Point ChainFunction::operator()(double x) const {
    if (x >= chi_.b()) return values_.back();
    return values_[chi_.locate(x)];
}

Point ChainFunction::left_limit(double x) const {
    auto idx = chi_.index_of(x, 0.0);
    if (idx && *idx > 0) return values_[*idx - 1];
    if (x >= chi_.b()) return values_[values_.size() - 2];
    return (*this)(x);
}

Point ChainFunction::right_limit(double x) const { return (*this)(x); }

ChainFunction chain_function(const SetValuedFunction& F, const Partition& chi,
                             const MetricChain& phi, NormChoice norm, double tie_tol) {
    std::vector<CompactSet> fibers;
    fibers.reserve(chi.size());
    for (double x : chi.nodes()) fibers.push_back(F(x));
    if (!is_metric_chain(fibers, phi, norm, tie_tol))
        throw std::invalid_argument("chain_function: phi is not a metric chain of the fibers");
    return ChainFunction(chi, phi);
}

Selection::Selection(Partition chi, std::vector<Point> values, double seed_x, Point seed_y)
    : step_(std::move(chi), std::move(values)), seed_x_(seed_x), seed_y_(std::move(seed_y)) {}

namespace {

// Lexicographically smallest among projection ties, the deterministic
// representative. Points are stored sorted, so the first nearest wins.
const Point& greedy_step(const Point& from, const CompactSet& fiber, NormChoice norm,
                         double tie_tol = kTieTolerance) {
    const auto& pts = fiber.points();
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : pts) best = std::min(best, point_dist(from, p, norm));
    for (const Point& p : pts)
        if (point_dist(from, p, norm) <= best + tie_tol) return p;
    return pts.front();  // unreachable
}

std::vector<Point> propagate(const std::vector<CompactSet>& fibers, std::size_t j, Point y,
                             NormChoice norm) {
    std::vector<Point> values(fibers.size(), y);
    for (std::size_t i = j; i + 1 < fibers.size(); ++i)
        values[i + 1] = greedy_step(values[i], fibers[i + 1], norm);
    for (std::size_t i = j; i > 0; --i) values[i - 1] = greedy_step(values[i], fibers[i - 1], norm);
    return values;
}

// Allocation-free variant writing d coordinates per node into a flat
// buffer; the family builder runs this over tens of thousands of seeds.
double dist_flat(const double* a, const Point& q, NormChoice norm) {
    const auto& b = q.coords();
    switch (norm) {
        case NormChoice::euclidean: {
            double s = 0;
            for (std::size_t i = 0; i < b.size(); ++i) {
                double d = a[i] - b[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case NormChoice::max: {
            double m = 0;
            for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
            return m;
        }
        case NormChoice::sum: {
            double s = 0;
            for (std::size_t i = 0; i < b.size(); ++i) s += std::fabs(a[i] - b[i]);
            return s;
        }
    }
    return 0;
}

const Point& greedy_step_flat(const double* from, const CompactSet& fiber, NormChoice norm,
                              double tie_tol = kTieTolerance) {
    const auto& pts = fiber.points();
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : pts) best = std::min(best, dist_flat(from, p, norm));
    for (const Point& p : pts)
        if (dist_flat(from, p, norm) <= best + tie_tol) return p;
    return pts.front();  // unreachable
}

void propagate_flat(const std::vector<CompactSet>& fibers, std::size_t j, const Point& y,
                    NormChoice norm, std::size_t d, std::vector<double>& out) {
    out.resize(fibers.size() * d);
    auto write = [&](std::size_t node, const Point& p) {
        for (std::size_t c = 0; c < d; ++c) out[node * d + c] = p[c];
    };
    write(j, y);
    for (std::size_t i = j; i + 1 < fibers.size(); ++i)
        write(i + 1, greedy_step_flat(&out[i * d], fibers[i + 1], norm));
    for (std::size_t i = j; i > 0; --i)
        write(i - 1, greedy_step_flat(&out[i * d], fibers[i - 1], norm));
}

bool flat_equal(const std::vector<double>& u, const std::vector<double>& v, double tol) {
    if (u.size() != v.size()) return false;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (std::fabs(u[i] - v[i]) > tol) return false;
    return true;
}

}  // namespace

Selection metric_selection_through(const SetValuedFunction& F, const Partition& chi,
                                   double seed_x, const Point& seed_y, NormChoice norm,
                                   double tie_tol) {
    auto idx = chi.index_of(seed_x, 1e-12);
    if (!idx) throw std::invalid_argument("metric_selection_through: seed x is not a node");
    std::vector<CompactSet> fibers;
    fibers.reserve(chi.size());
    for (double x : chi.nodes()) fibers.push_back(F(x));
    if (dist_point_set(seed_y, fibers[*idx], norm) > tie_tol)
        throw std::invalid_argument("metric_selection_through: seed point not in fiber");
    Point snapped = project(seed_y, fibers[*idx], norm, tie_tol)[0];
    std::vector<Point> values = propagate(fibers, *idx, snapped, norm);
    return Selection(chi, std::move(values), chi[*idx], snapped);
}

std::vector<Selection> selection_family(const SetValuedFunction& F, const Partition& chi,
                                        int seeds_per_fiber, NormChoice norm,
                                        const FamilyOptions& opts) {
    if (seeds_per_fiber < 1)
        throw std::invalid_argument("selection_family: seeds_per_fiber must be positive");

    std::vector<CompactSet> fibers;
    fibers.reserve(chi.size());
    for (double x : chi.nodes()) fibers.push_back(F(x));

    // Seed list: stratified stride over each fiber's sorted point list.
    struct Seed {
        std::size_t node;
        std::size_t point;
    };
    std::vector<Seed> seeds;
    for (std::size_t i = 0; i < fibers.size(); ++i) {
        std::size_t m = fibers[i].size();
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(seeds_per_fiber), m);
        for (std::size_t t = 0; t < k; ++t) seeds.push_back({i, t * m / k});
    }

    // Jump fibers get fully seeded. The threshold separates genuine jumps
    // from the small fiber-to-fiber drift of continuous inputs.
    std::vector<double> changes(fibers.size() > 1 ? fibers.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < fibers.size(); ++i)
        changes[i] = hausdorff(fibers[i], fibers[i + 1], norm);
    double threshold = opts.jump_threshold;
    if (threshold <= 0) {
        std::vector<double> positive;
        for (double c : changes)
            if (c > 0) positive.push_back(c);
        if (positive.empty()) {
            threshold = std::numeric_limits<double>::infinity();
        } else {
            std::nth_element(positive.begin(), positive.begin() + positive.size() / 2,
                             positive.end());
            threshold = std::max(1e-8, 3 * positive[positive.size() / 2]);
        }
    }
    for (std::size_t i = 0; i + 1 < fibers.size(); ++i) {
        if (changes[i] <= threshold) continue;
        for (std::size_t which : {i, i + 1}) {
            if (fibers[which].size() > opts.max_fiber_points_for_jump_seeding) continue;
            for (std::size_t p = 0; p < fibers[which].size(); ++p) seeds.push_back({which, p});
        }
    }

    // Propagate seeds block by block (bounded memory) and keep the first
    // representative of each distinct value table, in seed order.
    std::size_t d = static_cast<std::size_t>(F.dim());
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    bool parallel = opts.parallel && seeds.size() > 64 && hw > 1;
    std::size_t block = parallel ? std::max<std::size_t>(64, 4 * hw) : 64;

    std::vector<std::vector<double>> kept_tables;
    std::vector<std::size_t> kept_seed;
    std::vector<std::vector<double>> scratch(std::min(block, seeds.size()));

    for (std::size_t base = 0; base < seeds.size(); base += block) {
        std::size_t count = std::min(block, seeds.size() - base);
        auto fill = [&](std::size_t local) {
            const Seed& sd = seeds[base + local];
            propagate_flat(fibers, sd.node, fibers[sd.node][sd.point], norm, d, scratch[local]);
        };
        if (parallel && count > 1) {
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (;;) {
                    std::size_t l = next.fetch_add(1);
                    if (l >= count) return;
                    fill(l);
                }
            };
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < std::min<unsigned>(hw, static_cast<unsigned>(count)); ++t)
                pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        } else {
            for (std::size_t l = 0; l < count; ++l) fill(l);
        }
        for (std::size_t l = 0; l < count; ++l) {
            bool dup = false;
            for (const auto& kept : kept_tables)
                if (flat_equal(kept, scratch[l], opts.dedup_tol)) {
                    dup = true;
                    break;
                }
            if (!dup) {
                kept_tables.push_back(scratch[l]);
                kept_seed.push_back(base + l);
            }
        }
    }

    std::vector<Selection> family;
    family.reserve(kept_tables.size());
    for (std::size_t k = 0; k < kept_tables.size(); ++k) {
        const Seed& sd = seeds[kept_seed[k]];
        std::vector<Point> values;
        values.reserve(chi.size());
        for (std::size_t i = 0; i < chi.size(); ++i) {
            std::vector<double> c(kept_tables[k].begin() + static_cast<long>(i * d),
                                  kept_tables[k].begin() + static_cast<long>((i + 1) * d));
            values.emplace_back(std::move(c));
        }
        family.emplace_back(chi, std::move(values), chi[sd.node], fibers[sd.node][sd.point]);
    }
    return family;
}

std::vector<Selection> refine_selection(const SetValuedFunction& F, const Selection& s,
                                        int levels, NormChoice norm) {
    if (levels < 1) throw std::invalid_argument("refine_selection: levels must be positive");
    std::vector<Selection> out;
    out.push_back(s);
    Partition chi = s.partition();
    for (int l = 0; l < levels; ++l) {
        if (2 * chi.size() - 1 > (std::size_t{1} << 20))
            throw std::invalid_argument("refine_selection: refinement exceeds the node budget");
        chi = chi.refined();
        out.push_back(metric_selection_through(F, chi, s.seed_x(), s.seed_y(), norm));
    }
    return out;
}

MetricFunction as_metric(const Selection& s, NormChoice norm) {
    auto sp = std::make_shared<Selection>(s);
    MetricFunction m;
    m.a = s.partition().a();
    m.b = s.partition().b();
    m.dist = [sp, norm](double x1, double x2) { return point_dist((*sp)(x1), (*sp)(x2), norm); };
    m.dist_left = [sp, norm](double xs, double x) {
        return point_dist(sp->left_limit(xs), (*sp)(x), norm);
    };
    m.dist_right = [sp, norm](double xs, double x) {
        return point_dist(sp->right_limit(xs), (*sp)(x), norm);
    };
    m.norm_at = [sp, norm](double x) { return point_norm((*sp)(x), norm); };
    return m;
}

VectorFunction to_vector_function(const Selection& s) {
    auto sp = std::make_shared<Selection>(s);
    return VectorFunction(s.partition().a(), s.partition().b(), s.dim(),
                          [sp](double x) { return (*sp)(x); });
}

}  // namespace svfa
