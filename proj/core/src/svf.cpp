#include "svfa/svf.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace svfa {

Partition::Partition(std::vector<double> nodes) : x_(std::move(nodes)) {
    if (x_.size() < 2) throw std::invalid_argument("Partition: need at least two nodes");
    for (std::size_t i = 0; i + 1 < x_.size(); ++i)
        if (!(x_[i] < x_[i + 1]))
            throw std::invalid_argument("Partition: nodes must be strictly increasing");
}

Partition Partition::uniform(double a, double b, int segments) {
    if (!(a < b)) throw std::invalid_argument("Partition: empty interval");
    if (segments < 1) throw std::invalid_argument("Partition: need at least one segment");
    std::vector<double> x(static_cast<std::size_t>(segments) + 1);
    for (int i = 0; i <= segments; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / segments;
    x.front() = a;
    x.back() = b;
    return Partition(std::move(x));
}

double Partition::mesh() const {
    double m = 0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) m = std::max(m, x_[i + 1] - x_[i]);
    return m;
}

Partition Partition::refined() const {
    std::vector<double> x;
    x.reserve(2 * x_.size() - 1);
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        x.push_back(x_[i]);
        x.push_back(0.5 * (x_[i] + x_[i + 1]));
    }
    x.push_back(x_.back());
    return Partition(std::move(x));
}

std::size_t Partition::locate(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

std::optional<std::size_t> Partition::index_of(double x, double tol) const {
    std::size_t i = locate(x);
    if (std::fabs(x_[i] - x) <= tol) return i;
    if (i + 1 < x_.size() && std::fabs(x_[i + 1] - x) <= tol) return i + 1;
    return std::nullopt;
}

VectorFunction::VectorFunction(double a, double b, int dim, std::function<Point(double)> f)
    : a_(a), b_(b), dim_(dim), f_(std::move(f)) {
    if (!(a_ < b_)) throw std::invalid_argument("VectorFunction: empty interval");
    if (dim_ < 1) throw std::invalid_argument("VectorFunction: dimension must be positive");
}

VectorFunction VectorFunction::scalar(double a, double b, std::function<double(double)> f) {
    return VectorFunction(a, b, 1, [g = std::move(f)](double x) { return Point{g(x)}; });
}

VectorFunction VectorFunction::monomial(double a, double b, int i) {
    return scalar(a, b, [i](double t) { return i == 0 ? 1.0 : std::pow(t, i); });
}

Point VectorFunction::operator()(double x) const {
    return f_(std::clamp(x, a_, b_));
}

SetValuedFunction SetValuedFunction::closed_form(double a, double b, int dim,
                                                 std::function<CompactSet(double)> f,
                                                 std::string name) {
    if (!(a < b)) throw std::invalid_argument("SetValuedFunction: empty interval");
    SetValuedFunction F;
    F.a_ = a;
    F.b_ = b;
    F.dim_ = dim;
    F.f_ = std::move(f);
    F.name_ = std::move(name);
    return F;
}

SetValuedFunction SetValuedFunction::grid(Partition nodes, std::vector<CompactSet> fibers,
                                          std::string name) {
    if (fibers.size() != nodes.size())
        throw std::invalid_argument("SetValuedFunction: one fiber per node required");
    int dim = fibers.front().dim();
    for (const CompactSet& f : fibers)
        if (f.dim() != dim) throw std::invalid_argument("SetValuedFunction: mixed fiber dimension");
    SetValuedFunction F;
    F.a_ = nodes.a();
    F.b_ = nodes.b();
    F.dim_ = dim;
    F.grid_ = std::move(nodes);
    F.fibers_ = std::move(fibers);
    F.name_ = std::move(name);
    return F;
}

CompactSet SetValuedFunction::operator()(double x) const {
    double xc = std::clamp(x, a_, b_);
    if (grid_) {
        if (xc >= b_) return fibers_.back();
        return fibers_[grid_->locate(xc)];
    }
    return f_(xc);
}

CompactSet SetValuedFunction::left_limit(double x, double h_lim) const {
    double xc = std::clamp(x, a_, b_);
    if (grid_) {
        auto idx = grid_->index_of(xc, 0.0);
        if (idx && *idx > 0) return fibers_[*idx - 1];
        if (xc >= b_) return fibers_[fibers_.size() - 2];  // value on [x_{N-1}, b)
        return (*this)(xc);
    }
    return f_(std::clamp(xc - h_lim, a_, b_));
}

CompactSet SetValuedFunction::right_limit(double x, double h_lim) const {
    double xc = std::clamp(x, a_, b_);
    if (grid_) return (*this)(xc);  // grid steps are right-continuous except at b
    return f_(std::clamp(xc + h_lim, a_, b_));
}

const Partition& SetValuedFunction::grid_nodes() const {
    if (!grid_) throw std::logic_error("SetValuedFunction: not grid-backed");
    return *grid_;
}

const std::vector<CompactSet>& SetValuedFunction::grid_fibers() const {
    if (!grid_) throw std::logic_error("SetValuedFunction: not grid-backed");
    return fibers_;
}

double default_h_lim(const Partition& chi) {
    return std::min(chi.mesh() / 2, 1e-6 * (chi.b() - chi.a()));
}

MetricFunction as_metric(const SetValuedFunction& F, NormChoice norm, double h_lim) {
    auto Fp = std::make_shared<SetValuedFunction>(F);
    MetricFunction m;
    m.a = F.a();
    m.b = F.b();
    m.dist = [Fp, norm](double x1, double x2) { return hausdorff((*Fp)(x1), (*Fp)(x2), norm); };
    m.dist_left = [Fp, norm, h_lim](double xs, double x) {
        return hausdorff(Fp->left_limit(xs, h_lim), (*Fp)(x), norm);
    };
    m.dist_right = [Fp, norm, h_lim](double xs, double x) {
        return hausdorff(Fp->right_limit(xs, h_lim), (*Fp)(x), norm);
    };
    m.norm_at = [Fp, norm](double x) { return (*Fp)(x).norm(norm); };
    return m;
}

MetricFunction as_metric(const VectorFunction& f, NormChoice norm, double h_lim) {
    auto fp = std::make_shared<VectorFunction>(f);
    MetricFunction m;
    m.a = f.a();
    m.b = f.b();
    m.dist = [fp, norm](double x1, double x2) { return point_dist((*fp)(x1), (*fp)(x2), norm); };
    m.dist_left = [fp, norm, h_lim](double xs, double x) {
        return point_dist((*fp)(xs - h_lim), (*fp)(x), norm);
    };
    m.dist_right = [fp, norm, h_lim](double xs, double x) {
        return point_dist((*fp)(xs + h_lim), (*fp)(x), norm);
    };
    m.norm_at = [fp, norm](double x) { return point_norm((*fp)(x), norm); };
    return m;
}

MetricFunction step_metric(Partition chi, std::vector<double> values) {
    if (values.size() != chi.size())
        throw std::invalid_argument("step_metric: one value per node required");
    auto nodes = std::make_shared<Partition>(std::move(chi));
    auto vals = std::make_shared<std::vector<double>>(std::move(values));
    auto at = [nodes, vals](double x) {
        if (x >= nodes->b()) return vals->back();
        return (*vals)[nodes->locate(x)];
    };
    auto left_at = [nodes, vals, at](double x) {
        auto idx = nodes->index_of(x, 0.0);
        if (idx && *idx > 0) return (*vals)[*idx - 1];
        if (x >= nodes->b()) return (*vals)[vals->size() - 2];
        return at(x);
    };
    bool monotone = std::is_sorted(vals->begin(), vals->end());
    MetricFunction m;
    m.a = nodes->a();
    m.b = nodes->b();
    m.dist = [at](double x1, double x2) { return std::fabs(at(x1) - at(x2)); };
    m.dist_left = [left_at, at](double xs, double x) { return std::fabs(left_at(xs) - at(x)); };
    m.dist_right = [at](double xs, double x) { return std::fabs(at(xs) - at(x)); };
    m.norm_at = [at](double x) { return std::fabs(at(x)); };
    m.monotone_scalar = monotone;
    return m;
}

double variation(const MetricFunction& f, const Partition& chi) {
    double sum = 0, comp = 0;  // Kahan
    for (std::size_t i = 1; i < chi.size(); ++i) {
        double term = f.dist(chi[i - 1], chi[i]) - comp;
        double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum;
}

std::vector<double> variation_function(const MetricFunction& f, const Partition& chi) {
    std::vector<double> v(chi.size(), 0.0);
    for (std::size_t i = 1; i < chi.size(); ++i) v[i] = v[i - 1] + f.dist(chi[i - 1], chi[i]);
    return v;
}

double total_variation(const MetricFunction& f, const Partition& start, double tol,
                       std::size_t max_nodes) {
    Partition chi = start;
    double prev = variation(f, chi);
    int quiet = 0;  // a single unchanged step can just mean the midpoints missed the extrema
    while (2 * chi.size() - 1 <= max_nodes) {
        chi = chi.refined();
        double cur = variation(f, chi);
        quiet = std::fabs(cur - prev) < tol ? quiet + 1 : 0;
        prev = cur;
        if (quiet >= 2) return cur;
    }
    return prev;
}

namespace {

std::vector<double> window_samples(const MetricFunction& f, const Partition& chi, double lo,
                                   double hi, bool include_hi) {
    std::vector<double> xs;
    lo = std::max(lo, f.a);
    hi = std::min(hi, f.b);
    if (lo > hi) return xs;
    xs.push_back(lo);
    for (double x : chi.nodes())
        if (x > lo && (include_hi ? x <= hi : x < hi)) xs.push_back(x);
    if (include_hi && hi > lo) xs.push_back(hi);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace

double local_modulus(const MetricFunction& f, double x_star, double delta, const Partition& chi) {
    if (delta <= 0) throw std::invalid_argument("local_modulus: delta must be positive");
    double lo = std::max(f.a, x_star - delta / 2);
    double hi = std::min(f.b, x_star + delta / 2);
    if (lo >= hi) return 0;
    if (f.monotone_scalar) return f.dist(lo, hi);
    std::vector<double> xs = window_samples(f, chi, lo, hi, true);
    if (x_star >= lo && x_star <= hi) xs.push_back(x_star);
    double best = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) best = std::max(best, f.dist(xs[i], xs[j]));
    return best;
}

double quasi_modulus_left(const MetricFunction& f, double x_star, double delta,
                          const Partition& chi) {
    if (delta <= 0) throw std::invalid_argument("quasi_modulus_left: delta must be positive");
    if (x_star <= f.a) throw std::invalid_argument("quasi_modulus_left: x* must exceed a");
    double lo = std::max(f.a, x_star - delta);
    std::vector<double> xs = window_samples(f, chi, lo, x_star, false);
    double best = 0;
    for (double x : xs) best = std::max(best, f.dist_left(x_star, x));
    return best;
}

double quasi_modulus_right(const MetricFunction& f, double x_star, double delta,
                           const Partition& chi) {
    if (delta <= 0) throw std::invalid_argument("quasi_modulus_right: delta must be positive");
    if (x_star >= f.b) throw std::invalid_argument("quasi_modulus_right: x* must be below b");
    double hi = std::min(f.b, x_star + delta);
    std::vector<double> xs = window_samples(f, chi, x_star, hi, true);
    double best = 0;
    for (double x : xs)
        if (x > x_star) best = std::max(best, f.dist_right(x_star, x));
    return best;
}

double quasi_modulus(const MetricFunction& f, double x_star, double delta, const Partition& chi) {
    return std::max(quasi_modulus_left(f, x_star, delta, chi),
                    quasi_modulus_right(f, x_star, delta, chi));
}

double sup_norm(const MetricFunction& f, const Partition& chi) {
    double m = 0;
    for (double x : chi.nodes()) m = std::max(m, f.norm_at(x));
    return m;
}

double sup_norm(const SetValuedFunction& F, const Partition& chi, NormChoice norm) {
    double m = 0;
    for (double x : chi.nodes()) m = std::max(m, F(x).norm(norm));
    return m;
}

double lipschitz_probe(const MetricFunction& f, double x, std::span<const double> radii,
                       LipschitzProbeMode mode, int samples_per_radius) {
    if (radii.empty()) throw std::invalid_argument("lipschitz_probe: empty radii");
    const double tiny = 1e-14;
    double best = 0;
    for (double r : radii) {
        if (r <= 0) continue;
        double lo = std::max(f.a, x - r / 2);
        double hi = std::min(f.b, x + r / 2);
        int ns = std::max(2, samples_per_radius);
        std::vector<double> xs(static_cast<std::size_t>(ns));
        for (int i = 0; i < ns; ++i)
            xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (ns - 1);
        xs.push_back(std::clamp(x, lo, hi));
        if (mode == LipschitzProbeMode::at_point) {
            for (double z : xs)
                if (std::fabs(z - x) > tiny) best = std::max(best, f.dist(z, x) / std::fabs(z - x));
        } else {
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = i + 1; j < xs.size(); ++j)
                    if (std::fabs(xs[i] - xs[j]) > tiny)
                        best = std::max(best, f.dist(xs[i], xs[j]) / std::fabs(xs[i] - xs[j]));
        }
    }
    return best;
}

double variation(const SetValuedFunction& F, const Partition& chi, NormChoice norm) {
    return variation(as_metric(F, norm, default_h_lim(chi)), chi);
}

double variation(const VectorFunction& f, const Partition& chi, NormChoice norm) {
    return variation(as_metric(f, norm, default_h_lim(chi)), chi);
}

std::vector<double> variation_function(const SetValuedFunction& F, const Partition& chi,
                                       NormChoice norm) {
    return variation_function(as_metric(F, norm, default_h_lim(chi)), chi);
}

}  // namespace svfa
