#include "svfa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace svfa {

namespace {

GaussLegendre compute_gl(int order) {
    if (order < 1) throw std::invalid_argument("GaussLegendre: order must be positive");
    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(order));
    gl.weights.resize(static_cast<std::size_t>(order));
    int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < order; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = order * (x * p0 - p1) / (x * x - 1);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        gl.nodes[static_cast<std::size_t>(i)] = -x;
        gl.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        double w = 2.0 / ((1 - x * x) * pp * pp);
        gl.weights[static_cast<std::size_t>(i)] = w;
        gl.weights[static_cast<std::size_t>(order - 1 - i)] = w;
    }
    return gl;
}

}  // namespace

const GaussLegendre& GaussLegendre::get(int order) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
    return it->second;
}

std::vector<double> QuadratureRule::panels(double a, double b,
                                           std::span<const double> breakpoints) const {
    if (!(a < b)) throw std::invalid_argument("QuadratureRule: empty interval");
    std::vector<double> cuts{a, b};
    for (double t : breakpoints)
        if (t > a && t < b) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (kind == QuadKind::piecewise_constant) return cuts;

    double target = (b - a) / std::max(1, min_panels);
    std::vector<double> out;
    out.push_back(a);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double w = cuts[i + 1] - cuts[i];
        int parts = std::max(1, static_cast<int>(std::ceil(w / target)));
        for (int j = 1; j <= parts; ++j) out.push_back(cuts[i] + w * j / parts);
        out.back() = cuts[i + 1];
    }
    return out;
}

double QuadratureRule::integrate(const std::function<double(double)>& f, double a, double b,
                                 std::span<const double> breakpoints) const {
    std::vector<double> ps = panels(a, b, breakpoints);
    double sum = 0, comp = 0;
    if (kind == QuadKind::piecewise_constant) {
        for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
            double term = f(0.5 * (ps[i] + ps[i + 1])) * (ps[i + 1] - ps[i]) - comp;
            double t = sum + term;
            comp = (t - sum) - term;
            sum = t;
        }
        return sum;
    }
    const GaussLegendre& gl = GaussLegendre::get(order);
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        double mid = 0.5 * (ps[i] + ps[i + 1]);
        double half = 0.5 * (ps[i + 1] - ps[i]);
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            double term = gl.weights[k] * half * f(mid + half * gl.nodes[k]) - comp;
            double t = sum + term;
            comp = (t - sum) - term;
            sum = t;
        }
    }
    return sum;
}

Point QuadratureRule::integrate_vector(const std::function<Point(double)>& f, double a, double b,
                                       int dim, std::span<const double> breakpoints) const {
    std::vector<double> acc(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> comp(static_cast<std::size_t>(dim), 0.0);
    auto add = [&](double w, const Point& p) {
        for (std::size_t c = 0; c < acc.size(); ++c) {
            double term = w * p[c] - comp[c];
            double t = acc[c] + term;
            comp[c] = (t - acc[c]) - term;
            acc[c] = t;
        }
    };
    std::vector<double> ps = panels(a, b, breakpoints);
    if (kind == QuadKind::piecewise_constant) {
        for (std::size_t i = 0; i + 1 < ps.size(); ++i)
            add(ps[i + 1] - ps[i], f(0.5 * (ps[i] + ps[i + 1])));
        return Point(std::move(acc));
    }
    const GaussLegendre& gl = GaussLegendre::get(order);
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        double mid = 0.5 * (ps[i] + ps[i + 1]);
        double half = 0.5 * (ps[i + 1] - ps[i]);
        for (std::size_t k = 0; k < gl.nodes.size(); ++k)
            add(gl.weights[k] * half, f(mid + half * gl.nodes[k]));
    }
    return Point(std::move(acc));
}

Point QuadratureRule::integrate_vector(const VectorFunction& f,
                                       std::span<const double> breakpoints) const {
    return integrate_vector([&f](double t) { return f(t); }, f.a(), f.b(), f.dim(), breakpoints);
}

WeightFunction WeightFunction::constant(double c) {
    WeightFunction w;
    w.eval = [c](double) { return c; };
    w.continuous = true;
    w.bounded_variation = true;
    w.antiderivative = [c](double t) { return c * t; };
    return w;
}

double WeightFunction::integral_on(double u, double v, const QuadratureRule& rule) const {
    if (antiderivative) return antiderivative(v) - antiderivative(u);
    if (u == v) return 0;
    return rule.integrate(eval, u, v);
}

}  // namespace svfa
