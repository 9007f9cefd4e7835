#include "svfa/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace svfa {

namespace {

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Kahan-compensated accumulator.
struct KahanSum {
    double s = 0, c = 0;
    void add(double v) {
        double term = v - c;
        double t = s + term;
        c = (t - s) - term;
        s = t;
    }
    double value() const { return s; }
};

}  // namespace

double bernstein_basis(int n, int k, double x) {
    if (n < 0 || k < 0 || k > n) throw std::invalid_argument("bernstein_basis: k out of range");
    if (x < 0 || x > 1) throw std::invalid_argument("bernstein_basis: x outside [0,1]");
    if (x == 0) return k == 0 ? 1.0 : 0.0;
    if (x == 1) return k == n ? 1.0 : 0.0;
    double lp = log_choose(n, k) + k * std::log(x) + (n - k) * std::log1p(-x);
    return std::exp(lp);
}

std::vector<double> bernstein_basis_row(int n, double x) {
    if (n < 0) throw std::invalid_argument("bernstein_basis_row: negative degree");
    if (x < 0 || x > 1) throw std::invalid_argument("bernstein_basis_row: x outside [0,1]");
    std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
    if (x == 0) {
        p[0] = 1;
        return p;
    }
    if (x == 1) {
        p.back() = 1;
        return p;
    }
    int k0 = std::clamp(static_cast<int>(std::floor((n + 1) * x)), 0, n);
    p[static_cast<std::size_t>(k0)] = bernstein_basis(n, k0, x);
    double odds = x / (1 - x);
    // p_{k+1} = p_k * (n-k)/(k+1) * x/(1-x); values decay away from the mode.
    for (int k = k0; k < n; ++k) {
        double v = p[static_cast<std::size_t>(k)] * (static_cast<double>(n - k) / (k + 1)) * odds;
        p[static_cast<std::size_t>(k + 1)] = v;
        if (v == 0) break;
    }
    for (int k = k0; k > 0; --k) {
        double v = p[static_cast<std::size_t>(k)] * (static_cast<double>(k) / (n - k + 1)) / odds;
        p[static_cast<std::size_t>(k - 1)] = v;
        if (v == 0) break;
    }
    return p;
}

Kernel bernstein_durrmeyer_kernel(int n) {
    if (n < 1) throw std::invalid_argument("bernstein_durrmeyer_kernel: n must be positive");
    Kernel K;
    K.name = "bd";
    K.n = n;
    K.a = 0;
    K.b = 1;
    K.eval = [n](double x, double t) {
        std::vector<double> px = bernstein_basis_row(n, x);
        std::vector<double> pt = bernstein_basis_row(n, t);
        KahanSum s;
        for (std::size_t k = 0; k < px.size(); ++k) s.add(px[k] * pt[k]);
        return (n + 1) * s.value();
    };
    K.breakpoints = [](double) { return std::vector<double>{}; };
    // cdf via the Bernstein primitive: (n+1) int_0^z p_{n,k} = sum_{j>k} p_{n+1,j}(z),
    // hence int_0^z K_n(x,t) dt = sum_j p_{n+1,j}(z) W_j with W_j = sum_{k<j} p_{n,k}(x).
    K.cdf_at = [n](double x) {
        std::vector<double> px = bernstein_basis_row(n, x);
        auto W = std::make_shared<std::vector<double>>(px.size() + 1, 0.0);
        KahanSum acc;
        for (std::size_t k = 0; k < px.size(); ++k) {
            acc.add(px[k]);
            (*W)[k + 1] = acc.value();
        }
        return [n, W](double z) {
            std::vector<double> q = bernstein_basis_row(n + 1, z);
            KahanSum s;
            for (std::size_t j = 1; j < q.size(); ++j) s.add(q[j] * (*W)[j]);
            return s.value();
        };
    };
    // T_n(step)(x) = sum_k p_{n,k}(x) c_k with
    // c_k = (n+1) int p_{n,k}(t) step(t) dt assembled from the same
    // Bernstein primitive, one O(n) pass per partition node.
    K.step_apply = [n](const Partition& chi, const std::vector<Point>& vals) {
        if (vals.size() != chi.size())
            throw std::invalid_argument("step_apply: one value per node required");
        std::size_t d = static_cast<std::size_t>(vals.front().dim());
        auto coef = std::make_shared<std::vector<std::vector<double>>>(
            d, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
        auto suffix = [n](double z, std::vector<double>& S) {
            std::vector<double> row = bernstein_basis_row(n + 1, z);
            double acc = 0;
            for (int k = n; k >= 0; --k) {
                acc += row[static_cast<std::size_t>(k) + 1];
                S[static_cast<std::size_t>(k)] = acc;
            }
        };
        std::vector<double> Sprev(static_cast<std::size_t>(n) + 1);
        std::vector<double> Scur(static_cast<std::size_t>(n) + 1);
        auto deposit = [&](const Point& p) {
            for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
                double w = Scur[k] - Sprev[k];
                for (std::size_t c = 0; c < d; ++c) (*coef)[c][k] += w * p[c];
            }
            std::swap(Sprev, Scur);
        };
        auto clamp01 = [](double z) { return std::clamp(z, 0.0, 1.0); };
        suffix(0.0, Sprev);
        if (chi.a() > 0) {  // constant extension over [0, x_0)
            suffix(clamp01(chi.a()), Scur);
            deposit(vals.front());
        }
        for (std::size_t i = 0; i + 1 < chi.size(); ++i) {
            suffix(clamp01(chi[i + 1]), Scur);
            deposit(vals[i]);
        }
        if (chi.b() < 1) {  // constant extension over (x_N, 1]
            suffix(1.0, Scur);
            deposit(vals.back());
        }
        return [n, d, coef](double x) {
            std::vector<double> row = bernstein_basis_row(n, x);
            std::vector<double> out(d, 0.0);
            for (std::size_t c = 0; c < d; ++c) {
                KahanSum s;
                for (std::size_t k = 0; k < row.size(); ++k) s.add(row[k] * (*coef)[c][k]);
                out[c] = s.value();
            }
            return Point(std::move(out));
        };
    };
    K.alpha = [](double) { return 0.0; };
    K.mass_bound = [](double) { return 1.0; };
    K.beta_bound = [n](double, double delta) { return 1.0 / (2.0 * n * delta * delta); };
    K.sign_bound = [n](double x) {
        double v = n * x * (1 - x);
        return v > 0 ? 6.5 / std::sqrt(v) : std::numeric_limits<double>::infinity();
    };
    K.sign_bound_min_n = 100;
    K.moment0 = [](double) { return 1.0; };
    K.moment1 = [n](double x) { return (n * x + 1) / (n + 2.0); };
    K.moment2 = [n](double x) {
        return (static_cast<double>(n) * (n - 1) * x * x + 4.0 * n * x + 2) /
               ((n + 2.0) * (n + 3.0));
    };
    K.central2 = [n](double x) {
        return 2 * ((n - 3.0) * x * (1 - x) + 1) / ((n + 2.0) * (n + 3.0));
    };
    return K;
}

Kernel kantorovich_kernel(int n) {
    if (n < 1) throw std::invalid_argument("kantorovich_kernel: n must be positive");
    Kernel K;
    K.name = "kantorovich";
    K.n = n;
    K.a = 0;
    K.b = 1;
    K.eval = [n](double x, double t) {
        if (t < 0 || t > 1) return 0.0;
        int k = std::min(static_cast<int>(std::floor(t * (n + 1))), n);
        return (n + 1) * bernstein_basis(n, k, x);
    };
    K.breakpoints = [n](double) {
        std::vector<double> bk(static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k) bk[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) / (n + 1);
        return bk;
    };
    K.cdf_at = [n](double x) {
        std::vector<double> px = bernstein_basis_row(n, x);
        auto P = std::make_shared<std::vector<double>>(px.size() + 1, 0.0);
        KahanSum acc;
        for (std::size_t k = 0; k < px.size(); ++k) {
            acc.add(px[k]);
            (*P)[k + 1] = acc.value();
        }
        auto pts = std::make_shared<std::vector<double>>(px);
        return [n, P, pts](double z) {
            if (z <= 0) return 0.0;
            if (z >= 1) return (*P)[P->size() - 1];
            int k = std::min(static_cast<int>(std::floor(z * (n + 1))), n);
            return (*P)[static_cast<std::size_t>(k)] +
                   (*pts)[static_cast<std::size_t>(k)] * ((n + 1) * z - k);
        };
    };
    // T_n(step)(x) = sum_k p_{n,k}(x) d_k with d_k the panel average of
    // the step function over [k/(n+1), (k+1)/(n+1)].
    K.step_apply = [n](const Partition& chi, const std::vector<Point>& vals) {
        if (vals.size() != chi.size())
            throw std::invalid_argument("step_apply: one value per node required");
        std::size_t d = static_cast<std::size_t>(vals.front().dim());
        auto coef = std::make_shared<std::vector<std::vector<double>>>(
            d, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
        for (int k = 0; k <= n; ++k) {
            double v = static_cast<double>(k + 1) / (n + 1);
            double lo = static_cast<double>(k) / (n + 1);
            while (lo < v) {
                std::size_t piece;
                double hi;
                if (lo < chi.a()) {  // constant extension left of the partition
                    piece = 0;
                    hi = std::min(v, chi.a());
                } else if (lo >= chi.b()) {  // and right of it
                    piece = chi.size() - 1;
                    hi = v;
                } else {
                    piece = chi.locate(lo);
                    hi = std::min(v, chi[piece + 1]);
                }
                const Point& p = vals[piece];
                for (std::size_t c = 0; c < d; ++c)
                    (*coef)[c][static_cast<std::size_t>(k)] += (n + 1) * (hi - lo) * p[c];
                if (hi <= lo) break;
                lo = hi;
            }
        }
        return [n, d, coef](double x) {
            std::vector<double> row = bernstein_basis_row(n, x);
            std::vector<double> out(d, 0.0);
            for (std::size_t c = 0; c < d; ++c) {
                KahanSum s;
                for (std::size_t k = 0; k < row.size(); ++k) s.add(row[k] * (*coef)[c][k]);
                out[c] = s.value();
            }
            return Point(std::move(out));
        };
    };
    K.alpha = [](double) { return 0.0; };
    K.mass_bound = [](double) { return 1.0; };
    K.beta_bound = [n](double, double delta) { return 1.0 / (4.0 * n * delta * delta); };
    K.sign_bound = [n](double x) {
        double v = n * x * (1 - x);
        return v > 0 ? 12.0 / std::sqrt(v) : std::numeric_limits<double>::infinity();
    };
    K.sign_bound_min_n = 1;
    K.moment0 = [](double) { return 1.0; };
    K.moment1 = [n](double x) { return (2.0 * n * x + 1) / (2.0 * (n + 1)); };
    K.moment2 = [n](double x) {
        return (3.0 * n * (n - 1) * x * x + 6.0 * n * x + 1) / (3.0 * (n + 1.0) * (n + 1.0));
    };
    K.central2 = [n](double x) {
        return (3.0 * (n - 1) * x * (1 - x) + 1) / (3.0 * (n + 1.0) * (n + 1.0));
    };
    return K;
}

KernelFamily bernstein_durrmeyer_family() {
    return [](int n) { return bernstein_durrmeyer_kernel(n); };
}

KernelFamily kantorovich_family() {
    return [](int n) { return kantorovich_kernel(n); };
}

KernelDiagnostics quadrature_diagnostics(const Kernel& K, double x, double delta,
                                         const QuadratureRule& rule) {
    if (delta <= 0) throw std::invalid_argument("diagnostics: delta must be positive");
    KernelDiagnostics d;
    std::vector<double> bk = K.breakpoints(x);
    auto absk = [&K, x](double t) { return std::fabs(K.eval(x, t)); };
    auto raw = [&K, x](double t) { return K.eval(x, t); };

    std::vector<double> cuts = bk;
    cuts.push_back(x);
    cuts.push_back(x - delta);
    cuts.push_back(x + delta);
    d.mass_num = rule.integrate(raw, K.a, K.b, cuts);
    d.alpha_num = std::fabs(d.mass_num - 1);
    double lo = std::max(K.a, x - delta), hi = std::min(K.b, x + delta);
    double beta = 0;
    if (lo > K.a) beta += rule.integrate(absk, K.a, lo, bk);
    if (hi < K.b) beta += rule.integrate(absk, hi, K.b, bk);
    d.beta_num = beta;
    d.sign_num =
        rule.integrate([&](double t) { return raw(t) * (t > x ? 1.0 : (t < x ? -1.0 : 0.0)); },
                       K.a, K.b, cuts);

    if (K.alpha) d.alpha_meta = K.alpha(x);
    if (K.beta_bound) d.beta_bound_meta = K.beta_bound(x, delta);
    if (K.sign_bound && K.n >= K.sign_bound_min_n) d.sign_bound_meta = K.sign_bound(x);
    if (K.mass_bound) d.mass_bound_meta = K.mass_bound(x);
    return d;
}

KernelDiagnostics diagnostics(const Kernel& K, double x, double delta, const QuadratureRule& rule) {
    if (delta <= 0) throw std::invalid_argument("diagnostics: delta must be positive");
    if (!K.has_cdf()) return quadrature_diagnostics(K, x, delta, rule);
    KernelDiagnostics d;
    auto G = K.cdf_at(x);
    double mass = G(K.b);
    d.mass_num = mass;
    d.alpha_num = std::fabs(mass - 1);
    double lo = std::max(K.a, x - delta), hi = std::min(K.b, x + delta);
    d.beta_num = G(lo) + (mass - G(hi));
    d.sign_num = mass - 2 * G(x);
    if (K.alpha) d.alpha_meta = K.alpha(x);
    if (K.beta_bound) d.beta_bound_meta = K.beta_bound(x, delta);
    if (K.sign_bound && K.n >= K.sign_bound_min_n) d.sign_bound_meta = K.sign_bound(x);
    if (K.mass_bound) d.mass_bound_meta = K.mass_bound(x);
    return d;
}

double apply_scalar(const Kernel& K, const std::function<double(double)>& f, double x,
                    const QuadratureRule& rule, std::span<const double> f_breakpoints) {
    std::vector<double> cuts = K.breakpoints(x);
    cuts.insert(cuts.end(), f_breakpoints.begin(), f_breakpoints.end());
    return rule.integrate([&](double t) { return K.eval(x, t) * f(t); }, K.a, K.b, cuts);
}

Point apply_vector(const Kernel& K, const VectorFunction& f, double x, const QuadratureRule& rule,
                   std::span<const double> f_breakpoints) {
    std::vector<double> cuts = K.breakpoints(x);
    cuts.insert(cuts.end(), f_breakpoints.begin(), f_breakpoints.end());
    return rule.integrate_vector(
        [&](double t) { return K.eval(x, t) * f(t); }, K.a, K.b, f.dim(), cuts);
}

Point apply_selection(const Kernel& K, const Selection& s, double x, const QuadratureRule& rule) {
    const Partition& chi = s.partition();
    const auto& vals = s.values();
    if (K.has_cdf()) {
        auto G = K.cdf_at(x);
        std::vector<double> acc(static_cast<std::size_t>(s.dim()), 0.0);
        std::vector<double> comp(acc.size(), 0.0);
        auto add = [&](double w, const Point& p) {
            for (std::size_t c = 0; c < acc.size(); ++c) {
                double term = w * p[c] - comp[c];
                double t = acc[c] + term;
                comp[c] = (t - acc[c]) - term;
                acc[c] = t;
            }
        };
        double gprev = G(chi[0]);
        if (chi[0] > K.a) add(gprev, vals.front());  // constant extension below x_0
        for (std::size_t i = 0; i + 1 < chi.size(); ++i) {
            double gnext = G(chi[i + 1]);
            add(gnext - gprev, vals[i]);
            gprev = gnext;
        }
        if (chi.b() < K.b) add(G(K.b) - gprev, vals.back());  // and above x_N
        return Point(std::move(acc));
    }
    std::vector<double> cuts = K.breakpoints(x);
    cuts.insert(cuts.end(), chi.nodes().begin(), chi.nodes().end());
    return rule.integrate_vector([&](double t) { return K.eval(x, t) * s(t); }, K.a, K.b, s.dim(),
                                 cuts);
}

CompactSet apply_svf(const Kernel& K, std::span<const Selection> family, double x,
                     const QuadratureRule& rule, double dedup_tol) {
    if (family.empty()) throw std::invalid_argument("apply_svf: empty selection family");
    std::vector<Point> pts;
    pts.reserve(family.size());
    for (const Selection& s : family) pts.push_back(apply_selection(K, s, x, rule));
    return dedup_points(std::move(pts), dedup_tol);
}

CompactSet apply_svf(const Kernel& K, const SetValuedFunction& F, double x, const Partition& chi,
                     int seeds_per_fiber, const QuadratureRule& rule, NormChoice norm,
                     double dedup_tol) {
    std::vector<Selection> family = selection_family(F, chi, seeds_per_fiber, norm);
    return apply_svf(K, family, x, rule, dedup_tol);
}

}  // namespace svfa
