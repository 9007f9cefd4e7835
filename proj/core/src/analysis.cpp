#include "svfa/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace svfa {

namespace {

struct BoundContext {
    MetricFunction v_F;       // variation function of F as a step table
    double f_sup;             // ||F||_inf over the partition
};

BoundContext make_bound_context(const SetValuedFunction& F, const Partition& chi,
                                NormChoice norm) {
    BoundContext ctx{step_metric(chi, variation_function(F, chi, norm)),
                     sup_norm(F, chi, norm)};
    return ctx;
}

double kernel_mass_bound(const Kernel& K, double x, const QuadratureRule& rule) {
    if (K.mass_bound) return K.mass_bound(x);
    return diagnostics(K, x, 0.25 * (K.b - K.a), rule).mass_num;
}

double kernel_alpha(const Kernel& K, double x, const QuadratureRule& rule) {
    if (K.alpha) return K.alpha(x);
    return diagnostics(K, x, 0.25 * (K.b - K.a), rule).alpha_num;
}

double kernel_beta(const Kernel& K, double x, double delta, const QuadratureRule& rule) {
    if (K.beta_bound) return K.beta_bound(x, delta);
    return diagnostics(K, x, delta, rule).beta_num;
}

double kernel_sign_term(const Kernel& K, double x, const QuadratureRule& rule) {
    if (K.sign_bound && K.n >= K.sign_bound_min_n) {
        double bound = K.sign_bound(x);
        if (std::isfinite(bound)) return bound;
    }
    return std::fabs(diagnostics(K, x, 0.25 * (K.b - K.a), rule).sign_num);
}

PointwiseBound bound_from_context(const Kernel& K, const BoundContext& ctx, double x,
                                  double delta, const Partition& chi,
                                  PointwiseBound::Flavor flavor, const QuadratureRule& rule) {
    if (delta <= 0) throw std::invalid_argument("bound: delta must be positive");
    PointwiseBound b;
    b.flavor = flavor;
    b.x = x;
    b.delta = delta;
    double M = kernel_mass_bound(K, x, rule);
    double alpha = kernel_alpha(K, x, rule);
    double beta = kernel_beta(K, x, delta, rule);
    if (flavor == PointwiseBound::Flavor::continuity) {
        b.modulus_term = local_modulus(ctx.v_F, x, 4 * delta, chi) * M;
        b.beta_term = ctx.f_sup * 2 * beta;
        b.alpha_term = ctx.f_sup * alpha;
        b.sign_term = 0;
    } else {
        b.modulus_term = 2 * quasi_modulus(ctx.v_F, x, 2 * delta, chi) * M;
        b.beta_term = ctx.f_sup * 4 * beta;
        b.alpha_term = ctx.f_sup * alpha;
        b.sign_term = ctx.f_sup * kernel_sign_term(K, x, rule);
    }
    b.total = b.modulus_term + b.beta_term + b.alpha_term + b.sign_term;
    return b;
}

}  // namespace

PointwiseBound bound_continuity(const Kernel& K, const SetValuedFunction& F, double x,
                                double delta, const Partition& chi, NormChoice norm,
                                const QuadratureRule& rule) {
    BoundContext ctx = make_bound_context(F, chi, norm);
    return bound_from_context(K, ctx, x, delta, chi, PointwiseBound::Flavor::continuity, rule);
}

PointwiseBound bound_jump(const Kernel& K, const SetValuedFunction& F, double x, double delta,
                          const Partition& chi, NormChoice norm, const QuadratureRule& rule) {
    if (!(x > F.a() && x < F.b()))
        throw std::invalid_argument("bound_jump: x must be interior");
    BoundContext ctx = make_bound_context(F, chi, norm);
    return bound_from_context(K, ctx, x, delta, chi, PointwiseBound::Flavor::jump, rule);
}

PointwiseBound scalar_bound_continuity(const Kernel& K, const VectorFunction& f, double x,
                                       double delta, const Partition& chi, NormChoice norm,
                                       const QuadratureRule& rule) {
    if (delta <= 0) throw std::invalid_argument("scalar_bound_continuity: delta must be positive");
    MetricFunction fm = as_metric(f, norm, default_h_lim(chi));
    PointwiseBound b;
    b.flavor = PointwiseBound::Flavor::continuity;
    b.x = x;
    b.delta = delta;
    b.modulus_term = local_modulus(fm, x, 2 * delta, chi) * kernel_mass_bound(K, x, rule);
    b.beta_term = sup_norm(fm, chi) * 2 * kernel_beta(K, x, delta, rule);
    b.alpha_term = point_norm(f(x), norm) * kernel_alpha(K, x, rule);
    b.sign_term = 0;
    b.total = b.modulus_term + b.beta_term + b.alpha_term;
    return b;
}

CompactSet a_f_set(std::span<const Selection> family, double x, double dedup_tol) {
    if (family.empty()) throw std::invalid_argument("a_f_set: empty family");
    const Partition& chi = family.front().partition();
    if (!(x > chi.a() && x < chi.b()))
        throw std::invalid_argument("a_f_set: x must be interior");
    std::vector<Point> mids;
    mids.reserve(family.size());
    for (const Selection& s : family)
        mids.push_back(0.5 * (s.left_limit(x) + s.right_limit(x)));
    return dedup_points(std::move(mids), dedup_tol);
}

CompactSet a_f_set(const SetValuedFunction& F, double x, const Partition& chi,
                   int seeds_per_fiber, NormChoice norm, double dedup_tol) {
    std::vector<Selection> family = selection_family(F, chi, seeds_per_fiber, norm);
    return a_f_set(family, x, dedup_tol);
}

double integral_modulus(const VectorFunction& f, double delta, int order, NormChoice norm,
                        const QuadratureRule& rule, std::span<const double> breakpoints,
                        int h_samples) {
    if (delta <= 0) throw std::invalid_argument("integral_modulus: delta must be positive");
    if (order != 1 && order != 2) throw std::invalid_argument("integral_modulus: order is 1 or 2");
    double a = f.a(), b = f.b();
    double best = 0;
    for (int j = 1; j <= h_samples; ++j) {
        double h = delta * j / h_samples;
        std::vector<double> cuts{a, b, a - h, a + h, b - h, b + h};
        for (double t : breakpoints) {
            cuts.push_back(t);
            cuts.push_back(t - h);
            cuts.push_back(t + h);
        }
        double val;
        if (order == 1) {
            val = rule.integrate(
                [&](double x) { return point_dist(f(x + h), f(x), norm); }, a, b, cuts);
        } else {
            val = rule.integrate(
                [&](double x) {
                    return point_norm(f(x + h) - 2.0 * f(x) + f(x - h), norm);
                },
                a, b, cuts);
        }
        best = std::max(best, val);
    }
    return best;
}

namespace {

// Splits [a, b] at the sign changes of g located by scan + bisection.
std::vector<double> sign_change_cuts(const std::function<double(double)>& g, double a, double b) {
    const int scan = 512;
    std::vector<double> cuts;
    double prev_x = a, prev_v = g(a);
    for (int i = 1; i <= scan; ++i) {
        double x = a + (b - a) * i / scan;
        double v = g(x);
        if ((prev_v < 0 && v > 0) || (prev_v > 0 && v < 0)) {
            double lo = prev_x, hi = x, vlo = prev_v;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                double vm = g(mid);
                if ((vlo < 0) == (vm < 0)) {
                    lo = mid;
                    vlo = vm;
                } else {
                    hi = mid;
                }
            }
            cuts.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_v = v;
    }
    return cuts;
}

double l1_moment_error(const Kernel& K, int i, const QuadratureRule& rule) {
    const std::function<double(double)>& m =
        i == 0 ? K.moment0 : K.moment1;
    if (m) {
        auto g = [&](double x) { return m(x) - (i == 0 ? 1.0 : x); };
        std::vector<double> cuts = sign_change_cuts(g, K.a, K.b);
        return rule.integrate([&](double x) { return std::fabs(g(x)); }, K.a, K.b, cuts);
    }
    auto ei = [i](double t) { return i == 0 ? 1.0 : t; };
    auto g = [&](double x) { return apply_scalar(K, ei, x, rule) - ei(x); };
    std::vector<double> cuts = sign_change_cuts(g, K.a, K.b);
    return rule.integrate([&](double x) { return std::fabs(g(x)); }, K.a, K.b, cuts);
}

}  // namespace

double lambda_n(const Kernel& K, const QuadratureRule& rule) {
    double e0 = l1_moment_error(K, 0, rule);
    double e1 = l1_moment_error(K, 1, rule);
    return std::sqrt(std::max(e0, e1));
}

namespace {

// T_n s sampled at the given x nodes, through the kernel's fast path
// when it has one.
std::vector<Point> operator_samples(const Kernel& K, const Selection& s,
                                    const std::vector<double>& xs, const QuadratureRule& rule) {
    std::vector<Point> out;
    out.reserve(xs.size());
    if (K.step_apply) {
        auto Ts = K.step_apply(s.partition(), s.values());
        for (double x : xs) out.push_back(Ts(x));
        return out;
    }
    for (double x : xs) out.push_back(apply_selection(K, s, x, rule));
    return out;
}

}  // namespace

L1SelectionReport l1_hausdorff_selection_sets(const Kernel& K, const SetValuedFunction& F,
                                              const Partition& chi, int seeds_per_fiber,
                                              NormChoice norm, const QuadratureRule& rule) {
    // The bound shape assumes T_n e_0 = e_0.
    double mass_mid = diagnostics(K, 0.5 * (K.a + K.b), 0.25 * (K.b - K.a), rule).mass_num;
    if (std::fabs(mass_mid - 1) > 1e-8)
        throw std::domain_error("l1_hausdorff_selection_sets: kernel mass differs from 1");

    std::vector<Selection> family = selection_family(F, chi, seeds_per_fiber, norm);
    L1SelectionReport rep;
    rep.family_size = family.size();
    rep.lambda = lambda_n(K, rule);
    rep.bound_shape =
        (rep.lambda * rep.lambda * (chi.b() - chi.a()) + 2 * rep.lambda) * variation(F, chi, norm);

    // Shared x-quadrature grid aligned with the selection breakpoints.
    const GaussLegendre& gl = GaussLegendre::get(rule.order);
    std::vector<double> xs;
    std::vector<double> ws;
    for (std::size_t i = 0; i + 1 < chi.size(); ++i) {
        double mid = 0.5 * (chi[i] + chi[i + 1]);
        double half = 0.5 * (chi[i + 1] - chi[i]);
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            xs.push_back(mid + half * gl.nodes[k]);
            ws.push_back(half * gl.weights[k]);
        }
    }

    std::vector<std::vector<Point>> s_vals(family.size());
    std::vector<std::vector<Point>> t_vals(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        s_vals[i].reserve(xs.size());
        for (double x : xs) s_vals[i].push_back(family[i](x));
        t_vals[i] = operator_samples(K, family[i], xs, rule);
    }

    auto l1 = [&](const std::vector<Point>& u, const std::vector<Point>& v) {
        double sum = 0, comp = 0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            double term = ws[k] * point_dist(u[k], v[k], norm) - comp;
            double t = sum + term;
            comp = (t - sum) - term;
            sum = t;
        }
        return sum;
    };

    double dir1 = 0;  // sup over selections of inf over images
    for (std::size_t i = 0; i < family.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < family.size(); ++j) best = std::min(best, l1(s_vals[i], t_vals[j]));
        dir1 = std::max(dir1, best);
    }
    double dir2 = 0;  // sup over images of inf over selections
    for (std::size_t j = 0; j < family.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < family.size(); ++i) best = std::min(best, l1(s_vals[i], t_vals[j]));
        dir2 = std::max(dir2, best);
    }
    rep.observed = std::max(dir1, dir2);
    return rep;
}

double fit_loglog_slope(std::span<const double> n_values, std::span<const double> errors) {
    if (n_values.size() != errors.size() || n_values.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need matching lists with >= 2 entries");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = n_values.size();
    for (std::size_t i = 0; i < m; ++i) {
        double lx = std::log(n_values[i]);
        double ly = std::log(std::max(errors[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double denom = m * sxx - sx * sx;
    return (m * sxy - sx * sy) / denom;
}

ConvergenceTable convergence_experiment(const KernelFamily& family_of_kernels,
                                        const SetValuedFunction& F,
                                        std::span<const double> x_list,
                                        std::span<const int> n_list, const Partition& chi,
                                        int seeds_per_fiber, NormChoice norm,
                                        const QuadratureRule& rule, const ExperimentConfig& cfg) {
    if (x_list.empty() || n_list.empty())
        throw std::invalid_argument("convergence_experiment: empty x or n list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("convergence_experiment: n list must be increasing");

    std::vector<Selection> family = selection_family(F, chi, seeds_per_fiber, norm);
    BoundContext ctx = make_bound_context(F, chi, norm);
    double h = default_h_lim(chi);

    // Per-x flavor and target.
    std::vector<PointwiseBound::Flavor> flavors(x_list.size());
    std::vector<CompactSet> targets;
    targets.reserve(x_list.size());
    for (std::size_t xi = 0; xi < x_list.size(); ++xi) {
        double x = x_list[xi];
        bool jump;
        switch (cfg.mode) {
            case ExperimentMode::continuity: jump = false; break;
            case ExperimentMode::jump: jump = true; break;
            default:
                jump = x > F.a() && x < F.b() &&
                       hausdorff(F.left_limit(x, h), F.right_limit(x, h), norm) >
                           cfg.jump_detect_tol;
        }
        flavors[xi] = jump ? PointwiseBound::Flavor::jump : PointwiseBound::Flavor::continuity;
        targets.push_back(jump ? a_f_set(family, x) : F(x));
    }

    ConvergenceTable table;
    table.svf_name = F.name();
    table.chi_size = chi.size();
    table.seeds = seeds_per_fiber;
    table.norm = norm;
    table.rows.resize(n_list.size() * x_list.size());

    auto eval_row = [&](std::size_t r) {
        std::size_t ni = r / x_list.size();
        std::size_t xi = r % x_list.size();
        Kernel K = family_of_kernels(n_list[ni]);
        double x = x_list[xi];
        ExperimentRow row;
        row.n = n_list[ni];
        row.x = x;
        row.observed = hausdorff(apply_svf(K, family, x, rule), targets[xi], norm);

        double width = chi.b() - chi.a();
        auto bound_at = [&](double delta) {
            return bound_from_context(K, ctx, x, delta, chi, flavors[xi], rule);
        };
        PointwiseBound best;
        switch (cfg.delta_rule) {
            case DeltaRule::fixed: best = bound_at(cfg.fixed_delta); break;
            case DeltaRule::inv_cuberoot:
                best = bound_at(width * std::pow(row.n, -1.0 / 3.0));
                break;
            case DeltaRule::optimize: {
                best = bound_at(width / 2);
                for (int j = 2; j <= 12; ++j) {
                    PointwiseBound cand = bound_at(width * std::pow(0.5, j));
                    if (cand.total < best.total) best = cand;
                }
                break;
            }
        }
        row.bound = best.total;
        row.delta_star = best.delta;
        table.rows[r] = row;
    };

    std::size_t total = table.rows.size();
    int jobs = std::max(1, cfg.jobs);
    if (jobs > 1 && total > 1) {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t r = next.fetch_add(1);
                if (r >= total) return;
                eval_row(r);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t r = 0; r < total; ++r) eval_row(r);
    }

    // Slope per x-series.
    for (std::size_t xi = 0; xi < x_list.size(); ++xi) {
        std::vector<double> ns, errs;
        for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
            ns.push_back(n_list[ni]);
            errs.push_back(table.rows[ni * x_list.size() + xi].observed);
        }
        double slope = fit_loglog_slope(ns, errs);
        table.slope_per_x[x_list[xi]] = slope;
        for (std::size_t ni = 0; ni < n_list.size(); ++ni)
            table.rows[ni * x_list.size() + xi].slope = slope;
    }
    return table;
}

}  // namespace svfa
