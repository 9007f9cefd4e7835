#ifndef SVFA_KERNELS_HPP
#define SVFA_KERNELS_HPP

#include <functional>
#include <optional>
#include <string>

#include "svfa/metric_integral.hpp"
#include "svfa/quadrature.hpp"
#include "svfa/selections.hpp"
#include "svfa/svf.hpp"

namespace svfa {

/// Bernstein basis polynomial p_{n,k}(x) = C(n,k) x^k (1-x)^{n-k},
/// evaluated through log-gamma for stability up to n ~ 1e4.
double bernstein_basis(int n, int k, double x);

/// All of p_{n,0..n}(x) in O(n): one log-gamma anchor at the modal k and
/// a ratio recurrence outward.
std::vector<double> bernstein_basis_row(int n, double x);

/// A positive-operator kernel K_n(x, t) on [a, b]^2 with optional
/// analytic metadata. The cdf, when present, is the exact primitive
/// z -> integral_a^z K_n(x, t) dt and assumes a nonnegative kernel; it
/// makes integration against step functions exact.
struct Kernel {
    std::string name;
    int n = 1;
    double a = 0, b = 1;

    std::function<double(double, double)> eval;                 ///< K_n(x, t)
    std::function<std::vector<double>(double)> breakpoints;     ///< t-breakpoints for fixed x
    std::function<std::function<double(double)>(double)> cdf_at;  ///< x -> (z -> cdf), optional

    /// Optional fast path: precomputes the image of a step function with
    /// the given node values and returns an evaluator of x -> T_n(step)(x).
    std::function<std::function<Point(double)>(const Partition&, const std::vector<Point>&)>
        step_apply;

    // Analytic metadata; absent entries fall back to numeric diagnostics.
    std::function<double(double)> alpha;                ///< alpha_n(x)
    std::function<double(double)> mass_bound;           ///< M(x)
    std::function<double(double, double)> beta_bound;   ///< (x, delta)
    std::function<double(double)> sign_bound;           ///< bound on |T_n sign(.-x)(x)|
    int sign_bound_min_n = 1;                           ///< smallest n the sign bound covers
    std::function<double(double)> moment0, moment1, moment2;  ///< T_n e_i closed forms
    std::function<double(double)> central2;             ///< T_n((.-x)^2)(x)

    bool has_cdf() const { return static_cast<bool>(cdf_at); }
    double cdf(double x, double z) const { return cdf_at(x)(z); }
};

using KernelFamily = std::function<Kernel(int)>;

/// K_n(x,t) = (n+1) sum_k p_{n,k}(x) p_{n,k}(t) on [0,1].
Kernel bernstein_durrmeyer_kernel(int n);

/// K_n(x,t) = (n+1) sum_k p_{n,k}(x) 1[t in [k/(n+1), (k+1)/(n+1)]].
Kernel kantorovich_kernel(int n);

KernelFamily bernstein_durrmeyer_family();
KernelFamily kantorovich_family();

/// Numeric kernel diagnostics: mass, alpha, tail mass beta, and the
/// sign-term value, via the exact cdf when the kernel carries one and
/// breakpoint-aware quadrature otherwise.
struct KernelDiagnostics {
    double mass_num = 0;
    double alpha_num = 0;
    double beta_num = 0;
    double sign_num = 0;
    std::optional<double> alpha_meta;
    std::optional<double> beta_bound_meta;
    std::optional<double> sign_bound_meta;
    std::optional<double> mass_bound_meta;
};

KernelDiagnostics diagnostics(const Kernel& K, double x, double delta, const QuadratureRule& rule);

/// Quadrature-only variant, for cross-checking the cdf path.
KernelDiagnostics quadrature_diagnostics(const Kernel& K, double x, double delta,
                                         const QuadratureRule& rule);

/// T_n f(x) = integral K_n(x,t) f(t) dt for scalar f; panels are refined
/// at the kernel's breakpoints and at any supplied integrand breakpoints.
double apply_scalar(const Kernel& K, const std::function<double(double)>& f, double x,
                    const QuadratureRule& rule, std::span<const double> f_breakpoints = {});

/// Componentwise application to a vector-valued function.
Point apply_vector(const Kernel& K, const VectorFunction& f, double x, const QuadratureRule& rule,
                   std::span<const double> f_breakpoints = {});

/// Application to a step-function selection; exact when the kernel has a
/// cdf, partition-aligned quadrature otherwise.
Point apply_selection(const Kernel& K, const Selection& s, double x, const QuadratureRule& rule);

/// T_n F(x) through the selection representation: the set of T_n s(x)
/// over the family. Equals the weighted metric integral with weight
/// K_n(x, .).
CompactSet apply_svf(const Kernel& K, const SetValuedFunction& F, double x, const Partition& chi,
                     int seeds_per_fiber, const QuadratureRule& rule, NormChoice norm,
                     double dedup_tol = 1e-12);

CompactSet apply_svf(const Kernel& K, std::span<const Selection> family, double x,
                     const QuadratureRule& rule, double dedup_tol = 1e-12);

}  // namespace svfa

#endif  // SVFA_KERNELS_HPP
