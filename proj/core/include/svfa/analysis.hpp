#ifndef SVFA_ANALYSIS_HPP
#define SVFA_ANALYSIS_HPP

#include <map>
#include <string>
#include <vector>

#include "svfa/kernels.hpp"
#include "svfa/selections.hpp"
#include "svfa/svf.hpp"

namespace svfa {

/// One pointwise error bound, split into its components. total is always
/// the sum of the components; the sign term is zero in the continuity
/// flavor.
struct PointwiseBound {
    enum class Flavor { continuity, jump };
    Flavor flavor = Flavor::continuity;
    double x = 0;
    double delta = 0;
    double modulus_term = 0;
    double beta_term = 0;
    double alpha_term = 0;
    double sign_term = 0;
    double total = 0;
};

/// Continuity-point bound: omega(v_F, x, 4 delta) M(x)
///   + ||F||_inf (2 beta_n(x, delta) + alpha_n(x)).
PointwiseBound bound_continuity(const Kernel& K, const SetValuedFunction& F, double x,
                                double delta, const Partition& chi, NormChoice norm,
                                const QuadratureRule& rule);

/// Jump-point bound: 2 qmod(v_F, x, 2 delta) M(x)
///   + ||F||_inf (4 beta + alpha + |T_n sign(.-x)(x)|).
PointwiseBound bound_jump(const Kernel& K, const SetValuedFunction& F, double x, double delta,
                          const Partition& chi, NormChoice norm, const QuadratureRule& rule);

/// Single-valued analogue of the continuity bound:
/// omega(f, x, 2 delta) M(x) + ||f||_inf 2 beta + |f(x)| alpha.
PointwiseBound scalar_bound_continuity(const Kernel& K, const VectorFunction& f, double x,
                                       double delta, const Partition& chi, NormChoice norm,
                                       const QuadratureRule& rule);

/// A_F(x) = { (s(x+) + s(x-)) / 2 : s in the family }, the limit set of
/// operator values at a jump point.
CompactSet a_f_set(const SetValuedFunction& F, double x, const Partition& chi,
                   int seeds_per_fiber, NormChoice norm, double dedup_tol = 1e-12);
CompactSet a_f_set(std::span<const Selection> family, double x, double dedup_tol = 1e-12);

/// First/second order integral modulus of continuity, with the function
/// extended by constants outside its interval. Quadrature panels are
/// aligned to the supplied breakpoints shifted by +-h.
double integral_modulus(const VectorFunction& f, double delta, int order, NormChoice norm,
                        const QuadratureRule& rule, std::span<const double> breakpoints = {},
                        int h_samples = 32);

/// lambda_n = (max_{i=0,1} ||T_n e_i - e_i||_{L1})^{1/2}; uses the moment
/// metadata when present, quadrature otherwise.
double lambda_n(const Kernel& K, const QuadratureRule& rule);

struct L1SelectionReport {
    double observed = 0;     ///< L1-Hausdorff between {s} and {T_n s} over the family
    double bound_shape = 0;  ///< (lambda^2 (b-a) + 2 lambda) V(F, chi), constant not included
    double lambda = 0;
    std::size_t family_size = 0;
};

/// Global L1 comparison of the selection family with its image under the
/// operator. Requires T_n e_0 = e_0 within 1e-8 for the bound shape.
L1SelectionReport l1_hausdorff_selection_sets(const Kernel& K, const SetValuedFunction& F,
                                              const Partition& chi, int seeds_per_fiber,
                                              NormChoice norm, const QuadratureRule& rule);

enum class DeltaRule { fixed, inv_cuberoot, optimize };
enum class ExperimentMode { continuity, jump, automatic };

struct ExperimentRow {
    int n = 0;
    double x = 0;
    double observed = 0;
    double bound = 0;
    double delta_star = 0;
    double slope = 0;  ///< log-log slope of this row's x-series
};

struct ConvergenceTable {
    std::vector<ExperimentRow> rows;
    std::map<double, double> slope_per_x;
    std::string kernel_name;
    std::string svf_name;
    std::size_t chi_size = 0;
    int seeds = 0;
    NormChoice norm = NormChoice::euclidean;
};

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::automatic;
    DeltaRule delta_rule = DeltaRule::optimize;
    double fixed_delta = 0.1;
    int jobs = 1;
    double jump_detect_tol = 1e-8;
};

/// Per-(n, x) observed Hausdorff error against F(x) (continuity) or
/// A_F(x) (jump), with the bound at the delta chosen by the delta rule
/// and a least-squares log-log slope per x-series.
ConvergenceTable convergence_experiment(const KernelFamily& family_of_kernels,
                                        const SetValuedFunction& F,
                                        std::span<const double> x_list,
                                        std::span<const int> n_list, const Partition& chi,
                                        int seeds_per_fiber, NormChoice norm,
                                        const QuadratureRule& rule,
                                        const ExperimentConfig& cfg = {});

/// Least-squares slope of log(err) against log(n).
double fit_loglog_slope(std::span<const double> n_values, std::span<const double> errors);

}  // namespace svfa

#endif  // SVFA_ANALYSIS_HPP
