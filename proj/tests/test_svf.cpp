#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "svfa/io.hpp"
#include "svfa/svf.hpp"

using namespace svfa;

namespace {

constexpr NormChoice E = NormChoice::euclidean;

// Grid-backed jump-pair on a uniform partition containing 0.5.
SetValuedFunction grid_jump_pair(int segments) {
    Partition chi = Partition::uniform(0, 1, segments);
    std::vector<CompactSet> fibers;
    for (double x : chi.nodes()) {
        if (x < 0.5)
            fibers.push_back(CompactSet::singleton(Point{0.0}));
        else
            fibers.push_back(CompactSet({Point{-1.0}, Point{1.0}}));
    }
    return SetValuedFunction::grid(chi, fibers, "jump-pair-grid");
}

}  // namespace

TEST_CASE("partition basics") {
    Partition chi = Partition::uniform(0, 1, 4);
    CHECK(chi.size() == 5);
    CHECK(chi.mesh() == doctest::Approx(0.25));
    CHECK(chi.locate(0.3) == 1);
    CHECK(chi.locate(1.0) == 3);
    CHECK(chi.index_of(0.5).value() == 2);
    CHECK_FALSE(chi.index_of(0.3).has_value());
    CHECK(chi.refined().size() == 9);
    CHECK_THROWS_AS(Partition({0.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("variation examples") {
    Partition chi = Partition::uniform(0, 1, 8);
    VectorFunction constant = VectorFunction::scalar(0, 1, [](double) { return 3.0; });
    CHECK(variation(constant, chi, E) == 0.0);

    VectorFunction id = VectorFunction::monomial(0, 1, 1);
    CHECK(variation(id, chi, E) == doctest::Approx(1.0));

    SetValuedFunction F = grid_jump_pair(8);
    CHECK(variation(F, chi, E) == doctest::Approx(1.0));
}

TEST_CASE("variation function") {
    Partition chi = Partition::uniform(0, 1, 8);
    VectorFunction id = VectorFunction::monomial(0, 1, 1);
    std::vector<double> v = variation_function(as_metric(id, E, default_h_lim(chi)), chi);
    for (std::size_t i = 0; i < chi.size(); ++i) CHECK(v[i] == doctest::Approx(chi[i]));

    SetValuedFunction F = grid_jump_pair(8);
    std::vector<double> vF = variation_function(F, chi, E);
    CHECK(vF.front() == 0.0);
    CHECK(std::is_sorted(vF.begin(), vF.end()));
    for (std::size_t i = 0; i < chi.size(); ++i)
        CHECK(vF[i] == doctest::Approx(chi[i] >= 0.5 ? 1.0 : 0.0));

    // variation between partition nodes telescopes: V_z^x = v(x) - v(z)
    MetricFunction Fm = as_metric(F, E, default_h_lim(chi));
    for (std::size_t j = 0; j + 2 < chi.size(); j += 2) {
        for (std::size_t i = j + 1; i < chi.size(); i += 3) {
            Partition sub(std::vector<double>(chi.nodes().begin() + static_cast<long>(j),
                                              chi.nodes().begin() + static_cast<long>(i + 1)));
            CHECK(variation(Fm, sub) == doctest::Approx(vF[i] - vF[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("total variation via refinement") {
    Partition start = Partition::uniform(0, 1, 4);
    VectorFunction wiggle =
        VectorFunction::scalar(0, 1, [](double x) { return std::sin(6.0 * x); });
    double tv = total_variation(as_metric(wiggle, E, 1e-7), start, 1e-6);
    // sin(6x) rises to 1 at x = pi/12, falls to -1 at pi/4, rises to sin 6
    double exact = 1.0 + 2.0 + (std::sin(6.0) + 1.0);
    CHECK(tv == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("local modulus") {
    Partition chi = Partition::uniform(0, 1, 10);
    VectorFunction constant = VectorFunction::scalar(0, 1, [](double) { return 1.0; });
    CHECK(local_modulus(as_metric(constant, E, 1e-7), 0.5, 0.2, chi) == 0.0);

    VectorFunction id = VectorFunction::monomial(0, 1, 1);
    CHECK(local_modulus(as_metric(id, E, 1e-7), 0.5, 0.2, chi) == doctest::Approx(0.2));

    SetValuedFunction F = grid_jump_pair(10);
    MetricFunction Fm = as_metric(F, E, default_h_lim(chi));
    CHECK(local_modulus(Fm, 0.5, 0.1, chi) == doctest::Approx(1.0));
    CHECK_THROWS_AS(local_modulus(Fm, 0.5, 0.0, chi), std::invalid_argument);
}

TEST_CASE("quasi moduli at the jump") {
    Partition chi = Partition::uniform(0, 1, 10);
    SetValuedFunction F = grid_jump_pair(10);
    MetricFunction Fm = as_metric(F, E, default_h_lim(chi));
    CHECK(quasi_modulus_left(Fm, 0.5, 0.3, chi) == 0.0);
    CHECK(quasi_modulus_right(Fm, 0.5, 0.3, chi) == 0.0);
    CHECK(quasi_modulus(Fm, 0.5, 0.3, chi) == 0.0);
    CHECK_THROWS_AS(quasi_modulus_left(Fm, 0.0, 0.1, chi), std::invalid_argument);
    CHECK_THROWS_AS(quasi_modulus_right(Fm, 1.0, 0.1, chi), std::invalid_argument);
}

TEST_CASE("quasi moduli shrink for continuous functions") {
    Partition chi = Partition::uniform(0, 1, 1000);
    VectorFunction f = VectorFunction::scalar(0, 1, [](double x) { return std::sin(3.0 * x); });
    MetricFunction fm = as_metric(f, E, default_h_lim(chi));
    double big = quasi_modulus(fm, 0.5, 1e-2, chi);
    double small = quasi_modulus(fm, 0.5, 1e-3, chi);
    CHECK(small <= big);
    CHECK(big <= 0.05);
}

TEST_CASE("sup_norm") {
    Partition chi = Partition::uniform(0, 1, 8);
    SetValuedFunction zero = SetValuedFunction::closed_form(
        0, 1, 1, [](double) { return CompactSet::singleton(Point{0.0}); });
    CHECK(sup_norm(zero, chi, E) == 0.0);
    CHECK(sup_norm(grid_jump_pair(8), chi, E) == 1.0);
    SetValuedFunction diag = SetValuedFunction::closed_form(
        0, 1, 1, [](double x) { return CompactSet::singleton(Point{x}); });
    CHECK(sup_norm(diag, chi, E) == 1.0);
}

TEST_CASE("lipschitz probe") {
    Partition chi = Partition::uniform(0, 1, 64);
    std::vector<double> radii{0.5, 0.25, 0.125};
    VectorFunction id = VectorFunction::monomial(0, 1, 1);
    CHECK(lipschitz_probe(as_metric(id, E, 1e-9), 0.5, radii) == doctest::Approx(1.0));

    VectorFunction constant = VectorFunction::scalar(0, 1, [](double) { return 42.0; });
    CHECK(lipschitz_probe(as_metric(constant, E, 1e-9), 0.5, radii) == 0.0);

    // x sin(1/x) is Lipschitz-at-0 with constant 1 though not Lipschitz around 0.
    VectorFunction osc = VectorFunction::scalar(
        -1, 1, [](double x) { return x == 0 ? 0.0 : x * std::sin(1.0 / x); });
    double at_zero = lipschitz_probe(as_metric(osc, E, 1e-9), 0.0, radii,
                                     LipschitzProbeMode::at_point, 64);
    CHECK(at_zero <= 1.0 + 1e-12);
    CHECK_THROWS_AS(lipschitz_probe(as_metric(osc, E, 1e-9), 0.0, {}), std::invalid_argument);
}

TEST_CASE("modulus dominated by modulus of the variation function") {
    Partition chi = Partition::uniform(0, 1, 32);
    SetValuedFunction F = grid_jump_pair(32);
    MetricFunction Fm = as_metric(F, E, default_h_lim(chi));
    MetricFunction vF = step_metric(chi, variation_function(F, chi, E));
    CHECK(vF.monotone_scalar);
    for (double x : {0.25, 0.5, 0.75}) {
        for (double delta : {0.05, 0.2, 0.4}) {
            CHECK(local_modulus(Fm, x, delta, chi) <= local_modulus(vF, x, delta, chi) + 1e-12);
            if (x > 0)
                CHECK(quasi_modulus_left(Fm, x, delta, chi) <=
                      quasi_modulus_left(vF, x, delta, chi) + 1e-12);
            if (x < 1)
                CHECK(quasi_modulus_right(Fm, x, delta, chi) <=
                      quasi_modulus_right(vF, x, delta, chi) + 1e-12);
        }
    }
}

TEST_CASE("discrete analogue of the variation-window integral inequality") {
    // trapezoid-summed integral of V_{x-delta}^{x+delta}(f) <= 2 delta V(f)
    Partition chi = Partition::uniform(0, 1, 256);
    SetValuedFunction F = grid_jump_pair(256);
    MetricFunction Fm = as_metric(F, E, default_h_lim(chi));
    std::vector<double> v = variation_function(Fm, chi);
    auto v_at = [&](double x) {
        if (x <= 0) return 0.0;
        if (x >= 1) return v.back();
        return v[chi.locate(x)];
    };
    double Vtotal = v.back();
    for (double delta : {0.05, 0.1}) {
        double integral = 0;
        for (std::size_t i = 0; i + 1 < chi.size(); ++i) {
            double xm = 0.5 * (chi[i] + chi[i + 1]);
            integral += (chi[i + 1] - chi[i]) * (v_at(xm + delta) - v_at(xm - delta));
        }
        // midpoint sampling smears each jump by at most one mesh width
        double tol_quad = chi.mesh() / (2 * delta);
        CHECK(integral <= 2 * delta * Vtotal * (1 + tol_quad) + 1e-12);
    }
}

TEST_CASE("lipschitz inheritance from the variation function") {
    // For a step function the node-sum variation is exact, so the pairs
    // probe of f is dominated by the pairs probe of v_f on any samples.
    auto chi = std::make_shared<Partition>(Partition::uniform(0, 1, 64));
    VectorFunction f(0, 1, 1, [chi](double x) {
        double node = (*chi)[x >= 1.0 ? chi->size() - 1 : chi->locate(x)];
        return Point{std::cos(2.0 * node)};
    });
    MetricFunction fm = as_metric(f, E, 1e-9);
    std::vector<double> v = variation_function(fm, *chi);
    MetricFunction vm = step_metric(*chi, v);
    std::vector<double> radii{0.4, 0.2, 0.1};
    double Lf = lipschitz_probe(fm, 0.5, radii);
    double Lv = lipschitz_probe(vm, 0.5, radii);
    CHECK(Lf <= Lv + 1e-9);
}

TEST_CASE("grid SVF one-sided limits are exact") {
    SetValuedFunction F = grid_jump_pair(8);
    CHECK(F.left_limit(0.5, 0.1) == CompactSet::singleton(Point{0.0}));
    CHECK(F.right_limit(0.5, 0.1) == CompactSet({Point{-1.0}, Point{1.0}}));
    CHECK(F.left_limit(0.25, 0.1) == CompactSet::singleton(Point{0.0}));
}

TEST_CASE("grid SVF JSON round trip") {
    SetValuedFunction F = grid_jump_pair(4);
    SetValuedFunction G = svf_from_json(svf_to_json(F));
    CHECK(G.is_grid());
    CHECK(G.grid_nodes().size() == 5);
    for (double x : {0.0, 0.3, 0.5, 0.9, 1.0})
        CHECK(hausdorff(F(x), G(x), E) == 0.0);
    CHECK_THROWS(svf_from_json("{\"grid\":[0,1]}"));
}

TEST_CASE("catalog entries") {
    for (const std::string& name : catalog_names()) {
        SetValuedFunction F = catalog_svf(name);
        CHECK(F(0.3).size() >= 1);
    }
    SetValuedFunction tube = catalog_svf("lipschitz-tube", 5);
    CHECK(tube(0.0).size() == 5);
    CHECK(tube(1.0).norm(E) == doctest::Approx(2.0));
    SetValuedFunction ann = catalog_svf("annulus-slice", 7);
    CHECK(ann(0.5).dim() == 2);
    CHECK_THROWS_AS(catalog_svf("no-such-svf"), std::invalid_argument);
}
