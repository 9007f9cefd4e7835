#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "svfa/io.hpp"
#include "svfa/selections.hpp"

using namespace svfa;

namespace {

constexpr NormChoice E = NormChoice::euclidean;

unsigned test_seed() {
    if (const char* env = std::getenv("SVFAPPROX_SEED")) return static_cast<unsigned>(std::atoi(env));
    return 20240817u;
}

SetValuedFunction jump_pair() { return catalog_svf("jump-pair"); }

SetValuedFunction branch_pair() {
    // F(x) = {x, -x}; a single point at x = 0.
    return SetValuedFunction::closed_form(0, 1, 1, [](double x) {
        if (x == 0) return CompactSet::singleton(Point{0.0});
        return CompactSet({Point{-x}, Point{x}});
    });
}

}  // namespace

TEST_CASE("chain function evaluation") {
    SetValuedFunction C = SetValuedFunction::closed_form(
        0, 1, 1, [](double) { return CompactSet::singleton(Point{2.5}); });
    Partition chi = Partition::uniform(0, 1, 4);
    auto chains = metric_chains({C(0.0), C(0.25), C(0.5), C(0.75), C(1.0)});
    REQUIRE(chains.chains.size() == 1);
    ChainFunction cf = chain_function(C, chi, chains.chains[0], E);
    for (double x : {0.0, 0.1, 0.99, 1.0}) CHECK(cf(x) == Point{2.5});
}

TEST_CASE("chain function of the jump pair steps at 0.5") {
    SetValuedFunction F = jump_pair();
    Partition chi = Partition::uniform(0, 1, 4);
    MetricChain phi{Point{0.0}, Point{0.0}, Point{1.0}, Point{1.0}, Point{1.0}};
    ChainFunction cf = chain_function(F, chi, phi, E);
    CHECK(cf(0.49) == Point{0.0});
    CHECK(cf(0.5) == Point{1.0});
    CHECK(cf(1.0) == Point{1.0});  // closed right endpoint

    MetricChain bad{Point{0.0}, Point{0.0}, Point{1.0}, Point{-1.0}, Point{1.0}};
    CHECK_THROWS_AS(chain_function(F, chi, bad, E), std::invalid_argument);
}

TEST_CASE("metric selection through a seed") {
    SetValuedFunction C = SetValuedFunction::closed_form(
        0, 1, 1, [](double) { return CompactSet::singleton(Point{7.0}); });
    Partition chi = Partition::uniform(0, 1, 8);
    Selection s = metric_selection_through(C, chi, 0.5, Point{7.0}, E);
    for (double x : {0.0, 0.37, 1.0}) CHECK(s(x) == Point{7.0});

    SetValuedFunction F = jump_pair();
    Selection plus = metric_selection_through(F, chi, 0.75, Point{1.0}, E);
    CHECK(plus(0.25) == Point{0.0});
    CHECK(plus(0.49) == Point{0.0});
    CHECK(plus(0.5) == Point{1.0});
    CHECK(plus(1.0) == Point{1.0});

    Selection minus = metric_selection_through(F, chi, 0.75, Point{-1.0}, E);
    CHECK(minus(0.25) == Point{0.0});
    CHECK(minus(0.5) == Point{-1.0});

    CHECK_THROWS_AS(metric_selection_through(F, chi, 0.33, Point{0.0}, E), std::invalid_argument);
    CHECK_THROWS_AS(metric_selection_through(F, chi, 0.75, Point{0.5}, E), std::invalid_argument);
}

TEST_CASE("selection family of the jump pair has exactly two members") {
    SetValuedFunction F = jump_pair();
    Partition chi = Partition::uniform(0, 1, 16);
    std::vector<Selection> family = selection_family(F, chi, 3, E);
    REQUIRE(family.size() == 2);
    // one branch per sign after the jump; both zero before it
    for (const Selection& s : family) CHECK(s(0.25) == Point{0.0});
    CHECK(family[0](0.75) == -1.0 * family[1](0.75));
}

TEST_CASE("selection family keeps branches") {
    SetValuedFunction F = branch_pair();
    Partition chi = Partition::uniform(0, 1, 16);
    std::vector<Selection> family = selection_family(F, chi, 2, E);
    REQUIRE(family.size() == 2);
    bool has_plus = false, has_minus = false;
    for (const Selection& s : family) {
        if (s(0.5) == Point{0.5}) has_plus = true;
        if (s(0.5) == Point{-0.5}) has_minus = true;
    }
    CHECK(has_plus);
    CHECK(has_minus);
}

TEST_CASE("constant fiber family is a single selection") {
    SetValuedFunction C = SetValuedFunction::closed_form(
        0, 1, 1, [](double) { return CompactSet::singleton(Point{1.5}); });
    Partition chi = Partition::uniform(0, 1, 8);
    CHECK(selection_family(C, chi, 4, E).size() == 1);
}

TEST_CASE("every selection value lies in its fiber") {
    std::mt19937 rng(test_seed() + 3);
    std::uniform_int_distribution<int> pts_dist(1, 5);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int t = 0; t < 25; ++t) {
        Partition chi = Partition::uniform(0, 1, 12);
        std::vector<CompactSet> fibers;
        for (std::size_t i = 0; i < chi.size(); ++i) {
            int m = pts_dist(rng);
            std::vector<Point> pts;
            for (int p = 0; p < m; ++p) pts.push_back(Point{coord(rng), coord(rng)});
            fibers.emplace_back(std::move(pts));
        }
        SetValuedFunction F = SetValuedFunction::grid(chi, fibers);
        for (const Selection& s : selection_family(F, chi, 5, E)) {
            for (std::size_t i = 0; i < chi.size(); ++i)
                CHECK(dist_point_set(s.values()[i], fibers[i], E) <= 1e-12);
            // consecutive values form metric pairs
            CHECK(is_metric_chain(fibers, s.values(), E));
        }
    }
}

TEST_CASE("representation: anchored selection passes through its seed") {
    SetValuedFunction F = branch_pair();
    Partition chi = Partition::uniform(0, 1, 8);
    for (std::size_t i = 0; i < chi.size(); ++i) {
        CompactSet fiber = F(chi[i]);
        for (const Point& y : fiber.points()) {
            Selection s = metric_selection_through(F, chi, chi[i], y, E);
            CHECK(s.values()[i] == y);
        }
    }
}

TEST_CASE("refinement stabilizes for piecewise-constant inputs") {
    SetValuedFunction F = jump_pair();
    Partition coarse({0.0, 1.0});
    Selection s0 = metric_selection_through(F, coarse, 1.0, Point{1.0}, E);
    std::vector<Selection> levels = refine_selection(F, s0, 3, E);
    REQUIRE(levels.size() == 4);
    // once 0.5 is a node the values are frozen
    for (std::size_t l = 2; l < levels.size(); ++l) {
        const Selection& fine = levels[l];
        const Selection& prev = levels[l - 1];
        double sup = 0;
        for (double x : prev.partition().nodes())
            sup = std::max(sup, point_dist(fine(x), prev(x), E));
        CHECK(sup == 0.0);
    }
    CHECK_THROWS_AS(refine_selection(F, s0, 25, E), std::invalid_argument);
}

TEST_CASE("refinement differences shrink for the tube") {
    SetValuedFunction F = catalog_svf("lipschitz-tube", 5);
    Partition start = Partition::uniform(0, 1, 8);
    Selection s0 = metric_selection_through(F, start, 0.5, F(0.5)[4], E);
    std::vector<Selection> levels = refine_selection(F, s0, 4, E);
    std::vector<double> diffs;
    for (std::size_t l = 1; l < levels.size(); ++l) {
        double sup = 0;
        for (double x : levels[l - 1].partition().nodes())
            sup = std::max(sup, point_dist(levels[l](x), levels[l - 1](x), E));
        diffs.push_back(sup);
    }
    for (std::size_t i = 1; i < diffs.size(); ++i) CHECK(diffs[i] <= diffs[i - 1] + 1e-12);
}

TEST_CASE("selection inheritance of variation and sup norm") {
    SetValuedFunction F = catalog_svf("lipschitz-tube", 4);
    Partition chi = Partition::uniform(0, 1, 64);
    double VF = variation(F, chi, E);
    double NF = sup_norm(F, chi, E);
    for (const Selection& s : selection_family(F, chi, 4, E)) {
        MetricFunction sm = as_metric(s, E);
        CHECK(variation(sm, chi) <= VF + 1e-9);
        CHECK(sup_norm(sm, chi) <= NF + 1e-9);
    }
}

TEST_CASE("lipschitz-at-point inheritance with factor four") {
    // grid-backed tube: selections are exact metric selections of the
    // step surrogate, and the pointwise probe of each member is bounded
    // by four times the probe of v_F on the doubled windows
    Partition chi = Partition::uniform(0, 1, 128);
    std::vector<CompactSet> fibers;
    for (double x : chi.nodes()) {
        std::vector<Point> pts;
        for (int j = 0; j < 5; ++j) pts.push_back(Point{(1 + x * x) * (j / 2.0 - 1.0)});
        fibers.emplace_back(std::move(pts));
    }
    SetValuedFunction F = SetValuedFunction::grid(chi, fibers, "tube-grid");
    MetricFunction vF = step_metric(chi, variation_function(F, chi, E));
    double x = 0.5;
    std::vector<double> radii{0.2, 0.1, 0.05};
    std::vector<double> radii4{0.8, 0.4, 0.2};
    double Lv = lipschitz_probe(vF, x, radii4, LipschitzProbeMode::at_point, 64);
    for (const Selection& s : selection_family(F, chi, 5, E)) {
        double Ls = lipschitz_probe(as_metric(s, E), x, radii, LipschitzProbeMode::at_point, 64);
        CHECK(Ls <= 4 * Lv + 1e-9);
    }
}

TEST_CASE("selection export writes one file per member plus manifest") {
    SetValuedFunction F = jump_pair();
    Partition chi = Partition::uniform(0, 1, 8);
    std::vector<Selection> family = selection_family(F, chi, 2, E);
    std::string dir = "./selections_test_out";
    std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
    std::vector<std::string> files = export_selections(family, dir);
    CHECK(files.size() == family.size() + 1);
    std::string manifest = read_file(files.back());
    CHECK(manifest.find("seeds") != std::string::npos);
    std::string first = read_file(files.front());
    CHECK(first.rfind("x,y_1", 0) == 0);
}
