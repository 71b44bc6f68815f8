#include "nhgibbs/model_spec.hpp"
#include "nhgibbs/models.hpp"
#include "nhgibbs/oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace nhg;
using nhg::testutil::rel_close;

namespace {

PointConfiguration make(Window w, std::vector<Point> pts) { return PointConfiguration::from_points(w, pts); }

const Window kPlane(10.0, Boundary::plane);

Model hs1() { return Model::hard_sphere({0.5}); }
Model knn_const() { return Model::knn(2, Phi{Phi::Family::constant, {1.0}}); }
Model knn_trunclin() { return Model::knn(2, Phi{Phi::Family::trunclin, {1.0}}); }

template <class F>
ErrorKind error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::internal;
}

}  // namespace

TEST(WindowEnergy, HardSphereExamples) {
    ModelParams p{2.0, {1.0}};
    auto e = window_energy(hs1(), p, make(kPlane, {{1, 1}, {1.8, 1}}));
    ASSERT_TRUE(e.is_finite());
    EXPECT_DOUBLE_EQ(e.value(), 1.0);
    EXPECT_TRUE(window_energy(hs1(), p, make(kPlane, {{1, 1}, {1.4, 1}})).is_infinite());
    EXPECT_TRUE(window_energy(hs1(), p, PointConfiguration(kPlane)).is_finite());
}

TEST(WindowEnergy, KnnThreeClosePoints) {
    ModelParams p{1.0, {1.0}};
    auto e = window_energy(knn_const(), p, make(kPlane, {{1, 1}, {1.5, 1}, {1, 1.5}}));
    ASSERT_TRUE(e.is_finite());
    EXPECT_DOUBLE_EQ(e.value(), 6.0);
    // A lone pair cannot satisfy the k+1 clause.
    EXPECT_TRUE(window_energy(knn_const(), p, make(kPlane, {{1, 1}, {1.5, 1}})).is_infinite());
}

TEST(WindowEnergy, DelaunayEquilateralTriangle) {
    Model m = Model::delaunay(0.5);
    auto tri = make(kPlane, {{1, 1}, {2, 1}, {1.5, 1 + std::sqrt(3.0) / 2}});
    auto e = window_energy(m, {0.7, {1.0}}, tri);
    ASSERT_TRUE(e.is_finite());
    EXPECT_NEAR(e.value(), 3.0, 1e-12);
    EXPECT_TRUE(window_energy(m, {0.5 + 1e-12, {1.0}}, tri).is_infinite());
}

TEST(WindowEnergy, PoissonIsAlwaysZero) {
    CounterRng rng(2);
    auto cfg = testutil::uniform_pattern(Window(5.0), 40, rng);
    EXPECT_EQ(window_energy(Model::poisson(), {1.0, {}}, cfg).value(), 0.0);
}

TEST(LocalEnergy, HardSphereExample) {
    auto cfg = make(kPlane, {{1.8, 1}, {1, 1.9}});
    auto h = local_energy(hs1(), {2.0, {1.0}}, {1, 1}, cfg);
    ASSERT_TRUE(h.is_finite());
    EXPECT_DOUBLE_EQ(h.value(), 2.0);
}

TEST(LocalEnergy, EmptyConfiguration) {
    PointConfiguration empty(kPlane);
    EXPECT_EQ(local_energy(hs1(), {2.0, {1.0}}, {1, 1}, empty).value(), 0.0);
    EXPECT_TRUE(local_energy(knn_const(), {1.0, {1.0}}, {1, 1}, empty).is_infinite());
}

TEST(LocalEnergy, KnnClusterInsertion) {
    auto cfg = make(kPlane, {{0, 0}, {0.3, 0}, {0, 0.3}});
    auto h = local_energy(knn_const(), {1.0, {1.0}}, {0.15, 0.15}, cfg);
    ASSERT_TRUE(h.is_finite());
    EXPECT_DOUBLE_EQ(h.value(), 2.0);
    EXPECT_DOUBLE_EQ(brute_local_energy(knn_const(), {1.0, {1.0}}, {0.15, 0.15}, cfg).value(), 2.0);
}

TEST(LocalEnergy, InfeasibleBaseIsRejected) {
    auto bad = make(kPlane, {{1, 1}, {1.2, 1}});
    EXPECT_EQ(error_of([&] { local_energy(hs1(), {2.0, {1.0}}, {5, 5}, bad); }), ErrorKind::infeasible_base);
}

TEST(Removability, HardSphereIsHereditary) {
    CounterRng rng(4);
    auto cfg = testutil::rsa_pattern(Window(8.0), 60, 0.51, rng);
    EXPECT_EQ(removable_set(hs1(), 2.0, cfg).size(), cfg.size());
}

TEST(Removability, KnnClusters) {
    auto three = make(kPlane, {{1, 1}, {1.3, 1}, {1, 1.3}});
    for (PointId id : three.ids()) EXPECT_FALSE(is_removable(knn_const(), 1.0, id, three));
    EXPECT_TRUE(removable_set(knn_const(), 1.0, three).empty());
    EXPECT_TRUE(window_energy(knn_const(), {1.0, {1.0}}, three).is_finite());
    auto four = make(kPlane, {{1, 1}, {1.3, 1}, {1, 1.3}, {1.3, 1.3}});
    for (PointId id : four.ids()) EXPECT_TRUE(is_removable(knn_const(), 1.0, id, four));
    EXPECT_TRUE(removable_set(knn_const(), 1.0, PointConfiguration(kPlane)).empty());
    EXPECT_EQ(error_of([&] { is_removable(knn_const(), 1.0, 99, four); }), ErrorKind::unknown_id);
}

TEST(SufficientStatistics, HardSphereAnnuli) {
    Model m = Model::hard_sphere({0.5, 1.0});
    auto t = sufficient_statistics(m, 2.0, {1, 1}, make(kPlane, {{1.8, 1}, {1, 2.2}}));
    ASSERT_TRUE(t.feasible());
    EXPECT_EQ(*t.t, (std::vector<double>{1.0, 1.0}));
    EXPECT_FALSE(sufficient_statistics(m, 2.0, {1.9, 1}, make(kPlane, {{1.8, 1}, {3.2, 1}})).feasible());
}

TEST(SufficientStatistics, LinearInTheta) {
    CounterRng rng(12);
    Window w(8.0);
    Model m = Model::hard_sphere({0.3, 0.7});
    for (int rep = 0; rep < 100; ++rep) {
        auto cfg = testutil::rsa_pattern(w, 40, 0.5, rng);
        Point x{rng.uniform(0, 8) * 0.999, rng.uniform(0, 8) * 0.999};
        std::vector<double> theta{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        auto t = sufficient_statistics(m, 2.0, x, cfg);
        auto h = local_energy(m, {2.0, theta}, x, cfg);
        EXPECT_EQ(t.feasible(), h.is_finite());
        if (t.feasible()) { EXPECT_NEAR(theta[0] * (*t.t)[0] + theta[1] * (*t.t)[1], h.value(), 1e-12); }
    }
}

TEST(HardcoreStatistic, ClosedForms) {
    auto hs = hardcore_statistic(hs1(), make(kPlane, {{1, 1}, {1.4, 1}, {3, 3}}));
    EXPECT_NEAR(hs.value, 2.5, 1e-12);
    EXPECT_FALSE(hs.attained);

    auto del = hardcore_statistic(Model::delaunay(0.5), make(kPlane, {{1, 1}, {2, 1}, {1.5, 1 + std::sqrt(3.0) / 2}}));
    EXPECT_NEAR(del.value, 0.57735026918962576, 1e-12);
    EXPECT_FALSE(del.attained);

    auto knn = hardcore_statistic(knn_const(), make(kPlane, {{0, 0}, {0.3, 0}, {0, 0.3}}));
    EXPECT_NEAR(knn.value, 0.42426406871192851, 1e-12);
    EXPECT_TRUE(knn.attained);

    EXPECT_EQ(error_of([&] { hardcore_statistic(knn_const(), make(kPlane, {{0, 0}, {0.3, 0}})); }),
              ErrorKind::undefined);
    EXPECT_EQ(error_of([&] { hardcore_statistic(hs1(), make(kPlane, {{0, 0}})); }), ErrorKind::undefined);
    EXPECT_EQ(error_of([&] { hardcore_statistic(Model::delaunay(0.5), make(kPlane, {{1, 1}, {1.2, 1}, {1, 3}})); }),
              ErrorKind::undefined);
}

TEST(HardcoreStatistic, IsTheFeasibilityThreshold) {
    CounterRng rng(31);
    Window w(10.0);
    for (int rep = 0; rep < 20; ++rep) {
        auto hs_cfg = testutil::rsa_pattern(w, 50, 0.4, rng);
        double a = hardcore_statistic(hs1(), hs_cfg).value;
        EXPECT_TRUE(is_feasible(hs1(), a * (1 + 1e-9), hs_cfg));
        EXPECT_FALSE(is_feasible(hs1(), a * (1 - 1e-9), hs_cfg));

        auto knn_cfg = testutil::cluster_pattern(w, 8, 4, 0.4, rng);
        double b = hardcore_statistic(knn_const(), knn_cfg).value;
        EXPECT_TRUE(is_feasible(knn_const(), b, knn_cfg));
        EXPECT_FALSE(is_feasible(knn_const(), b * (1 - 1e-9), knn_cfg));
    }
}

TEST(HardcoreStatistic, KnnOnABoundedRegionIsTheFirstFeasibleAlpha) {
    // (1,1) and (1.2,1) need alpha >= 0.2; for alpha > 0.15 the point at
    // (1.65,1) enters the dilated region and needs alpha >= 0.45.
    auto cfg = make(kPlane, {{1, 1}, {1.2, 1}, {1.65, 1}, {2.3, 1}});
    Model m = Model::knn(1, Phi{});
    Region r = Region::rect(0.5, 0.5, 1.5, 1.5);
    auto s = hardcore_statistic(m, cfg, r);
    EXPECT_TRUE(s.attained);
    EXPECT_NEAR(s.value, 0.45, 1e-12);
    EXPECT_TRUE(is_feasible(m, s.value, cfg, r));
    EXPECT_FALSE(is_feasible(m, s.value * (1 - 1e-9), cfg, r));
    EXPECT_FALSE(is_feasible(m, 0.3, cfg, r));
}

TEST(InteractionRange, Formulas) {
    EXPECT_DOUBLE_EQ(interaction_range(Model::hard_sphere({0.5, 1.0}), 2.0), 1.5);
    EXPECT_DOUBLE_EQ(interaction_range(Model::delaunay(0.5), 0.7), 1.4);
    EXPECT_DOUBLE_EQ(interaction_range(knn_const(), 1.0), 2.0);
    EXPECT_DOUBLE_EQ(interaction_range(Model::poisson(), 1.0), 0.0);
}

TEST(ModelSpec, ParsesAndValidates) {
    auto def = parse_model_definition(KeyValues::parse("model = hardsphere\nalpha = 2\ntheta = 0.5\nsteps = 0.5\n"));
    EXPECT_TRUE(def.model.is_hard_sphere());
    EXPECT_DOUBLE_EQ(def.params.alpha, 2.0);
    auto knn = parse_model_definition(
        KeyValues::parse("model = knn\nk = 2\nalpha = 1\ntheta = 1\nphi = trunclin\nphi_params = 1\n"));
    EXPECT_TRUE(knn.model.is_knn());
    auto round = parse_model_definition(to_key_values(knn));
    EXPECT_EQ(to_key_values(round).to_string(), to_key_values(knn).to_string());
    EXPECT_EQ(error_of([] { parse_model_definition(KeyValues::parse("model = delaunay\nmin_edge = 0.5\nalpha = 0.4\ntheta = 1\n")); }),
              ErrorKind::invalid_argument);
    EXPECT_EQ(error_of([] { parse_model_definition(KeyValues::parse("model = hardsphere\nsteps = 0.5, 0.2\ntheta = 1,1\n")); }),
              ErrorKind::invalid_argument);
    EXPECT_EQ(error_of([] { parse_model_definition(KeyValues::parse("model = strauss\n")); }), ErrorKind::parse_error);
}

TEST(Properties, AdditivityOnTheTorus) {
    CounterRng rng(40);
    Window w(8.0);
    Model del = Model::delaunay(0.5);
    for (int rep = 0; rep < 30; ++rep) {
        struct Case {
            Model m;
            ModelParams p;
            PointConfiguration cfg;
        };
        std::vector<Case> cases{
            {hs1(), {2.0, {rng.uniform(-1, 1)}}, testutil::rsa_pattern(w, 50, 0.5, rng)},
            {knn_trunclin(), {1.0, {rng.uniform(-1, 1)}}, testutil::cluster_pattern(w, 10, 4, 0.45, rng)},
            {del, {0.7, {rng.uniform(-1, 1)}}, testutil::jittered_torus_lattice(w, 0.9, 0.12, rng)},
        };
        for (auto& c : cases) {
            auto base = window_energy(c.m, c.p, c.cfg);
            if (base.is_infinite()) continue;
            Point x{rng.uniform(0, 8) * 0.999, rng.uniform(0, 8) * 0.999};
            auto h = local_energy(c.m, c.p, x, c.cfg);
            auto after = window_energy(c.m, c.p, c.cfg.inserted(x));
            EXPECT_EQ(h.is_finite(), after.is_finite()) << c.m.name();
            if (h.is_finite()) { EXPECT_TRUE(rel_close(after.value(), base.value() + h.value(), 1e-9)) << c.m.name(); }
        }
    }
}

TEST(Properties, S1FinitenessDoesNotDependOnTheta) {
    CounterRng rng(41);
    Window w(16.0);
    for (int rep = 0; rep < 100; ++rep) {
        auto cfg = testutil::uniform_pattern(w, 48, rng);
        for (const Model& m : {hs1(), knn_trunclin()}) {
            double alpha = rng.uniform(0.5, 3.0);
            bool a = window_energy(m, {alpha, {rng.uniform(-5, 5)}}, cfg).is_finite();
            bool b = window_energy(m, {alpha, {rng.uniform(-5, 5)}}, cfg).is_finite();
            EXPECT_EQ(a, b);
        }
    }
}

TEST(Properties, S2FinitenessIsMonotoneInAlpha) {
    CounterRng rng(42);
    Window w(8.0);
    Model del = Model::delaunay(0.3);
    for (int rep = 0; rep < 60; ++rep) {
        auto hs_cfg = testutil::uniform_pattern(w, 15, rng);
        auto knn_cfg = testutil::cluster_pattern(w, 5, 3, 0.6, rng);
        auto del_cfg = testutil::jittered_torus_lattice(w, 1.0, 0.2, rng);
        for (double a = 0.35; a < 1.9; a += 0.05) {
            double b = a + 0.05;
            if (is_feasible(hs1(), a, hs_cfg)) { EXPECT_TRUE(is_feasible(hs1(), b, hs_cfg)); }
            if (is_feasible(knn_trunclin(), a, knn_cfg)) { EXPECT_TRUE(is_feasible(knn_trunclin(), b, knn_cfg)); }
            if (a > 0.3 && is_feasible(del, a, del_cfg)) { EXPECT_TRUE(is_feasible(del, b, del_cfg)); }
        }
    }
}

TEST(Properties, LocalStabilityLowerBounds) {
    CounterRng rng(43);
    Window w(8.0);
    double theta = -2.0;
    // Hard sphere: neighbours of x inside the outer annulus are pairwise
    // farther than the hardcore distance, so disc packing bounds their number.
    double rho = 0.5, outer = 1.0;
    double hs_bound = std::fabs(theta) * std::pow((outer + rho / 2) / (rho / 2), 2);
    // kNN: k own neighbours plus at most 5k adopters, each bounded by sup|phi|.
    double knn_bound = std::fabs(theta) * 6.0 * 2.0 * 1.0;
    // Delaunay: destroyed triangles have R < alpha so Per < 6 alpha; their
    // vertices lie within 2 alpha of x and are pairwise farther than r.
    double r = 0.5, alpha = 0.7;
    double del_bound = std::fabs(theta) * 2.0 * std::pow((2 * alpha + r / 2) / (r / 2), 2) * 6.0 * alpha;
    for (int rep = 0; rep < 40; ++rep) {
        auto hs_cfg = testutil::rsa_pattern(w, 80, 0.5, rng);
        auto knn_cfg = testutil::cluster_pattern(w, 12, 4, 0.45, rng);
        auto del_cfg = testutil::jittered_torus_lattice(w, 0.9, 0.12, rng);
        for (int j = 0; j < 10; ++j) {
            Point x{rng.uniform(0, 8) * 0.999, rng.uniform(0, 8) * 0.999};
            auto a = local_energy(hs1(), {2.0, {theta}}, x, hs_cfg);
            if (a.is_finite()) { EXPECT_GE(a.value(), -hs_bound); }
            auto b = local_energy(knn_trunclin(), {1.0, {theta}}, x, knn_cfg);
            if (b.is_finite()) { EXPECT_GE(b.value(), -knn_bound); }
            if (is_feasible(Model::delaunay(r), alpha, del_cfg)) {
                auto c = local_energy(Model::delaunay(r), {alpha, {theta}}, x, del_cfg);
                if (c.is_finite()) { EXPECT_GE(c.value(), -del_bound); }
            }
        }
    }
}
