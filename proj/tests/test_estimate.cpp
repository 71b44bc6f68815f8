#include "nhgibbs/estimate.hpp"
#include "nhgibbs/oracle.hpp"
#include "nhgibbs/sampler.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace nhg;

namespace {

const Window kPlane(10.0, Boundary::plane);

PointConfiguration make(Window w, std::vector<Point> pts) { return PointConfiguration::from_points(w, pts); }

Model hs1() { return Model::hard_sphere({0.5}); }
Model knn_trunclin() { return Model::knn(2, Phi{Phi::Family::trunclin, {1.0}}); }

}  // namespace

TEST(EstimateAlpha, HardSphereClosedFormAndNudge) {
    auto cfg = make(kPlane, {{1, 1}, {1.4, 1}, {3, 3}});
    AlphaEstimate a = estimate_alpha(hs1(), cfg);
    EXPECT_NEAR(a.alpha_hat, 2.5, 1e-12);
    EXPECT_FALSE(a.attained);
    EXPECT_GT(a.epsilon, 0.0);
    EXPECT_LE(a.epsilon, 1e-9 * 2.5 * 1024);
    EXPECT_TRUE(is_feasible(hs1(), a.value(), cfg));
    EXPECT_FALSE(is_feasible(hs1(), a.alpha_hat * (1 - 1e-6), cfg));
}

TEST(EstimateAlpha, KnnIsAttained) {
    auto cfg = make(kPlane, {{0, 0}, {0.3, 0}, {0, 0.3}});
    AlphaEstimate a = estimate_alpha(Model::knn(2, Phi{}), cfg);
    EXPECT_NEAR(a.alpha_hat, 0.42426406871192851, 1e-12);
    EXPECT_EQ(a.epsilon, 0.0);
    EXPECT_TRUE(a.attained);
}

TEST(EstimateAlpha, UndefinedForTooFewPoints) {
    auto cfg = make(kPlane, {{0, 0}, {0.3, 0}});
    try {
        estimate_alpha(Model::knn(2, Phi{}), cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::undefined);
    }
}

TEST(EstimateAlpha, MonotoneUnderWindowNesting) {
    CounterRng rng(51);
    for (int rep = 0; rep < 30; ++rep) {
        auto hs_cfg = testutil::rsa_pattern(kPlane, 60, 0.3, rng);
        auto knn_cfg = testutil::cluster_pattern(kPlane, 10, 3, 0.5, rng, 0.6);
        double prev_hs = 0.0, prev_knn = 0.0;
        for (double half : {2.0, 3.0, 4.0, 5.0}) {
            Region r = Region::rect(5 - half, 5 - half, 5 + half, 5 + half);
            double a = estimate_alpha(hs1(), hs_cfg, r).alpha_hat;
            EXPECT_GE(a, prev_hs);
            prev_hs = a;
            double b = estimate_alpha(knn_trunclin(), knn_cfg, r).alpha_hat;
            EXPECT_GE(b, prev_knn);
            prev_knn = b;
        }
    }
}

TEST(Pll, EmptyPatternGivesOneExactly) {
    Window w(10.0);
    PointConfiguration empty(w);
    for (const Model& m : {hs1(), Model::hard_sphere({0.2, 0.4}), Model::poisson()}) {
        std::vector<double> theta(m.dimension(), 0.7);
        EXPECT_EQ(pll(m, empty, Region::whole(), 1.0, theta, {25.0}), 1.0) << m.name();
    }
    // A lone point has fewer than k neighbours, so nothing can be inserted.
    EXPECT_EQ(pll(knn_trunclin(), empty, Region::whole(), 1.0, {0.7}, {25.0}), 0.0);
}

TEST(Pll, HardSphereEqualsClassicalBesagForm) {
    Window w(5.0);
    CounterRng rng(52);
    for (int rep = 0; rep < 5; ++rep) {
        auto cfg = testutil::rsa_pattern(w, 20, 0.55, rng);
        double theta = rng.uniform(-1, 2);
        double fast = pll(hs1(), cfg, Region::whole(), 2.0, {theta}, {16.0});
        double brute = brute_besag_pll(hs1(), {2.0, {theta}}, cfg, 16.0);
        EXPECT_NEAR(fast, brute, 1e-10);
        EXPECT_EQ(make_pll_data(hs1(), cfg, Region::whole(), 2.0, {16.0}).removable_t.size(), cfg.size());
    }
}

TEST(Pll, KnnClusterHasNoSumTerm) {
    Window w(10.0);
    auto cfg = make(w, {{1, 1}, {1.3, 1}, {1, 1.3}});
    PllData d = make_pll_data(knn_trunclin(), cfg, Region::whole(), 1.0, {25.0});
    EXPECT_TRUE(d.removable_t.empty());
    double integral = 0.0;
    for (const auto& t : d.node_t) integral += std::exp(-0.8 * t[0]);
    EXPECT_NEAR(d.value({0.8}), d.measure * integral / static_cast<double>(d.node_count) / 100.0, 1e-13);
}

TEST(Pll, InfeasibleAlphaIsAnError) {
    auto cfg = make(kPlane, {{1, 1}, {1.4, 1}});
    try {
        pll(hs1(), cfg, Region::whole(), 2.0, {0.5}, {25.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::infeasible_alpha);
    }
}

TEST(PllDerivatives, MatchFiniteDifferencesAndHessianIsPsd) {
    CounterRng rng(53);
    Window w(6.0);
    Model hs2 = Model::hard_sphere({0.3, 0.7});
    for (int rep = 0; rep < 10; ++rep) {
        struct Case {
            Model m;
            PointConfiguration cfg;
            double alpha;
        };
        std::vector<Case> cases{{hs2, testutil::rsa_pattern(w, 25, 0.55, rng), 2.0},
                                {knn_trunclin(), testutil::cluster_pattern(w, 5, 3, 0.4, rng), 1.0},
                                {Model::delaunay(0.3), testutil::jittered_torus_lattice(w, 1.0, 0.15, rng), 0.9}};
        for (const Case& c : cases) {
            PllData d = make_pll_data(c.m, c.cfg, Region::whole(), c.alpha, {25.0});
            std::vector<double> theta(c.m.dimension());
            for (double& t : theta) t = rng.uniform(-1.0, 2.0);
            Eigen::VectorXd g = d.gradient(theta);
            for (std::size_t i = 0; i < theta.size(); ++i) {
                double h = 1e-5 * std::max(1.0, std::fabs(theta[i]));
                auto up = theta, down = theta;
                up[i] += h;
                down[i] -= h;
                double fd = (d.value(up) - d.value(down)) / (2 * h);
                double gi = g[static_cast<Eigen::Index>(i)];
                EXPECT_NEAR(gi, fd, 1e-6 * std::max(1.0, std::fabs(gi))) << c.m.name();
            }
            Eigen::MatrixXd H = d.hessian(theta);
            EXPECT_LT((H - H.transpose()).norm(), 1e-14);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12) << c.m.name();
        }
    }
}

TEST(EstimateTheta, ConstantStatisticClosedForm) {
    // PLL = (A exp(-theta c) + n_R theta c) / A, minimised at log(A / n_R) / c.
    PllData d;
    d.p = 1;
    d.region_area = 100.0;
    d.measure = 100.0;
    d.node_count = 400;
    d.node_t.assign(400, {0.8});
    d.removable_t.assign(37, {0.8});
    EstimationResult r = minimize_pll(d, {{-5}, {5}});
    EXPECT_NEAR(r.theta_hat[0], std::log(100.0 / 37.0) / 0.8, 1e-8);
    EXPECT_LE(r.gradient_norm, 1e-8);
    EXPECT_FALSE(r.at_boundary[0]);
}

TEST(EstimateTheta, InteriorOptimumHasVanishingGradient) {
    CounterRng rng(54);
    Window w(8.0);
    Model hs2 = Model::hard_sphere({0.3, 0.7});
    for (int rep = 0; rep < 5; ++rep) {
        auto cfg = testutil::rsa_pattern(w, 60, 0.55, rng);
        EstimationResult r = estimate_theta(hs2, cfg, Region::whole(), 2.0, {{-5, -5}, {5, 5}}, {25.0});
        if (r.any_at_boundary()) continue;
        EXPECT_LE(r.gradient_norm, 1e-8);
        EXPECT_LE(r.iterations, 100);
    }
}

TEST(EstimateTheta, KnnWithoutRemovablePointsEndsOnTheBox) {
    Window w(10.0);
    auto cfg = make(w, {{1, 1}, {1.3, 1}, {1, 1.3}});
    EstimationResult r = estimate_theta(knn_trunclin(), cfg, Region::whole(), 1.0, {{-5}, {5}}, {25.0});
    EXPECT_EQ(r.removable_count, 0u);
    EXPECT_TRUE(r.at_boundary[0]);
    EXPECT_TRUE(r.degenerate);
}

TEST(Contrast, ZeroAtTruthAndAntisymmetric) {
    CounterRng rng(55);
    Window w(8.0);
    auto cfg = testutil::rsa_pattern(w, 60, 0.55, rng);
    PllData d = make_pll_data(hs1(), cfg, Region::whole(), 2.0, {25.0});
    EXPECT_EQ(contrast_kn(d, {0.5}, {0.5}), 0.0);
    for (double a = -1; a <= 2; a += 0.25) EXPECT_EQ(contrast_kn(d, {a}, {0.5}), -contrast_kn(d, {0.5}, {a}));
    EXPECT_EQ(contrast_kn(hs1(), cfg, Region::whole(), 2.0, {0.5}, {0.5}, {25.0}), 0.0);
}

TEST(TwoStep, HardSphereOnSimulatedData) {
    Model hs = hs1();
    ModelParams truth{2.0, {0.5}};
    SamplerConfig sc = default_sampler_config(hs, truth);
    sc.burn_in = 30000;
    sc.keep = 1;
    sc.seed = 56;
    auto cfg = run_chain(hs, truth, Window(10.0), sc).samples.back();
    EstimationResult r = two_step(hs, cfg, Region::whole(), {{-5}, {5}}, {25.0});
    EXPECT_LT(r.alpha_hat, truth.alpha);
    EXPECT_GT(r.epsilon, 0.0);
    EXPECT_EQ(r.removable_count, cfg.size());
    EXPECT_FALSE(r.any_at_boundary());
    EXPECT_NEAR(r.theta_hat[0], 0.5, 1.0);
}

TEST(TwoStep, PlaneDataUsesMinusSampling) {
    CounterRng rng(57);
    auto cfg = testutil::rsa_pattern(kPlane, 80, 0.6, rng);
    EstimationResult r = two_step(hs1(), cfg, Region::whole(), {{-5}, {5}}, {25.0});
    // Only points at least the interaction range away from the border count.
    double margin = hs1().interaction_range(r.alpha_hat + r.epsilon);
    std::size_t inner = restrict(cfg, Region::rect(margin, margin, 10 - margin, 10 - margin)).size();
    EXPECT_EQ(r.n_points, inner);
    EXPECT_LT(r.n_points, cfg.size());
}

TEST(EstimateCsv, HeaderAndRow) {
    EXPECT_EQ(estimate_csv_header(2),
              "alpha_hat,epsilon,attained,theta_hat_1,theta_hat_2,pll,grad_norm,iters,at_boundary,removable_count,"
              "n_points,L\n");
    EstimationResult r;
    r.alpha_hat = 2.5;
    r.theta_hat = {0.5};
    r.at_boundary = {false};
    r.side = 10;
    EXPECT_EQ(estimate_csv_row(r), "2.5,0,0,0.5,0,0,0,0,0,0,10\n");
}
