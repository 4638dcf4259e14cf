#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "emgaction/elm.hpp"
#include "emgaction/rng.hpp"

using emgaction::Activation;
using emgaction::ElmConfig;
using emgaction::ElmModel;
using emgaction::Rng;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

TEST_CASE("activation values at zero") {
    using emgaction::detail::apply_activation;
    REQUIRE(apply_activation(Activation::Sig, 0.0) == 0.5);
    REQUIRE(apply_activation(Activation::Sin, 0.0) == 0.0);
    REQUIRE(apply_activation(Activation::Hardlim, 0.0) == 1.0);
    REQUIRE(apply_activation(Activation::Tribas, 0.0) == 1.0);
    REQUIRE(apply_activation(Activation::Radbas, 0.0) == 1.0);
    REQUIRE(apply_activation(Activation::Relu, 0.0) == 0.0);
    REQUIRE(apply_activation(Activation::Lrelu, 0.0) == 0.0);
    REQUIRE(apply_activation(Activation::Lrelu, -2.0) == Catch::Approx(-0.02));
}

TEST_CASE("activation names round-trip") {
    for (Activation a : emgaction::all_activations())
        REQUIRE(emgaction::parse_activation(emgaction::activation_name(a)) == a);
    REQUIRE_THROWS_AS(emgaction::parse_activation("tanh"), emgaction::ConfigError);
}

TEST_CASE("smax hidden rows sum to one") {
    Rng rng(5);
    MatrixXd x(6, 3);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 3; ++c) x(r, c) = rng.gaussian();
    MatrixXd w(16, 3);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 3; ++c) w(r, c) = rng.uniform(-1.0, 1.0);
    VectorXd b(16);
    for (int r = 0; r < 16; ++r) b(r) = rng.uniform(-1.0, 1.0);
    MatrixXd h = emgaction::elm_hidden(x, w, b, Activation::Smax);
    for (int r = 0; r < h.rows(); ++r) REQUIRE(h.row(r).sum() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("training is deterministic given the seed") {
    Rng rng(12);
    MatrixXd x(30, 5);
    std::vector<int> y(30);
    for (int r = 0; r < 30; ++r) {
        y[static_cast<std::size_t>(r)] = r % 3;
        for (int c = 0; c < 5; ++c) x(r, c) = rng.gaussian() + y[static_cast<std::size_t>(r)];
    }
    ElmConfig cfg;
    cfg.n_hidden = 40;
    cfg.seed = 9;
    ElmModel a = emgaction::elm_train(x, y, 3, cfg);
    ElmModel b = emgaction::elm_train(x, y, 3, cfg);
    REQUIRE(a.input_weights == b.input_weights);
    REQUIRE(a.biases == b.biases);
    REQUIRE(a.beta == b.beta);

    cfg.seed = 10;
    ElmModel c = emgaction::elm_train(x, y, 3, cfg);
    REQUIRE(a.input_weights != c.input_weights);
}

TEST_CASE("interpolation regime: one point per class classifies itself") {
    MatrixXd x(4, 3);
    x << 0.0, 0.0, 0.0, 1.0, 0.0, 0.5, 0.0, 1.0, -0.5, 1.0, 1.0, 0.25;
    const std::vector<int> y = {0, 1, 2, 3};
    ElmConfig cfg;
    cfg.n_hidden = 200;
    cfg.seed = 3;
    for (Activation a : {Activation::Sig, Activation::Sin, Activation::Radbas, Activation::Relu}) {
        cfg.activation = a;
        ElmModel m = emgaction::elm_train(x, y, 4, cfg);
        for (int i = 0; i < 4; ++i) REQUIRE(emgaction::elm_predict(m, x.row(i)) == y[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("beta solves the normal equations") {
    Rng rng(77);
    MatrixXd x(50, 6);
    std::vector<int> y(50);
    for (int r = 0; r < 50; ++r) {
        y[static_cast<std::size_t>(r)] = r % 4;
        for (int c = 0; c < 6; ++c) x(r, c) = rng.gaussian() + 0.8 * y[static_cast<std::size_t>(r)];
    }
    ElmConfig cfg;
    cfg.n_hidden = 32;
    cfg.seed = 4;
    ElmModel m = emgaction::elm_train(x, y, 4, cfg);

    MatrixXd h = emgaction::elm_hidden(x, m.input_weights, m.biases, m.activation);
    MatrixXd targets = MatrixXd::Zero(50, 4);
    for (int r = 0; r < 50; ++r) targets(r, y[static_cast<std::size_t>(r)]) = 1.0;
    MatrixXd residual_normal = h.transpose() * (h * m.beta - targets);
    const double rel = residual_normal.norm() / (h.norm() * targets.norm());
    REQUIRE(rel < 1e-6);
}

TEST_CASE("elm guards configuration and dimensions") {
    MatrixXd x(3, 2);
    x.setRandom();
    REQUIRE_THROWS_AS(emgaction::elm_train(x, {0, 1}, 2, ElmConfig{}), emgaction::DimError);
    ElmConfig bad;
    bad.n_hidden = 0;
    REQUIRE_THROWS_AS(emgaction::elm_train(x, {0, 1, 0}, 2, bad), emgaction::ConfigError);
    ElmModel m = emgaction::elm_train(x, {0, 1, 0}, 2, ElmConfig{});
    RowVectorXd wrong(5);
    wrong.setZero();
    REQUIRE_THROWS_AS(emgaction::elm_predict(m, wrong), emgaction::DimError);
}

TEST_CASE("batch and single predictions agree") {
    Rng rng(31);
    MatrixXd x(25, 4);
    std::vector<int> y(25);
    for (int r = 0; r < 25; ++r) {
        y[static_cast<std::size_t>(r)] = r % 2;
        for (int c = 0; c < 4; ++c) x(r, c) = rng.gaussian() + 2.0 * y[static_cast<std::size_t>(r)];
    }
    ElmConfig cfg;
    cfg.n_hidden = 20;
    ElmModel m = emgaction::elm_train(x, y, 2, cfg);
    std::vector<int> batch = emgaction::elm_predict_batch(m, x);
    for (int r = 0; r < 25; ++r) REQUIRE(batch[static_cast<std::size_t>(r)] == emgaction::elm_predict(m, x.row(r)));
}
