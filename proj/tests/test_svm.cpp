#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "emgaction/rng.hpp"
#include "emgaction/svm.hpp"

using emgaction::Rng;
using emgaction::SvmModel;
using emgaction::SvmParams;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;

TEST_CASE("two-point problem separates with a sign flip at the midpoint") {
    MatrixXd x(2, 1);
    x << -1.0, 1.0;
    SvmParams params;
    params.C = 10.0;
    params.gamma = 1.0;
    SvmModel m = emgaction::svm_train(x, {0, 1}, 2, params);

    RowVectorXd left(1), right(1);
    left << -1.0;
    right << 1.0;
    REQUIRE(emgaction::svm_predict(m, left) == 0);
    REQUIRE(emgaction::svm_predict(m, right) == 1);
    // decision function is antisymmetric here; the boundary sits at zero
    const double f_left = emgaction::svm_decision(m, m.machines[0], left);
    const double f_right = emgaction::svm_decision(m, m.machines[0], right);
    REQUIRE(f_left * f_right < 0.0);
}

TEST_CASE("rbf svm solves xor with full training accuracy") {
    MatrixXd x(4, 2);
    x << 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0;
    const std::vector<int> y = {0, 0, 1, 1};
    SvmParams params;
    params.C = 10.0;
    params.gamma = 1.0;
    SvmModel m = emgaction::svm_train(x, y, 2, params);
    for (int i = 0; i < 4; ++i)
        REQUIRE(emgaction::svm_predict(m, x.row(i)) == y[static_cast<std::size_t>(i)]);
}

TEST_CASE("single-class input is rejected") {
    MatrixXd x(3, 2);
    x.setRandom();
    REQUIRE_THROWS_AS(emgaction::svm_train(x, {1, 1, 1}, 2, SvmParams{}),
                      emgaction::DegenerateLabelsError);
}

namespace {

// Gaussian blob data, one cluster per class.
void make_blobs(int per_class, int n_classes, int dim, std::uint64_t seed, MatrixXd& x,
                std::vector<int>& y) {
    Rng rng(seed);
    x.resize(per_class * n_classes, dim);
    y.clear();
    for (int c = 0; c < n_classes; ++c)
        for (int i = 0; i < per_class; ++i) {
            const int row = c * per_class + i;
            for (int d = 0; d < dim; ++d) x(row, d) = 3.0 * c + 0.5 * rng.gaussian();
            y.push_back(c);
        }
}

} // namespace

TEST_CASE("dual feasibility holds for every trained pair machine") {
    MatrixXd x;
    std::vector<int> y;
    make_blobs(15, 3, 4, 2020, x, y);
    SvmParams params;
    params.C = 1.0;
    SvmModel m = emgaction::svm_train(x, y, 3, params);
    REQUIRE(m.machines.size() == 3);
    for (const auto& machine : m.machines) {
        double sum_alpha_y = 0.0;
        for (int s = 0; s < machine.alpha_y.size(); ++s) {
            const double ay = machine.alpha_y(s);
            REQUIRE(std::abs(ay) <= params.C + 1e-9); // 0 <= alpha <= C
            sum_alpha_y += ay;
        }
        REQUIRE(std::abs(sum_alpha_y) < 1e-6);
    }
}

TEST_CASE("separable blobs classify their own training points") {
    MatrixXd x;
    std::vector<int> y;
    make_blobs(20, 4, 3, 99, x, y);
    SvmModel m = emgaction::svm_train(x, y, 4, SvmParams{});
    int hits = 0;
    for (int i = 0; i < x.rows(); ++i)
        if (emgaction::svm_predict(m, x.row(i)) == y[static_cast<std::size_t>(i)]) ++hits;
    REQUIRE(hits == x.rows());
}

TEST_CASE("training is deterministic given data order and seed") {
    MatrixXd x;
    std::vector<int> y;
    make_blobs(12, 3, 4, 31, x, y);
    SvmParams params;
    params.seed = 5;
    SvmModel a = emgaction::svm_train(x, y, 3, params);
    SvmModel b = emgaction::svm_train(x, y, 3, params);
    REQUIRE(a.machines.size() == b.machines.size());
    for (std::size_t i = 0; i < a.machines.size(); ++i) {
        REQUIRE(a.machines[i].b == b.machines[i].b);
        REQUIRE(a.machines[i].alpha_y == b.machines[i].alpha_y);
        REQUIRE(a.machines[i].support_vectors == b.machines[i].support_vectors);
    }
}

TEST_CASE("one-vs-rest mode also separates the blobs") {
    MatrixXd x;
    std::vector<int> y;
    make_blobs(15, 3, 2, 47, x, y);
    SvmParams params;
    params.multiclass = emgaction::SvmMulticlass::OneVsRest;
    SvmModel m = emgaction::svm_train(x, y, 3, params);
    REQUIRE(m.machines.size() == 3);
    int hits = 0;
    for (int i = 0; i < x.rows(); ++i)
        if (emgaction::svm_predict(m, x.row(i)) == y[static_cast<std::size_t>(i)]) ++hits;
    REQUIRE(hits >= x.rows() - 1); // allow one margin straggler
}

TEST_CASE("two-class one-vs-one reduces to a single machine's sign") {
    MatrixXd x;
    std::vector<int> y;
    make_blobs(10, 2, 2, 7, x, y);
    SvmModel m = emgaction::svm_train(x, y, 2, SvmParams{});
    REQUIRE(m.machines.size() == 1);
    Rng rng(8);
    for (int t = 0; t < 30; ++t) {
        RowVectorXd q(2);
        q << rng.uniform(-2.0, 5.0), rng.uniform(-2.0, 5.0);
        const double f = emgaction::svm_decision(m, m.machines[0], q);
        REQUIRE(emgaction::svm_predict(m, q) == (f >= 0.0 ? 0 : 1));
    }
}

TEST_CASE("prediction validates dimensions") {
    MatrixXd x;
    std::vector<int> y;
    make_blobs(5, 2, 3, 3, x, y);
    SvmModel m = emgaction::svm_train(x, y, 2, SvmParams{});
    RowVectorXd wrong(4);
    wrong.setZero();
    REQUIRE_THROWS_AS(emgaction::svm_predict(m, wrong), emgaction::DimError);
}
