#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "emgaction/errors.hpp"
#include "emgaction/rng.hpp"

namespace emgaction {

// The eight hidden-layer activations from the classifier comparison.
enum class Activation { Sig, Sin, Hardlim, Tribas, Radbas, Relu, Lrelu, Smax };

inline const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Sig: return "sig";
        case Activation::Sin: return "sin";
        case Activation::Hardlim: return "hardlim";
        case Activation::Tribas: return "tribas";
        case Activation::Radbas: return "radbas";
        case Activation::Relu: return "relu";
        case Activation::Lrelu: return "lrelu";
        case Activation::Smax: return "smax";
    }
    return "?";
}

inline Activation parse_activation(const std::string& name) {
    for (Activation a : {Activation::Sig, Activation::Sin, Activation::Hardlim, Activation::Tribas,
                         Activation::Radbas, Activation::Relu, Activation::Lrelu, Activation::Smax})
        if (name == activation_name(a)) return a;
    throw ConfigError("unknown activation '" + name + "'");
}

inline const std::vector<Activation>& all_activations() {
    static const std::vector<Activation> all = {
        Activation::Sig,    Activation::Sin,  Activation::Hardlim, Activation::Tribas,
        Activation::Radbas, Activation::Relu, Activation::Lrelu,   Activation::Smax};
    return all;
}

struct ElmConfig {
    int n_hidden = 200;
    Activation activation = Activation::Sig;
    std::uint64_t seed = 0;
};

struct ElmModel {
    Eigen::MatrixXd input_weights; // n_hidden x d
    Eigen::VectorXd biases;        // n_hidden
    Eigen::MatrixXd beta;          // n_hidden x n_classes
    Activation activation = Activation::Sig;
    int n_classes = 0;
};

namespace detail {

inline double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::Sig: return 1.0 / (1.0 + std::exp(-x));
        case Activation::Sin: return std::sin(x);
        case Activation::Hardlim: return x >= 0.0 ? 1.0 : 0.0;
        case Activation::Tribas: return std::max(0.0, 1.0 - std::abs(x));
        case Activation::Radbas: return std::exp(-x * x);
        case Activation::Relu: return std::max(0.0, x);
        case Activation::Lrelu: return x > 0.0 ? x : 0.01 * x;
        case Activation::Smax: return x; // handled row-wise below
    }
    return x;
}

} // namespace detail

// Hidden response H = act(X W^T + b). Smax normalizes each hidden vector to a
// softmax, so its rows sum to 1.
inline Eigen::MatrixXd elm_hidden(const Eigen::MatrixXd& X, const Eigen::MatrixXd& input_weights,
                                  const Eigen::VectorXd& biases, Activation activation) {
    Eigen::MatrixXd h = X * input_weights.transpose();
    h.rowwise() += biases.transpose();
    if (activation == Activation::Smax) {
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            const double m = h.row(r).maxCoeff();
            Eigen::ArrayXd e = (h.row(r).array() - m).exp();
            h.row(r) = (e / e.sum()).matrix();
        }
    } else {
        for (Eigen::Index r = 0; r < h.rows(); ++r)
            for (Eigen::Index c = 0; c < h.cols(); ++c)
                h(r, c) = detail::apply_activation(activation, h(r, c));
    }
    return h;
}

// Random hidden layer drawn uniformly from [-1, 1] with the configured seed;
// the output layer solves min ||H beta - Y|| by SVD with singular values
// below 1e-10 of the largest treated as zero.
inline ElmModel elm_train(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_classes,
                          const ElmConfig& cfg) {
    const Eigen::Index n = X.rows(), d = X.cols();
    if (n < 1) throw InsufficientDataError("elm_train: empty training set");
    if (static_cast<std::size_t>(n) != y.size()) throw DimError("elm_train: rows and labels disagree");
    if (cfg.n_hidden < 1) throw ConfigError("elm_train: n_hidden must be >= 1");

    ElmModel m;
    m.activation = cfg.activation;
    m.n_classes = n_classes;
    m.input_weights.resize(cfg.n_hidden, d);
    m.biases.resize(cfg.n_hidden);
    Rng rng(derive_seed(cfg.seed, "elm-weights"));
    for (Eigen::Index r = 0; r < m.input_weights.rows(); ++r)
        for (Eigen::Index c = 0; c < m.input_weights.cols(); ++c)
            m.input_weights(r, c) = rng.uniform(-1.0, 1.0);
    for (Eigen::Index r = 0; r < m.biases.size(); ++r) m.biases(r) = rng.uniform(-1.0, 1.0);

    Eigen::MatrixXd h = elm_hidden(X, m.input_weights, m.biases, m.activation);
    Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(n, n_classes);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int cls = y[static_cast<std::size_t>(i)];
        if (cls < 0 || cls >= n_classes) throw ConfigError("elm_train: label out of range");
        targets(i, cls) = 1.0;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    m.beta = svd.solve(targets);
    return m;
}

inline Eigen::RowVectorXd elm_scores(const ElmModel& m, const Eigen::RowVectorXd& x) {
    if (x.size() != m.input_weights.cols()) throw DimError("elm_predict: dimension mismatch");
    Eigen::MatrixXd h = elm_hidden(x, m.input_weights, m.biases, m.activation);
    return h.row(0) * m.beta;
}

// Argmax of the output scores; ties go to the lowest class index.
inline int elm_predict(const ElmModel& m, const Eigen::RowVectorXd& x) {
    Eigen::RowVectorXd scores = elm_scores(m, x);
    int best = 0;
    for (int c = 1; c < m.n_classes; ++c)
        if (scores(c) > scores(best)) best = c;
    return best;
}

inline std::vector<int> elm_predict_batch(const ElmModel& m, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd h = elm_hidden(X, m.input_weights, m.biases, m.activation);
    Eigen::MatrixXd scores = h * m.beta;
    std::vector<int> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        int best = 0;
        for (int c = 1; c < m.n_classes; ++c)
            if (scores(r, c) > scores(r, best)) best = c;
        out[static_cast<std::size_t>(r)] = best;
    }
    return out;
}

} // namespace emgaction
