#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "emgaction/dataset.hpp"
#include "emgaction/model.hpp"
#include "emgaction/pipeline.hpp"
#include "emgaction/rng.hpp"

namespace emgaction {

struct ConfusionMatrix {
    std::vector<std::vector<long long>> counts; // rows = true class, cols = predicted

    explicit ConfusionMatrix(int n_classes = 0)
        : counts(static_cast<std::size_t>(n_classes),
                 std::vector<long long>(static_cast<std::size_t>(n_classes), 0)) {}

    int n_classes() const { return static_cast<int>(counts.size()); }

    void add(int truth, int predicted) { ++counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)]; }

    void merge(const ConfusionMatrix& other) {
        for (int r = 0; r < n_classes(); ++r)
            for (int c = 0; c < n_classes(); ++c)
                counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] +=
                    other.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }

    long long total() const {
        long long t = 0;
        for (const auto& row : counts)
            for (long long v : row) t += v;
        return t;
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct MetricsReport {
    double accuracy = 0.0;
    double balanced_accuracy = 0.0;
    double cohens_kappa = 0.0;
    std::vector<double> sensitivity;
    std::vector<double> specificity;
    std::vector<double> precision;
    std::vector<double> f_measure;
    std::vector<double> misclassification_rate;
    std::vector<std::string> flags; // metrics whose denominator was zero
};

// Per-class metrics are one-vs-rest; kappa uses the marginal chance agreement.
// Zero denominators yield 0 and record a flag.
inline MetricsReport compute_metrics(const ConfusionMatrix& cm) {
    const int k = cm.n_classes();
    const long long total = cm.total();
    if (k == 0 || total == 0) throw EmptyMatrixError("compute_metrics: empty confusion matrix");

    MetricsReport rep;
    std::vector<long long> row_sum(static_cast<std::size_t>(k), 0), col_sum(static_cast<std::size_t>(k), 0);
    long long diag = 0;
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            const long long v = cm.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            row_sum[static_cast<std::size_t>(r)] += v;
            col_sum[static_cast<std::size_t>(c)] += v;
            if (r == c) diag += v;
        }

    rep.accuracy = static_cast<double>(diag) / static_cast<double>(total);
    rep.sensitivity.resize(static_cast<std::size_t>(k));
    rep.specificity.resize(static_cast<std::size_t>(k));
    rep.precision.resize(static_cast<std::size_t>(k));
    rep.f_measure.resize(static_cast<std::size_t>(k));
    rep.misclassification_rate.resize(static_cast<std::size_t>(k));

    double sens_sum = 0.0;
    for (int c = 0; c < k; ++c) {
        const long long tp = cm.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        const long long fn = row_sum[static_cast<std::size_t>(c)] - tp;
        const long long fp = col_sum[static_cast<std::size_t>(c)] - tp;
        const long long tn = total - tp - fn - fp;

        auto ratio = [&](long long num, long long den, const std::string& what) {
            if (den == 0) {
                rep.flags.push_back(what + " class " + std::to_string(c) + ": zero denominator");
                return 0.0;
            }
            return static_cast<double>(num) / static_cast<double>(den);
        };
        const double sens = ratio(tp, tp + fn, "sensitivity");
        const double prec = ratio(tp, tp + fp, "precision");
        rep.sensitivity[static_cast<std::size_t>(c)] = sens;
        rep.specificity[static_cast<std::size_t>(c)] = ratio(tn, tn + fp, "specificity");
        rep.precision[static_cast<std::size_t>(c)] = prec;
        rep.f_measure[static_cast<std::size_t>(c)] =
            (prec + sens) > 0.0 ? 2.0 * prec * sens / (prec + sens) : 0.0;
        rep.misclassification_rate[static_cast<std::size_t>(c)] = 1.0 - sens;
        sens_sum += sens;
    }
    rep.balanced_accuracy = sens_sum / k;

    double pe = 0.0;
    for (int c = 0; c < k; ++c)
        pe += (static_cast<double>(row_sum[static_cast<std::size_t>(c)]) / static_cast<double>(total)) *
              (static_cast<double>(col_sum[static_cast<std::size_t>(c)]) / static_cast<double>(total));
    if (pe >= 1.0) {
        rep.flags.push_back("kappa: chance agreement is 1");
        rep.cohens_kappa = 0.0;
    } else {
        rep.cohens_kappa = (rep.accuracy - pe) / (1.0 - pe);
    }
    return rep;
}

// Disjoint folds with per-class counts differing by at most one. Class
// members are shuffled by seed, then dealt round-robin; fold membership
// depends only on each sample's position within its class.
inline std::vector<std::vector<int>> stratified_kfold(const std::vector<int>& labels, int k,
                                                      std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified_kfold: k must be >= 2");
    int n_classes = 0;
    for (int l : labels) n_classes = std::max(n_classes, l + 1);
    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));

    std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
    for (int c = 0; c < n_classes; ++c) {
        auto& members = by_class[static_cast<std::size_t>(c)];
        if (static_cast<int>(members.size()) < k)
            throw StratificationError("stratified_kfold: class " + std::to_string(c) + " has " +
                                      std::to_string(members.size()) + " members, need >= " +
                                      std::to_string(k));
        Rng rng(derive_seed(seed, "fold-class", static_cast<std::uint64_t>(c)));
        deterministic_shuffle(members, rng);
        for (std::size_t j = 0; j < members.size(); ++j)
            folds[j % static_cast<std::size_t>(k)].push_back(members[j]);
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

// Per-class stratified shuffle split; returns (train, test) index sets.
inline std::pair<std::vector<int>, std::vector<int>> stratified_split(const std::vector<int>& labels,
                                                                      double train_fraction,
                                                                      std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("stratified_split: fraction must be in (0, 1)");
    int n_classes = 0;
    for (int l : labels) n_classes = std::max(n_classes, l + 1);
    std::vector<int> train, test;
    for (int c = 0; c < n_classes; ++c) {
        std::vector<int> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) members.push_back(static_cast<int>(i));
        if (members.size() < 2)
            throw StratificationError("stratified_split: class " + std::to_string(c) +
                                      " needs at least 2 members");
        Rng rng(derive_seed(seed, "split-class", static_cast<std::uint64_t>(c)));
        deterministic_shuffle(members, rng);
        const int m = static_cast<int>(members.size());
        const int n_train = std::clamp(static_cast<int>(std::lround(train_fraction * m)), 1, m - 1);
        for (int j = 0; j < m; ++j)
            (j < n_train ? train : test).push_back(members[static_cast<std::size_t>(j)]);
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

namespace detail {

inline Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<int>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
    return out;
}

inline std::vector<int> take_labels(const std::vector<int>& y, const std::vector<int>& rows) {
    std::vector<int> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = y[static_cast<std::size_t>(rows[i])];
    return out;
}

} // namespace detail

struct CvResult {
    ConfusionMatrix confusion{0};
    MetricsReport metrics;
};

// k-fold cross-validation with the transform pipeline fit inside each fold's
// training split only. Metrics come from the pooled confusion matrix.
inline CvResult cross_validate(const FeatureDataset& ds, const FeatureSubsetSpec& subset,
                               const ClassifierConfig& clf, const PipelineConfig& pipe, int k,
                               std::uint64_t seed) {
    if (k < 2) throw ConfigError("cross_validate: k must be >= 2");
    const std::vector<int> cols = subset_indices(ds.layout, subset);
    if (cols.empty()) throw ConfigError("cross_validate: empty subset");
    Eigen::MatrixXd X(ds.X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) X.col(static_cast<Eigen::Index>(c)) = ds.X.col(cols[c]);

    const std::vector<std::vector<int>> folds = stratified_kfold(ds.y, k, seed);
    ConfusionMatrix pooled(ds.n_classes());
    for (int f = 0; f < k; ++f) {
        std::vector<int> test_rows = folds[static_cast<std::size_t>(f)];
        std::vector<int> train_rows;
        for (int g = 0; g < k; ++g)
            if (g != f)
                train_rows.insert(train_rows.end(), folds[static_cast<std::size_t>(g)].begin(),
                                  folds[static_cast<std::size_t>(g)].end());
        std::sort(train_rows.begin(), train_rows.end());

        Eigen::MatrixXd x_train = detail::take_rows(X, train_rows);
        Eigen::MatrixXd x_test = detail::take_rows(X, test_rows);
        const std::vector<int> y_train = detail::take_labels(ds.y, train_rows);
        const std::vector<int> y_test = detail::take_labels(ds.y, test_rows);

        ClassifierConfig fold_clf = clf;
        fold_clf.svm.seed = derive_seed(seed, "cv-svm", static_cast<std::uint64_t>(f));
        fold_clf.elm.seed = derive_seed(seed, "cv-elm", static_cast<std::uint64_t>(f));

        const FittedPipeline fitted = fit_pipeline(x_train, pipe);
        const TrainedModel model =
            train_classifier(fitted.apply(x_train), y_train, ds.n_classes(), fold_clf);
        const std::vector<int> pred = predict_batch(model, fitted.apply(x_test));
        for (std::size_t i = 0; i < pred.size(); ++i) pooled.add(y_test[i], pred[i]);
    }

    CvResult res;
    res.confusion = pooled;
    res.metrics = compute_metrics(pooled);
    return res;
}

struct ElmProtocolResult {
    std::vector<double> train_accuracy; // one per try
    std::vector<double> test_accuracy;
    ConfusionMatrix pooled_test{0};

    double mean_train() const {
        double s = 0.0;
        for (double v : train_accuracy) s += v;
        return train_accuracy.empty() ? 0.0 : s / static_cast<double>(train_accuracy.size());
    }
    double mean_test() const {
        double s = 0.0;
        for (double v : test_accuracy) s += v;
        return test_accuracy.empty() ? 0.0 : s / static_cast<double>(test_accuracy.size());
    }
};

// The 80-20 stratified shuffle protocol: n_tries splits, an ELM trained per
// try, train and test accuracy recorded per try.
inline ElmProtocolResult elm_protocol(const FeatureDataset& ds, const FeatureSubsetSpec& subset,
                                      Activation activation, int n_tries, double train_fraction,
                                      std::uint64_t seed, int n_hidden = 200,
                                      const PipelineConfig& pipe = PipelineConfig{}) {
    if (n_tries < 1) throw ConfigError("elm_protocol: n_tries must be >= 1");
    const std::vector<int> cols = subset_indices(ds.layout, subset);
    Eigen::MatrixXd X(ds.X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) X.col(static_cast<Eigen::Index>(c)) = ds.X.col(cols[c]);

    ElmProtocolResult res;
    res.pooled_test = ConfusionMatrix(ds.n_classes());
    for (int t = 0; t < n_tries; ++t) {
        auto [train_rows, test_rows] =
            stratified_split(ds.y, train_fraction, derive_seed(seed, "elm-try", static_cast<std::uint64_t>(t)));
        Eigen::MatrixXd x_train = detail::take_rows(X, train_rows);
        Eigen::MatrixXd x_test = detail::take_rows(X, test_rows);
        const std::vector<int> y_train = detail::take_labels(ds.y, train_rows);
        const std::vector<int> y_test = detail::take_labels(ds.y, test_rows);

        const FittedPipeline fitted = fit_pipeline(x_train, pipe);
        ElmConfig cfg;
        cfg.n_hidden = n_hidden;
        cfg.activation = activation;
        cfg.seed = derive_seed(seed, "elm-weights-try", static_cast<std::uint64_t>(t));
        const ElmModel model = elm_train(fitted.apply(x_train), y_train, ds.n_classes(), cfg);

        auto accuracy_of = [&](const Eigen::MatrixXd& x, const std::vector<int>& y, bool pool) {
            const std::vector<int> pred = elm_predict_batch(model, fitted.apply(x));
            int hits = 0;
            for (std::size_t i = 0; i < pred.size(); ++i) {
                if (pred[i] == y[i]) ++hits;
                if (pool) res.pooled_test.add(y[i], pred[i]);
            }
            return static_cast<double>(hits) / static_cast<double>(pred.size());
        };
        res.train_accuracy.push_back(accuracy_of(x_train, y_train, false));
        res.test_accuracy.push_back(accuracy_of(x_test, y_test, true));
    }
    return res;
}

struct PcaSweepPoint {
    int components = 0; // 0 = no projection (full feature set)
    double accuracy = 0.0;
};

// One cross-validation run per requested dimensionality, PCA inserted into
// the per-fold pipeline. Points are returned sorted by decreasing k with the
// no-PCA baseline first.
inline std::vector<PcaSweepPoint> pca_accuracy_sweep(const FeatureDataset& ds,
                                                     const FeatureSubsetSpec& subset,
                                                     const ClassifierConfig& clf,
                                                     const PipelineConfig& base,
                                                     std::vector<int> k_values, int cv_k,
                                                     std::uint64_t seed) {
    std::sort(k_values.begin(), k_values.end(), std::greater<int>());
    k_values.erase(std::unique(k_values.begin(), k_values.end()), k_values.end());

    std::vector<PcaSweepPoint> out;
    {
        PipelineConfig cfg = base;
        cfg.pca_components.reset();
        out.push_back({0, cross_validate(ds, subset, clf, cfg, cv_k, seed).metrics.accuracy});
    }
    for (int k : k_values) {
        if (k < 1) throw ConfigError("pca_accuracy_sweep: k must be >= 1");
        PipelineConfig cfg = base;
        cfg.pca_components = k;
        out.push_back({k, cross_validate(ds, subset, clf, cfg, cv_k, seed).metrics.accuracy});
    }
    return out;
}

} // namespace emgaction
