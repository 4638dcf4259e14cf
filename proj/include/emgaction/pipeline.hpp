#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "emgaction/errors.hpp"

namespace emgaction {

struct ZScoreParams {
    Eigen::VectorXd mu;
    Eigen::VectorXd sigma;
    std::vector<bool> constant_mask; // sigma below 1e-12

    int dim() const { return static_cast<int>(mu.size()); }
};

// Column means and sample standard deviations (divide by n-1).
inline ZScoreParams zscore_fit(const Eigen::MatrixXd& X) {
    const Eigen::Index n = X.rows();
    if (n < 2) throw InsufficientDataError("zscore_fit: need at least 2 rows");
    ZScoreParams p;
    p.mu = X.colwise().mean();
    Eigen::MatrixXd centered = X.rowwise() - p.mu.transpose();
    p.sigma = (centered.array().square().colwise().sum() / static_cast<double>(n - 1)).sqrt();
    p.constant_mask.resize(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index c = 0; c < X.cols(); ++c)
        p.constant_mask[static_cast<std::size_t>(c)] = p.sigma(c) < 1e-12;
    return p;
}

// (x - mu) / sigma per cell; constant-masked columns output 0.
inline Eigen::MatrixXd zscore_apply(const Eigen::MatrixXd& X, const ZScoreParams& p) {
    if (X.cols() != p.mu.size())
        throw DimError("zscore_apply: column count " + std::to_string(X.cols()) +
                       " does not match fitted dimension " + std::to_string(p.mu.size()));
    Eigen::MatrixXd out(X.rows(), X.cols());
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        if (p.constant_mask[static_cast<std::size_t>(c)])
            out.col(c).setZero();
        else
            out.col(c) = (X.col(c).array() - p.mu(c)) / p.sigma(c);
    }
    return out;
}

struct SelectionMask {
    std::vector<int> kept; // strictly increasing column indices

    int size() const { return static_cast<int>(kept.size()); }
};

// Keeps columns whose sample variance exceeds 1e-12 and whose values are all
// finite. This is the only selection criterion derivable from the data alone.
inline SelectionMask drop_uninformative(const Eigen::MatrixXd& X) {
    if (X.rows() < 2) throw InsufficientDataError("drop_uninformative: need at least 2 rows");
    SelectionMask m;
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        bool finite = true;
        for (Eigen::Index r = 0; r < X.rows(); ++r)
            if (!std::isfinite(X(r, c))) {
                finite = false;
                break;
            }
        if (!finite) continue;
        const double mean = X.col(c).mean();
        const double var = (X.col(c).array() - mean).square().sum() / static_cast<double>(X.rows() - 1);
        if (var > 1e-12) m.kept.push_back(static_cast<int>(c));
    }
    if (m.kept.empty()) throw EmptySelectionError("drop_uninformative: every column dropped");
    return m;
}

inline Eigen::MatrixXd apply_mask(const Eigen::MatrixXd& X, const SelectionMask& m) {
    for (int c : m.kept)
        if (c < 0 || c >= X.cols()) throw DimError("apply_mask: index out of range");
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(m.kept.size()));
    for (std::size_t i = 0; i < m.kept.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = X.col(m.kept[i]);
    return out;
}

struct PcaModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;         // k x d, rows orthonormal
    Eigen::VectorXd explained_variance; // k entries, non-increasing

    int input_dim() const { return static_cast<int>(mean.size()); }
    int output_dim() const { return static_cast<int>(components.rows()); }
};

// Top-k eigenvectors of the sample covariance. Deterministic sign convention:
// each component's largest-magnitude entry is made positive.
inline PcaModel pca_fit(const Eigen::MatrixXd& X, int k) {
    const Eigen::Index n = X.rows(), d = X.cols();
    if (n < 2) throw InsufficientDataError("pca_fit: need at least 2 rows");
    if (k < 1 || k > std::min<Eigen::Index>(n - 1, d))
        throw DimError("pca_fit: k = " + std::to_string(k) + " out of range for " +
                       std::to_string(n) + "x" + std::to_string(d) + " data");

    PcaModel m;
    m.mean = X.colwise().mean();
    Eigen::MatrixXd centered = X.rowwise() - m.mean.transpose();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw ConvergenceError("pca_fit: eigensolver failed");

    // Eigen returns ascending eigenvalues; take the top k in descending order.
    m.components.resize(k, d);
    m.explained_variance.resize(k);
    for (int i = 0; i < k; ++i) {
        const Eigen::Index src = d - 1 - i;
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        Eigen::Index max_idx = 0;
        v.cwiseAbs().maxCoeff(&max_idx);
        if (v(max_idx) < 0.0) v = -v;
        m.components.row(i) = v.transpose();
        m.explained_variance(i) = std::max(0.0, solver.eigenvalues()(src));
    }
    return m;
}

inline Eigen::MatrixXd pca_project(const Eigen::MatrixXd& X, const PcaModel& m) {
    if (X.cols() != m.mean.size())
        throw DimError("pca_project: column count does not match model dimension");
    return (X.rowwise() - m.mean.transpose()) * m.components.transpose();
}

// ---------------------------------------------------------------------------
// Composed transform, fit on training rows only
// ---------------------------------------------------------------------------

struct PipelineConfig {
    bool drop_uninformative = true;
    bool zscore = true;
    std::optional<int> pca_components; // unset = no projection

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Selection, then z-score, then optional PCA on the standardized features.
struct FittedPipeline {
    std::optional<SelectionMask> mask;
    std::optional<ZScoreParams> zscore;
    std::optional<PcaModel> pca;

    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const {
        Eigen::MatrixXd out = X;
        if (mask) out = apply_mask(out, *mask);
        if (zscore) out = zscore_apply(out, *zscore);
        if (pca) out = pca_project(out, *pca);
        return out;
    }
};

inline FittedPipeline fit_pipeline(const Eigen::MatrixXd& X_train, const PipelineConfig& cfg) {
    FittedPipeline p;
    Eigen::MatrixXd cur = X_train;
    if (cfg.drop_uninformative) {
        p.mask = drop_uninformative(cur);
        cur = apply_mask(cur, *p.mask);
    }
    if (cfg.zscore) {
        p.zscore = zscore_fit(cur);
        cur = zscore_apply(cur, *p.zscore);
    }
    if (cfg.pca_components) {
        const int k = std::min<int>(*cfg.pca_components,
                                    static_cast<int>(std::min<Eigen::Index>(cur.rows() - 1, cur.cols())));
        p.pca = pca_fit(cur, k);
    }
    return p;
}

// ---------------------------------------------------------------------------
// JSON serialization (decouples the train and evaluate CLI stages)
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index c = r == 0 ? 0 : static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
    return m;
}

} // namespace detail

inline nlohmann::json pipeline_to_json(const FittedPipeline& p) {
    nlohmann::json j;
    if (p.mask) j["selection"] = {{"kept", p.mask->kept}};
    if (p.zscore) {
        std::vector<int> mask_bits;
        for (bool b : p.zscore->constant_mask) mask_bits.push_back(b ? 1 : 0);
        j["zscore"] = {{"mu", detail::vector_to_json(p.zscore->mu)},
                       {"sigma", detail::vector_to_json(p.zscore->sigma)},
                       {"constant_mask", mask_bits}};
    }
    if (p.pca)
        j["pca"] = {{"mean", detail::vector_to_json(p.pca->mean)},
                    {"components", detail::matrix_to_json(p.pca->components)},
                    {"explained_variance", detail::vector_to_json(p.pca->explained_variance)}};
    return j;
}

inline FittedPipeline pipeline_from_json(const nlohmann::json& j) {
    FittedPipeline p;
    if (j.contains("selection")) {
        SelectionMask m;
        for (const auto& v : j.at("selection").at("kept")) m.kept.push_back(v.get<int>());
        p.mask = std::move(m);
    }
    if (j.contains("zscore")) {
        ZScoreParams z;
        z.mu = detail::vector_from_json(j.at("zscore").at("mu"));
        z.sigma = detail::vector_from_json(j.at("zscore").at("sigma"));
        for (const auto& v : j.at("zscore").at("constant_mask")) z.constant_mask.push_back(v.get<int>() != 0);
        p.zscore = std::move(z);
    }
    if (j.contains("pca")) {
        PcaModel m;
        m.mean = detail::vector_from_json(j.at("pca").at("mean"));
        m.components = detail::matrix_from_json(j.at("pca").at("components"));
        m.explained_variance = detail::vector_from_json(j.at("pca").at("explained_variance"));
        p.pca = std::move(m);
    }
    return p;
}

} // namespace emgaction
