#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emgaction/errors.hpp"
#include "emgaction/rng.hpp"

namespace emgaction {

enum class SvmMulticlass { OneVsOne, OneVsRest };

struct SvmParams {
    double C = 1.0;
    double gamma = 0.0;       // 0 = use 1/dimension at training time
    double tol = 1e-3;        // KKT tolerance
    int max_epochs = 1000;    // full SMO sweeps before giving up
    std::uint64_t seed = 0;   // drives the SMO second-choice heuristic
    SvmMulticlass multiclass = SvmMulticlass::OneVsOne;
};

// One trained binary machine: f(x) = sum alpha_y[s] K(sv_s, x) + b, positive
// means class_pos.
struct BinarySvm {
    Eigen::MatrixXd support_vectors;
    Eigen::VectorXd alpha_y;
    double b = 0.0;
    int class_pos = 0;
    int class_neg = 0;
};

struct SvmModel {
    std::vector<BinarySvm> machines;
    int n_classes = 0;
    int dim = 0;
    double gamma = 0.0;
    SvmMulticlass multiclass = SvmMulticlass::OneVsOne;
};

namespace detail {

inline double rbf_kernel(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, double gamma) {
    return std::exp(-gamma * (a - b).squaredNorm());
}

// Platt's sequential minimal optimization on the dual of a soft-margin SVM.
// Labels are +1/-1; the kernel matrix is precomputed (training sets here are
// a few hundred rows).
class SmoSolver {
public:
    SmoSolver(const Eigen::MatrixXd& X, const std::vector<double>& y, double C, double gamma,
              double tol, int max_epochs, std::uint64_t seed)
        : x_(X), y_(y), c_(C), tol_(tol), max_epochs_(max_epochs), rng_(seed) {
        const Eigen::Index n = X.rows();
        k_.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j)
                k_(i, j) = k_(j, i) = rbf_kernel(X.row(i), X.row(j), gamma);
        alpha_.assign(static_cast<std::size_t>(n), 0.0);
        errors_.resize(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) errors_[static_cast<std::size_t>(i)] = -y_[static_cast<std::size_t>(i)];
    }

    void solve() {
        const int n = static_cast<int>(x_.rows());
        int num_changed = 0;
        bool examine_all = true;
        int epochs = 0;
        while (num_changed > 0 || examine_all) {
            if (++epochs > max_epochs_)
                throw ConvergenceError("svm: SMO did not converge after " + std::to_string(max_epochs_) +
                                       " sweeps (" + std::to_string(non_bound_count()) + " of " +
                                       std::to_string(n) + " alphas non-bound)");
            num_changed = 0;
            for (int i = 0; i < n; ++i) {
                if (!examine_all && !is_non_bound(i)) continue;
                num_changed += examine_example(i);
            }
            if (examine_all)
                examine_all = false;
            else if (num_changed == 0)
                examine_all = true;
        }
    }

    const std::vector<double>& alphas() const { return alpha_; }
    double bias() const { return b_; }

private:
    bool is_non_bound(int i) const {
        return alpha_[static_cast<std::size_t>(i)] > 0.0 && alpha_[static_cast<std::size_t>(i)] < c_;
    }

    int non_bound_count() const {
        int c = 0;
        for (std::size_t i = 0; i < alpha_.size(); ++i)
            if (is_non_bound(static_cast<int>(i))) ++c;
        return c;
    }

    int examine_example(int i2) {
        const double y2 = y_[static_cast<std::size_t>(i2)];
        const double alph2 = alpha_[static_cast<std::size_t>(i2)];
        const double e2 = errors_[static_cast<std::size_t>(i2)];
        const double r2 = e2 * y2;
        if (!((r2 < -tol_ && alph2 < c_) || (r2 > tol_ && alph2 > 0.0))) return 0;

        const int n = static_cast<int>(x_.rows());
        // Heuristic 1: maximize |E1 - E2| over non-bound examples.
        int best = -1;
        double best_gap = -1.0;
        for (int i = 0; i < n; ++i) {
            if (!is_non_bound(i)) continue;
            const double gap = std::abs(errors_[static_cast<std::size_t>(i)] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best >= 0 && take_step(best, i2)) return 1;

        // Heuristic 2: non-bound examples from a seeded random start.
        const int start1 = static_cast<int>(rng_.below(static_cast<std::uint64_t>(n)));
        for (int d = 0; d < n; ++d) {
            const int i = (start1 + d) % n;
            if (is_non_bound(i) && take_step(i, i2)) return 1;
        }
        // Heuristic 3: the whole training set from a seeded random start.
        const int start2 = static_cast<int>(rng_.below(static_cast<std::uint64_t>(n)));
        for (int d = 0; d < n; ++d) {
            const int i = (start2 + d) % n;
            if (take_step(i, i2)) return 1;
        }
        return 0;
    }

    bool take_step(int i1, int i2) {
        if (i1 == i2) return false;
        const double alph1 = alpha_[static_cast<std::size_t>(i1)];
        const double alph2 = alpha_[static_cast<std::size_t>(i2)];
        const double y1 = y_[static_cast<std::size_t>(i1)], y2 = y_[static_cast<std::size_t>(i2)];
        const double e1 = errors_[static_cast<std::size_t>(i1)], e2 = errors_[static_cast<std::size_t>(i2)];
        const double s = y1 * y2;

        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, alph2 - alph1);
            hi = std::min(c_, c_ + alph2 - alph1);
        } else {
            lo = std::max(0.0, alph1 + alph2 - c_);
            hi = std::min(c_, alph1 + alph2);
        }
        if (lo >= hi) return false;

        // For RBF kernels eta > 0 unless the two points coincide; the floor
        // turns that degenerate case into a move to the end pointed at by the
        // gradient, which is where the optimum of the flat objective lies.
        const double k11 = k_(i1, i1), k12 = k_(i1, i2), k22 = k_(i2, i2);
        const double eta = std::max(k11 + k22 - 2.0 * k12, 1e-12);
        double a2 = std::clamp(alph2 + y2 * (e1 - e2) / eta, lo, hi);
        if (std::abs(a2 - alph2) < 1e-12 * (a2 + alph2 + 1e-12)) return false;

        double a1 = alph1 + s * (alph2 - a2);
        if (a1 < 0.0) {
            a2 += s * a1;
            a1 = 0.0;
        } else if (a1 > c_) {
            a2 += s * (a1 - c_);
            a1 = c_;
        }

        const double b_old = b_;
        const double b1 = b_ - e1 - y1 * (a1 - alph1) * k11 - y2 * (a2 - alph2) * k12;
        const double b2 = b_ - e2 - y1 * (a1 - alph1) * k12 - y2 * (a2 - alph2) * k22;
        if (a1 > 0.0 && a1 < c_)
            b_ = b1;
        else if (a2 > 0.0 && a2 < c_)
            b_ = b2;
        else
            b_ = 0.5 * (b1 + b2);

        const double d1 = y1 * (a1 - alph1), d2 = y2 * (a2 - alph2), db = b_ - b_old;
        const int n = static_cast<int>(x_.rows());
        for (int i = 0; i < n; ++i)
            errors_[static_cast<std::size_t>(i)] += d1 * k_(i1, i) + d2 * k_(i2, i) + db;

        alpha_[static_cast<std::size_t>(i1)] = a1;
        alpha_[static_cast<std::size_t>(i2)] = a2;
        return true;
    }

    const Eigen::MatrixXd& x_;
    const std::vector<double>& y_;
    double c_;
    double tol_;
    int max_epochs_;
    Rng rng_;
    Eigen::MatrixXd k_;
    std::vector<double> alpha_;
    std::vector<double> errors_;
    double b_ = 0.0;
};

inline BinarySvm train_binary(const Eigen::MatrixXd& X, const std::vector<double>& y, double gamma,
                              const SvmParams& params, int class_pos, int class_neg,
                              std::uint64_t seed) {
    SmoSolver solver(X, y, params.C, gamma, params.tol, params.max_epochs, seed);
    solver.solve();

    BinarySvm m;
    m.class_pos = class_pos;
    m.class_neg = class_neg;
    m.b = solver.bias();
    std::vector<int> sv;
    for (std::size_t i = 0; i < solver.alphas().size(); ++i)
        if (solver.alphas()[i] > 0.0) sv.push_back(static_cast<int>(i));
    m.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
    m.alpha_y.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t i = 0; i < sv.size(); ++i) {
        m.support_vectors.row(static_cast<Eigen::Index>(i)) = X.row(sv[i]);
        m.alpha_y(static_cast<Eigen::Index>(i)) =
            solver.alphas()[static_cast<std::size_t>(sv[i])] * y[static_cast<std::size_t>(sv[i])];
    }
    return m;
}

} // namespace detail

inline double svm_decision(const SvmModel& model, const BinarySvm& m, const Eigen::RowVectorXd& x) {
    double f = m.b;
    for (Eigen::Index s = 0; s < m.support_vectors.rows(); ++s)
        f += m.alpha_y(s) * detail::rbf_kernel(m.support_vectors.row(s), x, model.gamma);
    return f;
}

inline SvmModel svm_train(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_classes,
                          const SvmParams& params) {
    if (static_cast<std::size_t>(X.rows()) != y.size()) throw DimError("svm_train: rows and labels disagree");
    std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
    for (int c : y) {
        if (c < 0 || c >= n_classes) throw ConfigError("svm_train: label out of range");
        ++counts[static_cast<std::size_t>(c)];
    }
    int present = 0;
    for (int c : counts) present += c > 0 ? 1 : 0;
    if (present < 2) throw DegenerateLabelsError("svm_train: need at least 2 classes present");

    SvmModel model;
    model.n_classes = n_classes;
    model.dim = static_cast<int>(X.cols());
    model.gamma = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(X.cols());
    model.multiclass = params.multiclass;

    if (params.multiclass == SvmMulticlass::OneVsOne) {
        for (int ci = 0; ci < n_classes; ++ci) {
            for (int cj = ci + 1; cj < n_classes; ++cj) {
                if (counts[static_cast<std::size_t>(ci)] == 0 || counts[static_cast<std::size_t>(cj)] == 0) continue;
                std::vector<int> rows;
                for (std::size_t i = 0; i < y.size(); ++i)
                    if (y[i] == ci || y[i] == cj) rows.push_back(static_cast<int>(i));
                Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), X.cols());
                std::vector<double> lab(rows.size());
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    sub.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
                    lab[i] = y[static_cast<std::size_t>(rows[i])] == ci ? 1.0 : -1.0;
                }
                model.machines.push_back(detail::train_binary(
                    sub, lab, model.gamma, params, ci, cj,
                    derive_seed(params.seed, "svm-pair", static_cast<std::uint64_t>(ci) * 97 + static_cast<std::uint64_t>(cj))));
            }
        }
    } else {
        for (int c = 0; c < n_classes; ++c) {
            if (counts[static_cast<std::size_t>(c)] == 0) continue;
            std::vector<double> lab(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) lab[i] = y[i] == c ? 1.0 : -1.0;
            model.machines.push_back(detail::train_binary(X, lab, model.gamma, params, c, -1,
                                                          derive_seed(params.seed, "svm-rest",
                                                                      static_cast<std::uint64_t>(c))));
        }
    }
    return model;
}

// One-vs-one voting: ties fall to the larger summed decision magnitude, then
// the lowest class index. One-vs-rest takes the argmax decision value.
inline int svm_predict(const SvmModel& model, const Eigen::RowVectorXd& x) {
    if (x.size() != model.dim) throw DimError("svm_predict: dimension mismatch");
    if (model.machines.empty()) throw EmptyModelError("svm_predict: no trained machines");

    if (model.multiclass == SvmMulticlass::OneVsRest) {
        int best = -1;
        double best_f = 0.0;
        for (const BinarySvm& m : model.machines) {
            const double f = svm_decision(model, m, x);
            if (best < 0 || f > best_f || (f == best_f && m.class_pos < best)) {
                best = m.class_pos;
                best_f = f;
            }
        }
        return best;
    }

    std::vector<int> votes(static_cast<std::size_t>(model.n_classes), 0);
    std::vector<double> magnitude(static_cast<std::size_t>(model.n_classes), 0.0);
    for (const BinarySvm& m : model.machines) {
        const double f = svm_decision(model, m, x);
        const int winner = f >= 0.0 ? m.class_pos : m.class_neg;
        ++votes[static_cast<std::size_t>(winner)];
        magnitude[static_cast<std::size_t>(winner)] += std::abs(f);
    }
    int best = 0;
    for (int c = 1; c < model.n_classes; ++c) {
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)] ||
            (votes[static_cast<std::size_t>(c)] == votes[static_cast<std::size_t>(best)] &&
             magnitude[static_cast<std::size_t>(c)] > magnitude[static_cast<std::size_t>(best)]))
            best = c;
    }
    return best;
}

inline std::vector<int> svm_predict_batch(const SvmModel& model, const Eigen::MatrixXd& X) {
    std::vector<int> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[static_cast<std::size_t>(i)] = svm_predict(model, X.row(i));
    return out;
}

} // namespace emgaction
