#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "emgaction/elm.hpp"
#include "emgaction/knn.hpp"
#include "emgaction/pipeline.hpp"
#include "emgaction/svm.hpp"

namespace emgaction {

struct ClassifierConfig {
    enum class Kind { Knn, Svm, Elm };
    Kind kind = Kind::Knn;
    int knn_k = 1;
    SvmParams svm;
    ElmConfig elm;

    std::string display_name() const {
        switch (kind) {
            case Kind::Knn: return std::to_string(knn_k) + "-NN";
            case Kind::Svm: return "SVM";
            case Kind::Elm: return std::string("ELM:") + activation_name(elm.activation);
        }
        return "?";
    }

    // Accepts "1-nn", "knn:3", "svm", "elm:sig", ...
    static ClassifierConfig parse(const std::string& text) {
        ClassifierConfig c;
        std::string t;
        for (char ch : text)
            if (ch != ' ') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        if (t == "svm") {
            c.kind = Kind::Svm;
            return c;
        }
        if (t.rfind("elm", 0) == 0) {
            c.kind = Kind::Elm;
            if (t.size() > 4 && t[3] == ':') c.elm.activation = parse_activation(t.substr(4));
            return c;
        }
        if (t.rfind("knn:", 0) == 0) {
            c.kind = Kind::Knn;
            c.knn_k = std::stoi(t.substr(4));
            return c;
        }
        auto dash = t.find("-nn");
        if (dash != std::string::npos && dash > 0) {
            c.kind = Kind::Knn;
            c.knn_k = std::stoi(t.substr(0, dash));
            return c;
        }
        throw ConfigError("unknown classifier '" + text + "'");
    }
};

using TrainedModel = std::variant<KnnModel, SvmModel, ElmModel>;

inline TrainedModel train_classifier(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                     int n_classes, const ClassifierConfig& cfg) {
    switch (cfg.kind) {
        case ClassifierConfig::Kind::Knn:
            return knn_train(X, y, std::min<int>(cfg.knn_k, static_cast<int>(X.rows())), n_classes);
        case ClassifierConfig::Kind::Svm: return svm_train(X, y, n_classes, cfg.svm);
        case ClassifierConfig::Kind::Elm: return elm_train(X, y, n_classes, cfg.elm);
    }
    throw ConfigError("train_classifier: bad kind");
}

inline int predict(const TrainedModel& model, const Eigen::RowVectorXd& x) {
    return std::visit(
        [&](const auto& m) -> int {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, KnnModel>) return knn_predict(m, x);
            else if constexpr (std::is_same_v<T, SvmModel>) return svm_predict(m, x);
            else return elm_predict(m, x);
        },
        model);
}

inline std::vector<int> predict_batch(const TrainedModel& model, const Eigen::MatrixXd& X) {
    return std::visit(
        [&](const auto& m) -> std::vector<int> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, KnnModel>) return knn_predict_batch(m, X);
            else if constexpr (std::is_same_v<T, SvmModel>) return svm_predict_batch(m, X);
            else return elm_predict_batch(m, X);
        },
        model);
}

// ---------------------------------------------------------------------------
// JSON serialization: a kind tag plus the numeric arrays of each model
// ---------------------------------------------------------------------------

inline nlohmann::json model_to_json(const TrainedModel& model) {
    nlohmann::json j;
    if (const auto* knn = std::get_if<KnnModel>(&model)) {
        j["kind"] = "knn";
        j["k"] = knn->k;
        j["n_classes"] = knn->n_classes;
        j["points"] = detail::matrix_to_json(knn->points);
        j["labels"] = knn->labels;
    } else if (const auto* svm = std::get_if<SvmModel>(&model)) {
        j["kind"] = "svm";
        j["n_classes"] = svm->n_classes;
        j["dim"] = svm->dim;
        j["gamma"] = svm->gamma;
        j["multiclass"] = svm->multiclass == SvmMulticlass::OneVsOne ? "ovo" : "ovr";
        nlohmann::json machines = nlohmann::json::array();
        for (const BinarySvm& m : svm->machines)
            machines.push_back({{"class_pos", m.class_pos},
                                {"class_neg", m.class_neg},
                                {"b", m.b},
                                {"support_vectors", detail::matrix_to_json(m.support_vectors)},
                                {"alpha_y", detail::vector_to_json(m.alpha_y)}});
        j["machines"] = std::move(machines);
    } else if (const auto* elm = std::get_if<ElmModel>(&model)) {
        j["kind"] = "elm";
        j["n_classes"] = elm->n_classes;
        j["activation"] = activation_name(elm->activation);
        j["input_weights"] = detail::matrix_to_json(elm->input_weights);
        j["biases"] = detail::vector_to_json(elm->biases);
        j["beta"] = detail::matrix_to_json(elm->beta);
    }
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "knn") {
        KnnModel m;
        m.k = j.at("k").get<int>();
        m.n_classes = j.at("n_classes").get<int>();
        m.points = detail::matrix_from_json(j.at("points"));
        for (const auto& l : j.at("labels")) m.labels.push_back(l.get<int>());
        return m;
    }
    if (kind == "svm") {
        SvmModel m;
        m.n_classes = j.at("n_classes").get<int>();
        m.dim = j.at("dim").get<int>();
        m.gamma = j.at("gamma").get<double>();
        m.multiclass = j.at("multiclass").get<std::string>() == "ovr" ? SvmMulticlass::OneVsRest
                                                                      : SvmMulticlass::OneVsOne;
        for (const auto& mj : j.at("machines")) {
            BinarySvm b;
            b.class_pos = mj.at("class_pos").get<int>();
            b.class_neg = mj.at("class_neg").get<int>();
            b.b = mj.at("b").get<double>();
            b.support_vectors = detail::matrix_from_json(mj.at("support_vectors"));
            b.alpha_y = detail::vector_from_json(mj.at("alpha_y"));
            m.machines.push_back(std::move(b));
        }
        return m;
    }
    if (kind == "elm") {
        ElmModel m;
        m.n_classes = j.at("n_classes").get<int>();
        m.activation = parse_activation(j.at("activation").get<std::string>());
        m.input_weights = detail::matrix_from_json(j.at("input_weights"));
        m.biases = detail::vector_from_json(j.at("biases"));
        m.beta = detail::matrix_from_json(j.at("beta"));
        return m;
    }
    throw FormatError("model_from_json: unknown kind '" + kind + "'");
}

} // namespace emgaction
