#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emgaction/config.hpp"
#include "emgaction/dataset.hpp"
#include "emgaction/eval.hpp"
#include "emgaction/model.hpp"
#include "emgaction/synth.hpp"

namespace emgaction {

namespace detail {

inline std::filesystem::path ensure_dir(const std::filesystem::path& p) {
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw IoError("cannot create directory '" + p.string() + "': " + ec.message());
    return p;
}

inline std::string slug(const std::string& name) {
    std::string out;
    bool dash = false;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            dash = false;
        } else if (!out.empty() && !dash) {
            out.push_back('-');
            dash = true;
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& cm,
                                const std::vector<std::string>& class_names) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "true\\predicted";
    for (const auto& n : class_names) out << "," << n;
    out << "\n";
    for (int r = 0; r < cm.n_classes(); ++r) {
        out << class_names[static_cast<std::size_t>(r)];
        for (int c = 0; c < cm.n_classes(); ++c)
            out << "," << cm.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        out << "\n";
    }
}

inline nlohmann::json confusion_to_json(const ConfusionMatrix& cm) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : cm.counts) rows.push_back(row);
    return rows;
}

inline nlohmann::json metrics_to_json(const MetricsReport& m) {
    return nlohmann::json{{"accuracy", m.accuracy},
                          {"balanced_accuracy", m.balanced_accuracy},
                          {"cohens_kappa", m.cohens_kappa},
                          {"sensitivity", m.sensitivity},
                          {"specificity", m.specificity},
                          {"precision", m.precision},
                          {"f_measure", m.f_measure},
                          {"misclassification_rate", m.misclassification_rate},
                          {"flags", m.flags}};
}

} // namespace detail

inline std::filesystem::path default_manifest_path(const RunConfig& cfg) {
    return std::filesystem::path(cfg.out_dir) / "data" / "manifest.json";
}

inline std::filesystem::path default_features_path(const RunConfig& cfg) {
    return std::filesystem::path(cfg.out_dir) / "features" / "features.csv";
}

// ---------------------------------------------------------------------------
// synth: generate the seeded synthetic dataset and its manifest
// ---------------------------------------------------------------------------

inline void cmd_synth(const RunConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    const SynthSpec spec = cfg.synth_spec();
    const std::uint64_t synth_seed = derive_seed(cfg.seed, "synth");
    const std::vector<Recording> recordings = generate_synthetic_dataset(spec, synth_seed);

    const std::filesystem::path dir = detail::ensure_dir(std::filesystem::path(cfg.out_dir) / "data");
    DatasetManifest manifest;
    for (const auto& cls : spec.classes) manifest.labels.push_back(cls.name);
    for (const Recording& r : recordings) {
        const std::string file = r.id + ".csv";
        write_recording(dir / file, r);
        manifest.entries.push_back({file, r.action.name, "synthetic"});
    }
    write_manifest(dir / "manifest.json", manifest);

    log << "synth: seed " << cfg.seed << " -> " << recordings.size() << " recordings under "
        << dir.string() << "\n";
    for (const auto& cls : spec.classes) {
        int count = 0;
        for (const Recording& r : recordings)
            if (r.action.name == cls.name) ++count;
        log << "  " << cls.name << ": " << count << " recordings x " << spec.samples_per_recording
            << " samples\n";
    }
}

// ---------------------------------------------------------------------------
// extract: manifest -> feature matrix CSV + sidecar layout JSON
// ---------------------------------------------------------------------------

inline void cmd_extract(const RunConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    const std::filesystem::path manifest_path =
        cfg.dataset == "manifest" ? std::filesystem::path(cfg.manifest_path) : default_manifest_path(cfg);
    if (!std::filesystem::exists(manifest_path))
        throw IoError("manifest '" + manifest_path.string() + "' not found (run synth first?)");

    const DatasetManifest manifest = load_manifest(manifest_path);
    const std::vector<Recording> recordings =
        load_dataset(manifest_path, cfg.channels, cfg.window_length);

    std::vector<ExtractWarning> warnings;
    const FeatureDataset ds = extract_dataset(recordings, manifest.labels, cfg.windowing(),
                                              cfg.feature_config(), cfg.threads, &warnings);

    const std::filesystem::path dir = detail::ensure_dir(std::filesystem::path(cfg.out_dir) / "features");
    write_feature_csv(dir / "features.csv", ds);

    nlohmann::json side;
    side["layout"] = layout_to_json(ds.layout);
    side["labels"] = ds.class_names;
    side["feature_config"] = {{"burg_order", cfg.burg_order},
                              {"n_bands", cfg.n_bands},
                              {"n_freq", cfg.n_freq},
                              {"td_threshold_scale", cfg.td_threshold_scale},
                              {"hosa_group_a", cfg.hosa_group_a},
                              {"hosa_group_b", cfg.hosa_group_b}};
    side["windowing"] = {{"window_length", cfg.window_length}, {"overlap", cfg.overlap}};
    side["seed"] = cfg.seed;
    nlohmann::json warn = nlohmann::json::array();
    for (const auto& w : warnings)
        warn.push_back({{"recording_id", w.recording_id},
                        {"window_index", w.window_index},
                        {"where", w.where},
                        {"message", w.message}});
    side["warnings"] = std::move(warn);
    std::ofstream side_out(dir / "layout.json");
    side_out << side.dump(2) << "\n";

    log << "extract: " << ds.rows() << " segments x " << ds.cols() << " features ("
        << warnings.size() << " warnings) -> " << (dir / "features.csv").string() << "\n";
}

inline FeatureDataset load_features(const RunConfig& cfg) {
    const std::filesystem::path csv =
        cfg.features_csv.empty() ? default_features_path(cfg) : std::filesystem::path(cfg.features_csv);
    const std::filesystem::path sidecar = csv.parent_path() / "layout.json";
    if (!std::filesystem::exists(csv))
        throw IoError("features '" + csv.string() + "' not found (run extract first?)");
    return load_feature_csv(csv, sidecar);
}

// ---------------------------------------------------------------------------
// train: fit pipeline + classifier per (classifier x subset) configuration
// ---------------------------------------------------------------------------

inline void cmd_train(const RunConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    const FeatureDataset ds = load_features(cfg);
    const std::filesystem::path dir = detail::ensure_dir(std::filesystem::path(cfg.out_dir) / "models");

    int cell = 0;
    for (const ClassifierConfig& base_clf : cfg.classifier_configs()) {
        for (const std::string& subset_name : cfg.subsets) {
            const FeatureSubsetSpec subset = FeatureSubsetSpec::parse(subset_name);
            const std::vector<int> cols = subset_indices(ds.layout, subset);
            Eigen::MatrixXd X(ds.X.rows(), static_cast<Eigen::Index>(cols.size()));
            for (std::size_t c = 0; c < cols.size(); ++c)
                X.col(static_cast<Eigen::Index>(c)) = ds.X.col(cols[c]);

            ClassifierConfig clf = base_clf;
            clf.svm.seed = derive_seed(cfg.seed, "train-svm", static_cast<std::uint64_t>(cell));
            clf.elm.seed = derive_seed(cfg.seed, "train-elm", static_cast<std::uint64_t>(cell));

            const FittedPipeline pipeline = fit_pipeline(X, cfg.pipeline_config());
            const TrainedModel model =
                train_classifier(pipeline.apply(X), ds.y, ds.n_classes(), clf);

            const std::string tag =
                detail::slug(base_clf.display_name()) + "_" + detail::slug(subset_name);
            nlohmann::json pj = pipeline_to_json(pipeline);
            pj["subset"] = subset_name;
            pj["columns"] = cols;
            std::ofstream(dir / ("pipeline_" + tag + ".json")) << pj.dump(2) << "\n";
            nlohmann::json mj = model_to_json(model);
            mj["subset"] = subset_name;
            mj["classifier"] = base_clf.display_name();
            std::ofstream(dir / ("model_" + tag + ".json")) << mj.dump(2) << "\n";
            log << "train: wrote model_" << tag << ".json\n";
            ++cell;
        }
    }
}

// ---------------------------------------------------------------------------
// evaluate: classifier x subset grid -> report CSV, confusion matrices, JSON
// ---------------------------------------------------------------------------

struct EvaluationRow {
    std::string classifier;
    std::string subset;
    double accuracy = 0.0;        // mean over repeats / tries
    double train_accuracy = -1.0; // ELM only, -1 elsewhere
    MetricsReport metrics;        // pooled confusion metrics
    ConfusionMatrix confusion{0};
};

inline std::vector<EvaluationRow> run_evaluation_grid(const RunConfig& cfg, const FeatureDataset& ds) {
    std::vector<EvaluationRow> rows;
    int cell = 0;
    for (const ClassifierConfig& clf : cfg.classifier_configs()) {
        for (const std::string& subset_name : cfg.subsets) {
            const FeatureSubsetSpec subset = FeatureSubsetSpec::parse(subset_name);
            EvaluationRow row;
            row.classifier = clf.display_name();
            row.subset = subset_name;

            if (clf.kind == ClassifierConfig::Kind::Elm) {
                const ElmProtocolResult res = elm_protocol(
                    ds, subset, clf.elm.activation, cfg.elm_tries, cfg.elm_split,
                    derive_seed(cfg.seed, "elm-protocol", static_cast<std::uint64_t>(cell)),
                    cfg.elm_hidden, cfg.pipeline_config());
                row.accuracy = res.mean_test();
                row.train_accuracy = res.mean_train();
                row.confusion = res.pooled_test;
                row.metrics = compute_metrics(res.pooled_test);
            } else {
                ConfusionMatrix pooled(ds.n_classes());
                double acc_sum = 0.0;
                for (int r = 0; r < cfg.cv_repeats; ++r) {
                    const CvResult res = cross_validate(
                        ds, subset, clf, cfg.pipeline_config(), cfg.cv_folds,
                        derive_seed(cfg.seed, "cv-repeat",
                                    static_cast<std::uint64_t>(cell) * 1000 + static_cast<std::uint64_t>(r)));
                    pooled.merge(res.confusion);
                    acc_sum += res.metrics.accuracy;
                }
                row.accuracy = acc_sum / cfg.cv_repeats;
                row.confusion = pooled;
                row.metrics = compute_metrics(pooled);
            }
            rows.push_back(std::move(row));
            ++cell;
        }
    }
    return rows;
}

inline void cmd_evaluate(const RunConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    const FeatureDataset ds = load_features(cfg);
    const std::filesystem::path dir = detail::ensure_dir(std::filesystem::path(cfg.out_dir) / "reports");

    const std::vector<EvaluationRow> rows = run_evaluation_grid(cfg, ds);

    std::ofstream csv(dir / "evaluation.csv");
    if (!csv) throw IoError("cannot write evaluation.csv");
    csv << "classifier,subset,accuracy,balanced_accuracy,cohens_kappa,train_accuracy";
    for (const std::string& metric :
         {std::string("sensitivity"), std::string("specificity"), std::string("precision"),
          std::string("f_measure"), std::string("misclassification_rate")})
        for (const std::string& cls : ds.class_names) csv << "," << metric << "_" << cls;
    csv << "\n";
    for (const EvaluationRow& r : rows) {
        csv << r.classifier << "," << r.subset << "," << detail::fixed6(r.accuracy) << ","
            << detail::fixed6(r.metrics.balanced_accuracy) << ","
            << detail::fixed6(r.metrics.cohens_kappa) << ","
            << (r.train_accuracy >= 0.0 ? detail::fixed6(r.train_accuracy) : std::string());
        for (const auto* v : {&r.metrics.sensitivity, &r.metrics.specificity, &r.metrics.precision,
                              &r.metrics.f_measure, &r.metrics.misclassification_rate})
            for (double x : *v) csv << "," << detail::fixed6(x);
        csv << "\n";
        detail::write_confusion_csv(dir / ("confusion_" + detail::slug(r.classifier) + "_" +
                                           detail::slug(r.subset) + ".csv"),
                                    r.confusion, ds.class_names);
    }

    nlohmann::json summary;
    summary["seed"] = cfg.seed;
    summary["labels"] = ds.class_names;
    summary["rows"] = nlohmann::json::array();
    for (const EvaluationRow& r : rows) {
        nlohmann::json jr;
        jr["classifier"] = r.classifier;
        jr["subset"] = r.subset;
        jr["accuracy"] = r.accuracy;
        if (r.train_accuracy >= 0.0) jr["train_accuracy"] = r.train_accuracy;
        jr["metrics"] = detail::metrics_to_json(r.metrics);
        jr["confusion"] = detail::confusion_to_json(r.confusion);
        summary["rows"].push_back(std::move(jr));
    }
    std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";

    for (const EvaluationRow& r : rows)
        log << "evaluate: " << r.classifier << " / " << r.subset << ": accuracy "
            << detail::fixed6(r.accuracy) << ", kappa " << detail::fixed6(r.metrics.cohens_kappa)
            << "\n";
}

// ---------------------------------------------------------------------------
// sweep-pca: accuracy against dimensionality, with the <=5-point-drop pick
// ---------------------------------------------------------------------------

inline void cmd_sweep_pca(const RunConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    const FeatureDataset ds = load_features(cfg);
    const std::filesystem::path dir = detail::ensure_dir(std::filesystem::path(cfg.out_dir) / "reports");

    const FeatureSubsetSpec subset = FeatureSubsetSpec::parse(cfg.subsets.front());
    const ClassifierConfig clf = cfg.classifier_configs().front();
    const int full_dim = static_cast<int>(subset_indices(ds.layout, subset).size());

    std::vector<int> ks;
    for (const std::string& k : cfg.pca_sweep_ks) {
        if (k == "full")
            ks.push_back(full_dim);
        else
            ks.push_back(static_cast<int>(detail::parse_int_value("pca_sweep_ks", k)));
    }

    const std::vector<PcaSweepPoint> points =
        pca_accuracy_sweep(ds, subset, clf, PipelineConfig{}, ks, cfg.cv_folds,
                           derive_seed(cfg.seed, "pca-sweep"));
    const double baseline = points.front().accuracy; // components == 0 entry

    std::ofstream csv(dir / "pca_sweep.csv");
    if (!csv) throw IoError("cannot write pca_sweep.csv");
    csv << "components,accuracy,drop_vs_no_pca\n";
    int best_k = -1;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double drop = baseline - points[i].accuracy;
        csv << points[i].components << "," << detail::fixed6(points[i].accuracy) << ","
            << detail::fixed6(drop) << "\n";
        if (drop <= 0.05) best_k = points[i].components; // points are sorted by decreasing k
    }

    nlohmann::json j;
    j["baseline_accuracy_no_pca"] = baseline;
    j["classifier"] = clf.display_name();
    j["subset"] = subset.name;
    j["smallest_k_within_5_points"] = best_k;
    std::ofstream(dir / "pca_sweep.json") << j.dump(2) << "\n";

    log << "sweep-pca: baseline (no PCA) accuracy " << detail::fixed6(baseline) << "\n";
    if (best_k > 0)
        log << "sweep-pca: smallest swept k within 5 points of baseline: " << best_k << "\n";
    else
        log << "sweep-pca: no swept k stayed within 5 points of baseline\n";
}

// ---------------------------------------------------------------------------
// report: render the evaluation summary as text
// ---------------------------------------------------------------------------

inline void cmd_report(const RunConfig& cfg, std::ostream& log = std::cout) {
    const std::filesystem::path summary_path =
        std::filesystem::path(cfg.out_dir) / "reports" / "summary.json";
    if (!std::filesystem::exists(summary_path))
        throw IoError("summary '" + summary_path.string() + "' not found (run evaluate first?)");
    std::ifstream in(summary_path);
    nlohmann::json summary;
    in >> summary;

    log << "Evaluation summary (seed " << summary.value("seed", 0) << ")\n";
    std::vector<std::string> labels;
    for (const auto& l : summary.at("labels")) labels.push_back(l.get<std::string>());
    for (const auto& row : summary.at("rows")) {
        log << "\n" << row.at("classifier").get<std::string>() << " on '"
            << row.at("subset").get<std::string>() << "'\n";
        log << "  accuracy " << detail::fixed6(row.at("accuracy").get<double>());
        if (row.contains("train_accuracy"))
            log << " (train " << detail::fixed6(row.at("train_accuracy").get<double>()) << ")";
        const auto& m = row.at("metrics");
        log << ", balanced " << detail::fixed6(m.at("balanced_accuracy").get<double>())
            << ", kappa " << detail::fixed6(m.at("cohens_kappa").get<double>()) << "\n";
        for (std::size_t c = 0; c < labels.size(); ++c)
            log << "  " << labels[c] << ": sens " << detail::fixed6(m.at("sensitivity")[c].get<double>())
                << ", spec " << detail::fixed6(m.at("specificity")[c].get<double>()) << ", prec "
                << detail::fixed6(m.at("precision")[c].get<double>()) << "\n";
    }
}

} // namespace emgaction
