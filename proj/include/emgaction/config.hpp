#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "emgaction/errors.hpp"
#include "emgaction/features.hpp"
#include "emgaction/model.hpp"
#include "emgaction/pipeline.hpp"
#include "emgaction/preprocess.hpp"
#include "emgaction/synth.hpp"

namespace emgaction {

// One plain-text key = value file drives every command; flags override keys.
// Unknown keys are rejected.
struct RunConfig {
    std::uint64_t seed = 7;
    int threads = 0; // 0 = all available cores
    std::string out_dir = "out";

    std::string dataset = "synth"; // synth | manifest
    std::string manifest_path;
    int channels = 8;

    int synth_samples = 10000;
    int synth_recordings_per_class = 4;
    double synth_noise_scale = 1.0;

    int window_length = 1000;
    double overlap = 0.25;

    int burg_order = 4;
    int n_bands = 10;
    int n_freq = 256;
    double td_threshold_scale = 0.05;
    std::vector<int> hosa_group_a = {1, 2, 3, 4}; // 1-based channel numbers
    std::vector<int> hosa_group_b = {5, 6, 7, 8};

    std::vector<std::string> subsets = {"All", "ICS + Freq"};
    std::vector<std::string> classifiers = {"1-NN", "SVM"};
    double svm_c = 1.0;
    double svm_gamma = 0.0; // 0 = 1/dimension
    std::string svm_multiclass = "ovo";
    int elm_hidden = 200;
    int elm_tries = 20;
    double elm_split = 0.8;
    int cv_folds = 10;
    int cv_repeats = 1;

    int pca_components = 0; // 0 = disabled
    std::vector<std::string> pca_sweep_ks = {"2", "5", "10", "26", "50", "full"};

    std::string features_csv; // optional override for the evaluate input

    // ------------------------------------------------------------------
    WindowingConfig windowing() const {
        WindowingConfig w;
        w.window_length = window_length;
        w.overlap = overlap;
        w.validate();
        return w;
    }

    FeatureConfig feature_config() const {
        FeatureConfig f;
        f.burg_order = burg_order;
        f.n_bands = n_bands;
        f.n_freq = n_freq;
        f.td.threshold_scale = td_threshold_scale;
        if (hosa_group_a.size() != 4 || hosa_group_b.size() != 4)
            throw ConfigError("hosa groups must list exactly 4 channels");
        for (int i = 0; i < 4; ++i) {
            f.hosa_group_a[static_cast<std::size_t>(i)] = hosa_group_a[static_cast<std::size_t>(i)] - 1;
            f.hosa_group_b[static_cast<std::size_t>(i)] = hosa_group_b[static_cast<std::size_t>(i)] - 1;
        }
        f.validate(channels);
        return f;
    }

    PipelineConfig pipeline_config() const {
        PipelineConfig p;
        if (pca_components > 0) p.pca_components = pca_components;
        return p;
    }

    SvmParams svm_params() const {
        SvmParams s;
        s.C = svm_c;
        s.gamma = svm_gamma;
        if (svm_multiclass == "ovo")
            s.multiclass = SvmMulticlass::OneVsOne;
        else if (svm_multiclass == "ovr")
            s.multiclass = SvmMulticlass::OneVsRest;
        else
            throw ConfigError("svm_multiclass must be 'ovo' or 'ovr'");
        return s;
    }

    SynthSpec synth_spec() const {
        SynthSpec s = SynthSpec::default_spec();
        s.channels = channels;
        s.samples_per_recording = synth_samples;
        s.recordings_per_class = synth_recordings_per_class;
        s.noise_scale = synth_noise_scale;
        return s;
    }

    std::vector<ClassifierConfig> classifier_configs() const {
        std::vector<ClassifierConfig> out;
        for (const std::string& name : classifiers) {
            ClassifierConfig c = ClassifierConfig::parse(name);
            const Activation act = c.elm.activation;
            c.svm = svm_params();
            c.elm.n_hidden = elm_hidden;
            c.elm.activation = act;
            out.push_back(c);
        }
        return out;
    }

    void validate() const {
        if (dataset != "synth" && dataset != "manifest")
            throw ConfigError("dataset must be 'synth' or 'manifest'");
        if (dataset == "manifest") {
            if (manifest_path.empty()) throw ConfigError("dataset = manifest requires manifest_path");
            if (!std::filesystem::exists(manifest_path))
                throw ConfigError("manifest_path '" + manifest_path + "' does not exist");
        }
        if (channels < 2) throw ConfigError("channels must be >= 2");
        if (cv_folds < 2) throw ConfigError("cv_folds must be >= 2");
        if (cv_repeats < 1) throw ConfigError("cv_repeats must be >= 1");
        if (!(elm_split > 0.0 && elm_split < 1.0)) throw ConfigError("elm_split must be in (0, 1)");
        if (elm_tries < 1) throw ConfigError("elm_tries must be >= 1");
        windowing();
        feature_config();
        svm_params();
        for (const std::string& s : subsets) FeatureSubsetSpec::parse(s);
        classifier_configs();
    }

    static RunConfig from_file(const std::filesystem::path& path);
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            const std::string t = trim(cur);
            if (!t.empty()) out.push_back(t);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    const std::string t = trim(cur);
    if (!t.empty()) out.push_back(t);
    return out;
}

inline long long parse_int_value(const std::string& key, const std::string& value) {
    long long v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size())
        throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
    return v;
}

inline double parse_real_value(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size())
        throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    return v;
}

inline std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const std::string& item : split_list(value, ','))
        out.push_back(static_cast<int>(parse_int_value(key, item)));
    return out;
}

} // namespace detail

inline RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");

    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));

        if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::parse_int_value(key, value));
        else if (key == "threads") cfg.threads = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "dataset") cfg.dataset = value;
        else if (key == "manifest_path") cfg.manifest_path = value;
        else if (key == "channels") cfg.channels = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "synth_samples") cfg.synth_samples = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "synth_recordings_per_class")
            cfg.synth_recordings_per_class = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "synth_noise_scale") cfg.synth_noise_scale = detail::parse_real_value(key, value);
        else if (key == "window_length") cfg.window_length = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "overlap") cfg.overlap = detail::parse_real_value(key, value);
        else if (key == "burg_order") cfg.burg_order = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "n_bands") cfg.n_bands = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "n_freq") cfg.n_freq = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "td_threshold_scale") cfg.td_threshold_scale = detail::parse_real_value(key, value);
        else if (key == "hosa_group_a") cfg.hosa_group_a = detail::parse_int_list(key, value);
        else if (key == "hosa_group_b") cfg.hosa_group_b = detail::parse_int_list(key, value);
        else if (key == "subsets") cfg.subsets = detail::split_list(value, ';');
        else if (key == "classifiers") cfg.classifiers = detail::split_list(value, ';');
        else if (key == "svm_c") cfg.svm_c = detail::parse_real_value(key, value);
        else if (key == "svm_gamma") cfg.svm_gamma = detail::parse_real_value(key, value);
        else if (key == "svm_multiclass") cfg.svm_multiclass = value;
        else if (key == "elm_hidden") cfg.elm_hidden = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "elm_tries") cfg.elm_tries = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "elm_split") cfg.elm_split = detail::parse_real_value(key, value);
        else if (key == "cv_folds") cfg.cv_folds = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "cv_repeats") cfg.cv_repeats = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "pca_components") cfg.pca_components = static_cast<int>(detail::parse_int_value(key, value));
        else if (key == "pca_sweep_ks") cfg.pca_sweep_ks = detail::split_list(value, ',');
        else if (key == "features_csv") cfg.features_csv = value;
        else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    return cfg;
}

} // namespace emgaction
