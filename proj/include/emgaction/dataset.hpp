#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "emgaction/features.hpp"
#include "emgaction/preprocess.hpp"
#include "emgaction/threading.hpp"

namespace emgaction {

// A fully extracted dataset: one row per segment, columns per the layout.
struct FeatureDataset {
    Eigen::MatrixXd X;
    std::vector<int> y; // class indices into class_names
    std::vector<std::string> class_names;
    FeatureLayout layout;
    std::vector<std::string> recording_ids;
    std::vector<int> window_indices;

    int rows() const { return static_cast<int>(X.rows()); }
    int cols() const { return static_cast<int>(X.cols()); }
    int n_classes() const { return static_cast<int>(class_names.size()); }
};

// Preprocess + extract over a set of recordings. Frames are processed in
// parallel but written by frame index, so any thread count yields the same
// matrix.
inline FeatureDataset extract_dataset(const std::vector<Recording>& recordings,
                                      const std::vector<std::string>& class_names,
                                      const WindowingConfig& wcfg, const FeatureConfig& fcfg,
                                      int threads = 1,
                                      std::vector<ExtractWarning>* warnings = nullptr) {
    std::vector<SegmentFrame> frames;
    for (const Recording& r : recordings) {
        std::vector<SegmentFrame> f = preprocess_recording(r, wcfg);
        frames.insert(frames.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
    }
    if (frames.empty()) throw InsufficientDataError("extract_dataset: no frames");

    const FeatureLayout layout = FeatureLayout::for_config(frames.front().channel_count(), fcfg);
    FeatureDataset ds;
    ds.layout = layout;
    ds.class_names = class_names;
    ds.X.resize(static_cast<Eigen::Index>(frames.size()), layout.total());
    ds.y.resize(frames.size());
    ds.recording_ids.resize(frames.size());
    ds.window_indices.resize(frames.size());

    std::vector<std::vector<ExtractWarning>> per_frame_warnings(frames.size());
    parallel_for(frames.size(), threads, [&](std::size_t i) {
        FeatureVector fv = extract_features(frames[i], fcfg, &per_frame_warnings[i]);
        for (int c = 0; c < layout.total(); ++c)
            ds.X(static_cast<Eigen::Index>(i), c) = fv.values[static_cast<std::size_t>(c)];
        ds.y[i] = fv.label.index;
        ds.recording_ids[i] = fv.recording_id;
        ds.window_indices[i] = fv.window_index;
    });
    if (warnings)
        for (auto& wlist : per_frame_warnings)
            warnings->insert(warnings->end(), wlist.begin(), wlist.end());
    return ds;
}

// Restriction of the dataset to a feature subset's columns.
inline FeatureDataset restrict_columns(const FeatureDataset& ds, const std::vector<int>& cols) {
    FeatureDataset out = ds;
    out.X.resize(ds.X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        out.X.col(static_cast<Eigen::Index>(c)) = ds.X.col(cols[c]);
    out.layout = FeatureLayout{}; // columns no longer follow the full layout
    return out;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

// Feature CSV: family-coded feature columns, then label, recording_id and
// window_index. A sidecar JSON records the layout and extraction config.
inline void write_feature_csv(const std::filesystem::path& path, const FeatureDataset& ds) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    bool first = true;
    for (const auto& s : ds.layout.slices)
        for (int i = 0; i < s.count; ++i) {
            out << (first ? "" : ",") << family_name(s.family) << "_";
            first = false;
            char idx[16];
            std::snprintf(idx, sizeof(idx), "%03d", i + 1);
            out << idx;
        }
    out << ",label,recording_id,window_index\n";
    for (int r = 0; r < ds.rows(); ++r) {
        for (int c = 0; c < ds.cols(); ++c) out << (c ? "," : "") << detail::format_double(ds.X(r, c));
        out << "," << ds.class_names[static_cast<std::size_t>(ds.y[static_cast<std::size_t>(r)])]
            << "," << ds.recording_ids[static_cast<std::size_t>(r)]
            << "," << ds.window_indices[static_cast<std::size_t>(r)] << "\n";
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline nlohmann::json layout_to_json(const FeatureLayout& layout) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : layout.slices)
        arr.push_back({{"family", family_name(s.family)}, {"offset", s.offset}, {"count", s.count}});
    return arr;
}

inline FeatureLayout layout_from_json(const nlohmann::json& arr) {
    FeatureLayout l;
    for (const auto& s : arr) {
        const std::string fam = s.at("family").get<std::string>();
        Family f;
        if (fam == "ICS") f = Family::ICS;
        else if (fam == "PSD") f = Family::PSD;
        else if (fam == "LMFS") f = Family::LMFS;
        else if (fam == "TDS") f = Family::TDS;
        else if (fam == "HOSA") f = Family::HOSA;
        else throw FormatError("layout: unknown family '" + fam + "'");
        l.slices.push_back({f, s.at("offset").get<int>(), s.at("count").get<int>()});
    }
    return l;
}

inline FeatureDataset load_feature_csv(const std::filesystem::path& path,
                                       const std::filesystem::path& sidecar_path) {
    std::ifstream side(sidecar_path);
    if (!side) throw IoError("cannot open sidecar '" + sidecar_path.string() + "'");
    nlohmann::json meta;
    side >> meta;

    FeatureDataset ds;
    ds.layout = layout_from_json(meta.at("layout"));
    for (const auto& l : meta.at("labels")) ds.class_names.push_back(l.get<std::string>());
    const int n_features = ds.layout.total();

    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw FormatError("'" + path.string() + "': empty file");

    std::vector<std::vector<double>> rows;
    int row_no = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row_no;
        std::vector<std::string> cells = detail::split_csv_row(line);
        if (static_cast<int>(cells.size()) != n_features + 3)
            throw FormatError("'" + path.string() + "': row " + std::to_string(row_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(n_features + 3));
        std::vector<double> vals(static_cast<std::size_t>(n_features));
        for (int c = 0; c < n_features; ++c)
            vals[static_cast<std::size_t>(c)] = detail::parse_cell(cells[static_cast<std::size_t>(c)], row_no, c + 1);
        rows.push_back(std::move(vals));

        const std::string& label = cells[static_cast<std::size_t>(n_features)];
        auto it = std::find(ds.class_names.begin(), ds.class_names.end(), label);
        if (it == ds.class_names.end())
            throw FormatError("'" + path.string() + "': unknown label '" + label + "'");
        ds.y.push_back(static_cast<int>(it - ds.class_names.begin()));
        ds.recording_ids.push_back(cells[static_cast<std::size_t>(n_features + 1)]);
        ds.window_indices.push_back(
            static_cast<int>(detail::parse_cell(cells[static_cast<std::size_t>(n_features + 2)], row_no, n_features + 3)));
    }
    if (rows.empty()) throw FormatError("'" + path.string() + "': no data rows");
    ds.X.resize(static_cast<Eigen::Index>(rows.size()), n_features);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < n_features; ++c) ds.X(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    return ds;
}

} // namespace emgaction
