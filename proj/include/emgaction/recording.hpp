#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emgaction/errors.hpp"

namespace emgaction {

struct ActionLabel {
    std::string name;
    int index = 0;

    friend bool operator==(const ActionLabel& a, const ActionLabel& b) {
        return a.name == b.name && a.index == b.index;
    }
};

// One labeled multi-channel sEMG recording. Channels are stored row-wise,
// all with identical length; the sample rate is metadata only.
struct Recording {
    std::string id;
    ActionLabel action;
    std::vector<std::vector<double>> channels;
    double sample_rate_hz = 0.0;

    int channel_count() const { return static_cast<int>(channels.size()); }
    int sample_count() const { return channels.empty() ? 0 : static_cast<int>(channels.front().size()); }

    void validate(int min_samples = 0) const {
        if (channel_count() < 2)
            throw FormatError("recording '" + id + "': need at least 2 channels, got " +
                              std::to_string(channel_count()));
        for (const auto& ch : channels)
            if (static_cast<int>(ch.size()) != sample_count())
                throw FormatError("recording '" + id + "': channels have unequal lengths");
        if (sample_count() < min_samples)
            throw TooShortError("recording '" + id + "': " + std::to_string(sample_count()) +
                                " samples, need at least " + std::to_string(min_samples));
        for (const auto& ch : channels)
            for (double v : ch)
                if (!std::isfinite(v)) throw NonFiniteError("recording '" + id + "': non-finite sample");
    }
};

struct ManifestEntry {
    std::string path;
    std::string action;
    std::string subject;
};

struct DatasetManifest {
    std::vector<std::string> labels; // ordered label set; index = class index
    std::vector<ManifestEntry> entries;

    int label_index(const std::string& name) const {
        auto it = std::find(labels.begin(), labels.end(), name);
        return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
    }

    void validate() const {
        std::set<std::string> seen;
        for (const auto& e : entries) {
            if (label_index(e.action) < 0)
                throw FormatError("manifest: action '" + e.action + "' not in label set");
            if (!seen.insert(e.path).second)
                throw FormatError("manifest: duplicate path '" + e.path + "'");
        }
    }
};

namespace detail {

inline double parse_cell(const std::string& cell, int row, int col) {
    const char* b = cell.data();
    const char* e = b + cell.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t' || *(e - 1) == '\r')) --e;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e)
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": '" + cell + "' is not a number");
    return v;
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r') cells.back().pop_back();
    return cells;
}

inline bool looks_like_header(const std::vector<std::string>& cells) {
    for (const auto& c : cells) {
        double v;
        auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
        if (ec != std::errc() || ptr != c.data() + c.size()) return true;
    }
    return false;
}

} // namespace detail

// Reads a recording CSV: one column per channel, optional single header row,
// decimal-point reals. Row numbers in errors are 1-based data rows.
inline Recording load_recording(const std::filesystem::path& path, int expected_channels,
                                int min_samples = 0) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    Recording rec;
    rec.id = path.stem().string();
    rec.channels.resize(static_cast<std::size_t>(expected_channels));

    std::string line;
    int data_row = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells = detail::split_csv_row(line);
        if (first) {
            first = false;
            if (detail::looks_like_header(cells)) continue;
        }
        ++data_row;
        if (static_cast<int>(cells.size()) != expected_channels)
            throw FormatError("'" + path.string() + "': row " + std::to_string(data_row) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(expected_channels));
        for (int c = 0; c < expected_channels; ++c)
            rec.channels[static_cast<std::size_t>(c)].push_back(
                detail::parse_cell(cells[static_cast<std::size_t>(c)], data_row, c + 1));
    }
    if (data_row == 0) throw FormatError("'" + path.string() + "': no data rows");
    rec.validate(min_samples);
    return rec;
}

// Writes a recording as CSV with a ch1..chC header. %.17g round-trips doubles
// exactly, which the load/write round-trip invariant relies on.
inline void write_recording(const std::filesystem::path& path, const Recording& rec) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    for (int c = 0; c < rec.channel_count(); ++c) out << (c ? "," : "") << "ch" << (c + 1);
    out << "\n";
    char buf[64];
    for (int n = 0; n < rec.sample_count(); ++n) {
        for (int c = 0; c < rec.channel_count(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g",
                          rec.channels[static_cast<std::size_t>(c)][static_cast<std::size_t>(n)]);
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest '" + path.string() + "': " + e.what());
    }
    DatasetManifest m;
    try {
        for (const auto& l : j.at("labels")) m.labels.push_back(l.get<std::string>());
        for (const auto& e : j.at("entries")) {
            ManifestEntry me;
            me.path = e.at("path").get<std::string>();
            me.action = e.at("action").get<std::string>();
            me.subject = e.value("subject", std::string());
            m.entries.push_back(me);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("manifest '" + path.string() + "': " + e.what());
    }
    m.validate();
    return m;
}

inline void write_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
    nlohmann::json j;
    j["labels"] = m.labels;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : m.entries)
        j["entries"].push_back({{"path", e.path}, {"action", e.action}, {"subject", e.subject}});
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest '" + path.string() + "'");
    out << j.dump(2) << "\n";
}

// Loads every entry of a manifest. Relative entry paths resolve against the
// manifest's directory.
inline std::vector<Recording> load_dataset(const std::filesystem::path& manifest_path,
                                           int expected_channels, int min_samples = 0) {
    DatasetManifest m = load_manifest(manifest_path);
    std::filesystem::path base = manifest_path.parent_path();
    std::vector<Recording> out;
    for (const auto& e : m.entries) {
        std::filesystem::path p(e.path);
        if (p.is_relative()) p = base / p;
        Recording r = load_recording(p, expected_channels, min_samples);
        r.action = ActionLabel{e.action, m.label_index(e.action)};
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace emgaction
