#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "emgaction/features.hpp"
#include "emgaction/rng.hpp"

using emgaction::FeatureConfig;
using emgaction::FeatureLayout;
using emgaction::FeatureSubsetSpec;
using emgaction::FeatureVector;
using emgaction::Family;
using emgaction::Rng;
using emgaction::SegmentFrame;

namespace {

SegmentFrame random_frame(int channels, int w, std::uint64_t seed) {
    Rng rng(seed);
    SegmentFrame f;
    f.data.resize(channels, w);
    for (int c = 0; c < channels; ++c) {
        const double offset = rng.uniform(0.5, 2.0);
        for (int n = 0; n < w; ++n)
            f.data(c, n) = offset + std::abs(rng.gaussian()) +
                           0.5 * std::sin(0.05 * static_cast<double>(n) + static_cast<double>(c));
    }
    f.recording_id = "frame";
    f.window_index = 0;
    f.action = {"A", 0};
    return f;
}

} // namespace

TEST_CASE("layout for the 8-channel configuration totals 303") {
    FeatureConfig cfg;
    FeatureLayout layout = FeatureLayout::for_config(8, cfg);
    REQUIRE(layout.total() == 303);
    REQUIRE(layout.slice(Family::ICS).count == 56);
    REQUIRE(layout.slice(Family::ICS).offset == 0);
    REQUIRE(layout.slice(Family::PSD).count == 80);
    REQUIRE(layout.slice(Family::PSD).offset == 56);
    REQUIRE(layout.slice(Family::LMFS).count == 136);
    REQUIRE(layout.slice(Family::LMFS).offset == 136);
    REQUIRE(layout.slice(Family::TDS).count == 21);
    REQUIRE(layout.slice(Family::TDS).offset == 272);
    REQUIRE(layout.slice(Family::HOSA).count == 10);
    REQUIRE(layout.slice(Family::HOSA).offset == 293);
}

TEST_CASE("per-channel time-domain switch changes the layout") {
    FeatureConfig cfg;
    cfg.tds_per_channel = true;
    REQUIRE(FeatureLayout::for_config(8, cfg).total() == 303 - 21 + 21 * 8);
}

TEST_CASE("extract produces a finite 303-vector") {
    SegmentFrame frame = random_frame(8, 1000, 42);
    FeatureConfig cfg;
    std::vector<emgaction::ExtractWarning> warnings;
    FeatureVector v = emgaction::extract_features(frame, cfg, &warnings);
    REQUIRE(v.values.size() == 303);
    for (double x : v.values) REQUIRE(std::isfinite(x));
    REQUIRE(warnings.empty());
}

TEST_CASE("identical channels give unit max-similarity across all pairs") {
    SegmentFrame frame = random_frame(8, 500, 7);
    for (int c = 1; c < 8; ++c) frame.data.row(c) = frame.data.row(0);
    FeatureVector v = emgaction::extract_features(frame, FeatureConfig{});
    for (int p = 0; p < 28; ++p)
        REQUIRE(v.values[static_cast<std::size_t>(p)] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("repeated extraction is identical") {
    SegmentFrame frame = random_frame(8, 600, 99);
    FeatureConfig cfg;
    FeatureVector a = emgaction::extract_features(frame, cfg);
    FeatureVector b = emgaction::extract_features(frame, cfg);
    REQUIRE(a.values == b.values);
}

TEST_CASE("psd block has 80 channel-major values and follows duplicated channels") {
    SegmentFrame frame = random_frame(8, 800, 3);
    frame.data.row(1) = frame.data.row(0);
    FeatureConfig cfg;
    std::vector<double> psd = emgaction::psd_features(frame, cfg);
    REQUIRE(psd.size() == 80);
    for (int b = 0; b < 10; ++b)
        REQUIRE(psd[static_cast<std::size_t>(b)] ==
                Catch::Approx(psd[static_cast<std::size_t>(10 + b)]).margin(1e-12));
}

TEST_CASE("zero and constant channels zero-fill their features with warnings") {
    SegmentFrame frame = random_frame(8, 400, 17);
    frame.data.row(3).setZero(); // zero energy: ICS pairs with 3, LMFS
    frame.data.row(5).setConstant(2.0); // constant: Burg fails for PSD
    FeatureConfig cfg;
    std::vector<emgaction::ExtractWarning> warnings;
    FeatureVector v = emgaction::extract_features(frame, cfg, &warnings);
    REQUIRE(!warnings.empty());
    for (double x : v.values) REQUIRE(std::isfinite(x));

    // every max-similarity slot touching channel 3 is zero
    auto pairs = emgaction::channel_pair_table(8);
    for (std::size_t p = 0; p < pairs.size(); ++p)
        if (pairs[p].i == 3 || pairs[p].j == 3) REQUIRE(v.values[p] == 0.0);
    // channel 5's PSD bands are zero-filled
    const auto psd_offset = static_cast<std::size_t>(56 + 5 * 10);
    for (std::size_t b = 0; b < 10; ++b) REQUIRE(v.values[psd_offset + b] == 0.0);
}

TEST_CASE("subset parsing covers the report vocabulary") {
    FeatureConfig cfg;
    FeatureLayout layout = FeatureLayout::for_config(8, cfg);
    auto width = [&](const std::string& name) {
        return static_cast<int>(emgaction::subset_indices(layout, FeatureSubsetSpec::parse(name)).size());
    };
    REQUIRE(width("All") == 303);
    REQUIRE(width("ICS") == 56);
    REQUIRE(width("PSD") == 80);
    REQUIRE(width("LMF") == 136);
    REQUIRE(width("HOSA") == 10);
    REQUIRE(width("Time Based") == 21);
    REQUIRE(width("Freq Based") == 216);
    REQUIRE(width("ICS + Freq") == 272);
    REQUIRE(width("ICS + Freq + HOSA") == 282);
    REQUIRE(width("Freq + HOSA") == 226);
    REQUIRE(width("Time + ICS + HOSA") == 87);
    REQUIRE(width("ICS + PSD") == 136);
    REQUIRE(width("ICS + LMF") == 192);
    REQUIRE_THROWS_AS(FeatureSubsetSpec::parse("Wavelets"), emgaction::ConfigError);
    REQUIRE_THROWS_AS(FeatureSubsetSpec::parse("  +  "), emgaction::ConfigError);
}

TEST_CASE("select_subset concatenates slices in layout order") {
    FeatureConfig cfg;
    FeatureLayout layout = FeatureLayout::for_config(8, cfg);
    FeatureVector v;
    v.values.resize(303);
    for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] = static_cast<double>(i);

    std::vector<double> hosa = emgaction::select_subset(v, layout, FeatureSubsetSpec::parse("HOSA"));
    REQUIRE(hosa.size() == 10);
    REQUIRE(hosa.front() == 293.0);
    REQUIRE(hosa.back() == 302.0);

    std::vector<double> all = emgaction::select_subset(v, layout, FeatureSubsetSpec::parse("All"));
    REQUIRE(all == v.values);

    // ICS followed by the frequency families, regardless of spelling order
    std::vector<double> mixed =
        emgaction::select_subset(v, layout, FeatureSubsetSpec::parse("Freq + ICS"));
    REQUIRE(mixed.size() == 272);
    REQUIRE(mixed[0] == 0.0);
    REQUIRE(mixed[56] == 56.0);
    REQUIRE(mixed.back() == 271.0);
}
