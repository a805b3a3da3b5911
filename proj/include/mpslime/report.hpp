#pragma once

// Run configuration, JSON report and artifact writing for the command-line
// tool. Report keys are emitted in a fixed order.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mpslime/explain.hpp"
#include "mpslime/image_io.hpp"
#include "mpslime/overlay.hpp"
#include "mpslime/remote_classifier.hpp"

namespace mpslime {

using OrderedJson = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
    std::string image_path;
    std::string classifier = "builtin:color_scorer";
    std::string sampler = "both";  // mps | uniform | both
    std::size_t k = 5;
    int target_segments = 50;
    double compactness = 10.0;
    int iterations = 10;
    double sigma = 0.25;
    FillStrategy fill = FillStrategy::segment_mean;
    MaskPolarity polarity = MaskPolarity::deactivate_clique;
    std::size_t n_samples = 1000;
    std::uint64_t seed = 0;
    std::size_t out_of_sample = 0;
    std::string report_path;   // empty: caller prints the report
    std::string overlay_dir;   // empty: no overlays
    std::string debug_dir;     // empty: no debug dumps

    std::vector<SamplerKind> samplers() const {
        if (sampler == "mps") return {SamplerKind::mps};
        if (sampler == "uniform") return {SamplerKind::uniform};
        if (sampler == "both") return {SamplerKind::mps, SamplerKind::uniform};
        throw ParameterError("sampler must be mps, uniform or both, got '" + sampler + "'");
    }

    void validate() const {
        if (k < 1) throw ParameterError("k must be >= 1");
        if (n_samples < k + 1) throw ParameterError("n_samples must be >= k + 1");
        if (image_path.empty()) throw ParameterError("an input image is required");
        (void)samplers();
        SegmentationParams{target_segments, compactness, iterations}.validate();
        KernelParams{sigma, true}.validate();
    }

    ExplainOptions to_options() const {
        ExplainOptions o;
        o.segmentation = {target_segments, compactness, iterations};
        o.samplers = samplers();
        o.k = k;
        o.sampling.fill = fill;
        o.sampling.polarity = polarity;
        o.sampling.kernel = {sigma, true};
        o.sampling.n_samples = n_samples;
        o.sampling.seed = seed;
        o.out_of_sample = out_of_sample;
        return o;
    }
};

inline std::string_view to_string(MaskPolarity p) {
    return p == MaskPolarity::deactivate_clique ? "deactivate_clique" : "activate_clique";
}

inline MaskPolarity parse_polarity(std::string_view name) {
    if (name == "deactivate_clique" || name == "deactivate") return MaskPolarity::deactivate_clique;
    if (name == "activate_clique" || name == "activate") return MaskPolarity::activate_clique;
    throw ParameterError("unknown polarity '" + std::string(name) + "'");
}

namespace detail {

inline OrderedJson fidelity_json(const FidelityReport& f, const char* evaluation) {
    OrderedJson j;
    j["evaluation"] = evaluation;
    j["mae"] = f.mae;
    j["r_squared"] = f.r_squared ? OrderedJson(*f.r_squared) : OrderedJson(nullptr);
    j["r_squared_reason"] = f.r_squared ? OrderedJson(nullptr) : OrderedJson(f.r_squared_reason);
    j["pred_prob_at_x"] = f.pred_prob_at_x;
    j["true_prob_at_x"] = f.true_prob_at_x;
    j["n_rows"] = f.n_rows;
    return j;
}

inline OrderedJson digest_json(const SegmentationDigest& d) {
    OrderedJson j;
    j["num_segments"] = d.num_segments;
    j["num_edges"] = d.num_edges;
    j["num_triangles"] = d.num_triangles;
    return j;
}

inline OrderedJson config_json(const RunConfig& c, SamplerKind kind) {
    OrderedJson j;
    j["k"] = c.k;
    j["target_segments"] = c.target_segments;
    j["compactness"] = c.compactness;
    j["iterations"] = c.iterations;
    j["sigma"] = c.sigma;
    j["normalize_distance"] = true;
    j["fill"] = to_string(c.fill);
    j["polarity"] = kind == SamplerKind::mps ? OrderedJson(to_string(c.polarity)) : OrderedJson(nullptr);
    j["n_samples"] = kind == SamplerKind::uniform ? OrderedJson(c.n_samples) : OrderedJson(nullptr);
    j["seed"] = kind == SamplerKind::uniform ? OrderedJson(c.seed) : OrderedJson(nullptr);
    j["out_of_sample"] = c.out_of_sample;
    return j;
}

inline std::string overlay_path(const RunConfig& c, SamplerKind kind) {
    if (c.overlay_dir.empty()) return {};
    return (std::filesystem::path(c.overlay_dir) / ("overlay_" + std::string(to_string(kind)) + ".png")).string();
}

} // namespace detail

inline OrderedJson build_report(const RunConfig& config, const std::string& classifier_kind,
                                 const Image& image, const Explanation& ex) {
    OrderedJson report;
    report["schema_version"] = kReportSchemaVersion;
    report["image"] = {{"path", config.image_path}, {"width", image.width()}, {"height", image.height()}};
    report["classifier"] = {{"spec", config.classifier}, {"kind", classifier_kind}};
    report["target_class"] = ex.target_class;
    report["instance_probabilities"] = ex.instance.probabilities;
    report["segmentation"] = detail::digest_json(ex.digest);
    report["timing_scope"] = "dataset construction and surrogate fitting; excludes image decode and segmentation";

    OrderedJson blocks = OrderedJson::array();
    for (const auto& r : ex.results) {
        OrderedJson b;
        b["sampler"] = to_string(r.sampler);
        b["config"] = detail::config_json(config, r.sampler);
        b["segmentation"] = detail::digest_json(ex.digest);
        b["sample_count"] = r.sample_count;
        b["wall_time_ms"] = r.wall_time_ms;
        OrderedJson top = OrderedJson::array();
        for (std::size_t id : r.top_k) top.push_back({{"segment", id}, {"weight", r.model.weights[id]}});
        b["top_k"] = std::move(top);
        b["model"] = {{"intercept", r.model.intercept},
                      {"selected", r.model.selected},
                      {"weights", r.model.weights}};
        b["fidelity"] = detail::fidelity_json(r.fidelity, "in_sample");
        b["out_of_sample"] = r.out_of_sample ? detail::fidelity_json(*r.out_of_sample, "out_of_sample_uniform")
                                             : OrderedJson(nullptr);
        b["warnings"] = r.model.warnings;
        const auto overlay = detail::overlay_path(config, r.sampler);
        b["overlay"] = overlay.empty() ? OrderedJson(nullptr) : OrderedJson(overlay);
        blocks.push_back(std::move(b));
    }
    report["samplers"] = std::move(blocks);
    return report;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("short write to " + path);
}

inline void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory " + dir);
}

// Executes a full run against a parsed classifier: explains, writes overlays,
// debug dumps and (when report_path is set) the report. Returns the report.
template <BlackBoxClassifier C>
OrderedJson run_with(const RunConfig& config, const C& classifier, const std::string& classifier_kind) {
    config.validate();
    const Image image = load_image(config.image_path);
    const Explanation ex = explain(image, classifier, config.to_options());
    const OrderedJson report = build_report(config, classifier_kind, image, ex);

    if (!config.overlay_dir.empty()) {
        ensure_directory(config.overlay_dir);
        for (const auto& r : ex.results) {
            write_overlay(detail::overlay_path(config, r.sampler), image, ex.map, r.top_k);
        }
    }
    if (!config.debug_dir.empty()) {
        ensure_directory(config.debug_dir);
        const std::filesystem::path dir(config.debug_dir);
        write_png((dir / "labels.png").string(), render_label_map(ex.map));
        std::ostringstream edges, cliques;
        write_edge_list(edges, ex.graph);
        write_clique_list(cliques, ex.cliques);
        write_text_file((dir / "edges.txt").string(), edges.str());
        write_text_file((dir / "cliques.txt").string(), cliques.str());
    }
    if (!config.report_path.empty()) write_text_file(config.report_path, report.dump(2) + "\n");
    return report;
}

inline OrderedJson run(const RunConfig& config) {
    const auto handle = ClassifierHandle::parse(config.classifier);
    return run_with(config, handle, handle.kind());
}

// Copy of a report with every wall_time_ms removed, for reproducibility checks.
inline OrderedJson without_timings(OrderedJson report) {
    for (auto& block : report["samplers"]) block.erase("wall_time_ms");
    return report;
}

} // namespace mpslime
