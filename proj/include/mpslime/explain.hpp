#pragma once

// End-to-end explanation of one instance: segment, build the region graph,
// sample (clique sampler and/or uniform baseline), query the classifier, fit
// the K-sparse surrogate and measure its fidelity.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mpslime/classifier.hpp"
#include "mpslime/clique_sampler.hpp"
#include "mpslime/metrics.hpp"
#include "mpslime/perturbation.hpp"
#include "mpslime/region_graph.hpp"
#include "mpslime/segmentation.hpp"
#include "mpslime/surrogate.hpp"

namespace mpslime {

struct ExplainOptions {
    SegmentationParams segmentation{};
    std::vector<SamplerKind> samplers{SamplerKind::mps, SamplerKind::uniform};
    std::size_t k = 5;
    // Fill, kernel, polarity, uniform n_samples and seed. `sampler` is ignored.
    SamplingConfig sampling{};
    KLassoOptions lasso{};
    // Size of a fresh uniform resample used for out-of-sample metrics; 0 disables.
    std::size_t out_of_sample = 0;
};

struct SegmentationDigest {
    std::size_t num_segments = 0;
    std::size_t num_edges = 0;
    std::size_t num_triangles = 0;
};

struct SamplerResult {
    SamplerKind sampler = SamplerKind::mps;
    PerturbedDataset dataset;
    SurrogateModel model;
    std::vector<std::size_t> top_k;
    FidelityReport fidelity;
    std::optional<FidelityReport> out_of_sample;
    std::size_t sample_count = 0;  // rows including the anchor
    double wall_time_ms = 0.0;     // dataset construction + fitting
};

struct Explanation {
    SuperpixelMap map;
    RegionGraph graph;
    std::vector<Clique> cliques;
    SegmentationDigest digest;
    Prediction instance;
    std::size_t target_class = 0;
    std::vector<SamplerResult> results;

    const SamplerResult* find(SamplerKind kind) const {
        for (const auto& r : results) {
            if (r.sampler == kind) return &r;
        }
        return nullptr;
    }
};

inline SegmentationDigest digest_of(const RegionGraph& graph, const std::vector<Clique>& cliques) {
    SegmentationDigest d;
    d.num_segments = static_cast<std::size_t>(graph.num_vertices());
    d.num_edges = graph.num_edges();
    for (const auto& c : cliques) d.num_triangles += c.size() == 3 ? 1 : 0;
    return d;
}

// Fits and measures one sampler against an already segmented instance. All
// samplers of one explanation share the target class of the untouched image.
template <BlackBoxClassifier C>
SamplerResult explain_with_sampler(const Image& image, const SuperpixelMap& map, const RegionGraph& graph,
                                   const C& classifier, SamplerKind kind, std::size_t target,
                                   double anchor_response, const ExplainOptions& options) {
    SamplingConfig config = options.sampling;
    config.sampler = kind;

    SamplerResult result;
    result.sampler = kind;
    const auto start = std::chrono::steady_clock::now();
    result.dataset = build_dataset_from_masks(image, map, sample_masks(graph, config), classifier,
                                              target, anchor_response, config);
    result.model = k_lasso(result.dataset, options.k, options.lasso);
    const auto stop = std::chrono::steady_clock::now();
    result.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();

    result.sample_count = result.dataset.size();
    result.top_k = top_k_segments(result.model, options.k);
    result.fidelity = fidelity_report(result.model, result.dataset, anchor_response);

    if (options.out_of_sample > 0) {
        SamplingConfig fresh = config;
        fresh.sampler = SamplerKind::uniform;
        fresh.n_samples = options.out_of_sample;
        fresh.seed = config.seed + 1;
        const auto holdout = build_dataset_from_masks(image, map, sample_masks(graph, fresh), classifier,
                                                      target, anchor_response, fresh);
        result.out_of_sample = fidelity_report(result.model, holdout, anchor_response);
    }
    return result;
}

template <BlackBoxClassifier C>
Explanation explain(const Image& image, const C& classifier, const ExplainOptions& options = {}) {
    if (options.k < 1) throw ParameterError("k must be >= 1");
    Explanation ex;
    ex.map = segment_image(image, options.segmentation);
    ex.graph = build_region_graph(ex.map);
    ex.cliques = enumerate_cliques(ex.graph);
    ex.digest = digest_of(ex.graph, ex.cliques);
    ex.instance = predict_instance(image, classifier);
    ex.target_class = target_class(ex.instance);
    const double anchor = ex.instance.probabilities[ex.target_class];
    for (SamplerKind kind : options.samplers) {
        ex.results.push_back(
            explain_with_sampler(image, ex.map, ex.graph, classifier, kind, ex.target_class, anchor, options));
    }
    return ex;
}

} // namespace mpslime
