#pragma once

// Turning an interpretable mask back into a pixel image, and the locality
// kernel that weights each perturbed sample.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mpslime/error.hpp"
#include "mpslime/image.hpp"
#include "mpslime/mask.hpp"
#include "mpslime/segmentation.hpp"

namespace mpslime {

enum class FillStrategy { segment_mean, constant_gray, constant_black };

inline std::string_view to_string(FillStrategy fill) {
    switch (fill) {
        case FillStrategy::segment_mean: return "segment_mean";
        case FillStrategy::constant_gray: return "constant_gray";
        case FillStrategy::constant_black: return "constant_black";
    }
    return "unknown";
}

inline FillStrategy parse_fill(std::string_view name) {
    if (name == "segment_mean" || name == "mean") return FillStrategy::segment_mean;
    if (name == "constant_gray" || name == "gray") return FillStrategy::constant_gray;
    if (name == "constant_black" || name == "black") return FillStrategy::constant_black;
    throw ParameterError("unknown fill strategy '" + std::string(name) + "'");
}

struct KernelParams {
    double sigma = 0.25;
    // Divide the mask distance by sqrt(d') so it lies in [0,1].
    bool normalize_distance = true;

    void validate() const {
        if (!(sigma > 0.0)) throw ParameterError("kernel sigma must be > 0");
    }
};

// Mean RGB of every segment, rounded to the nearest 8-bit value.
inline std::vector<std::array<std::uint8_t, 3>> segment_mean_colors(const Image& image,
                                                                    const SuperpixelMap& map) {
    if (!map.matches(image)) throw ShapeError("image and label map dimensions differ");
    const auto d = static_cast<std::size_t>(map.num_segments());
    std::vector<std::array<double, 3>> sums(d, {0.0, 0.0, 0.0});
    std::vector<std::size_t> counts(d, 0);
    for (std::size_t p = 0; p < image.pixel_count(); ++p) {
        const auto s = static_cast<std::size_t>(map.labels()[p]);
        const auto px = image.get(p);
        for (int c = 0; c < 3; ++c) sums[s][c] += px[c];
        ++counts[s];
    }
    std::vector<std::array<std::uint8_t, 3>> means(d, {0, 0, 0});
    for (std::size_t s = 0; s < d; ++s) {
        if (counts[s] == 0) continue;
        for (int c = 0; c < 3; ++c) {
            means[s][c] = static_cast<std::uint8_t>(std::lround(sums[s][c] / counts[s]));
        }
    }
    return means;
}

// Precomputes per-segment fill colors so a batch of masks can be realized
// without rescanning the image.
class ImageRecoverer {
public:
    ImageRecoverer(const Image& image, const SuperpixelMap& map, FillStrategy fill)
        : image_(&image), map_(&map) {
        if (!map.matches(image)) throw ShapeError("image and label map dimensions differ");
        switch (fill) {
            case FillStrategy::segment_mean:
                fill_ = segment_mean_colors(image, map);
                break;
            case FillStrategy::constant_gray:
                fill_.assign(static_cast<std::size_t>(map.num_segments()), {128, 128, 128});
                break;
            case FillStrategy::constant_black:
                fill_.assign(static_cast<std::size_t>(map.num_segments()), {0, 0, 0});
                break;
        }
    }

    Image operator()(const PerturbationMask& mask) const {
        if (mask.size() != static_cast<std::size_t>(map_->num_segments())) {
            throw ShapeError("mask length " + std::to_string(mask.size()) + " != " +
                             std::to_string(map_->num_segments()) + " segments");
        }
        Image out = *image_;
        const auto& labels = map_->labels();
        for (std::size_t p = 0; p < out.pixel_count(); ++p) {
            const auto s = static_cast<std::size_t>(labels[p]);
            if (!mask[s]) out.set(p, fill_[s]);
        }
        return out;
    }

private:
    const Image* image_;
    const SuperpixelMap* map_;
    std::vector<std::array<std::uint8_t, 3>> fill_;
};

// Pixels of active segments are copied; pixels of hidden segments take the fill.
inline Image recover_image(const Image& image, const SuperpixelMap& map,
                           const PerturbationMask& mask,
                           FillStrategy fill = FillStrategy::segment_mean) {
    return ImageRecoverer(image, map, fill)(mask);
}

// Euclidean distance from the all-ones instance vector: sqrt(#zeros),
// optionally divided by sqrt(d').
inline double mask_distance(const PerturbationMask& mask, const KernelParams& params = {}) {
    const double dist = std::sqrt(static_cast<double>(mask.count_zeros()));
    if (!params.normalize_distance || mask.size() == 0) return dist;
    return dist / std::sqrt(static_cast<double>(mask.size()));
}

inline double kernel_weight(double distance, const KernelParams& params = {}) {
    params.validate();
    if (distance < 0.0) throw ParameterError("distance must be nonnegative");
    return std::exp(-(distance * distance) / (params.sigma * params.sigma));
}

} // namespace mpslime
