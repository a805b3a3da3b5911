#pragma once

// Black-box classifier access. Anything with
//   std::vector<Prediction> predict_batch(std::span<const Image>) const
// can be explained; two analytic builtins are provided for testing.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpslime/error.hpp"
#include "mpslime/image.hpp"

namespace mpslime {

struct Prediction {
    std::vector<double> probabilities;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

template <class C>
concept BlackBoxClassifier = requires(const C& c, std::span<const Image> images) {
    { c.predict_batch(images) } -> std::same_as<std::vector<Prediction>>;
};

// Argmax; ties go to the lowest index.
inline std::size_t target_class(const Prediction& prediction) {
    if (prediction.probabilities.empty()) throw ShapeError("empty prediction");
    std::size_t best = 0;
    for (std::size_t i = 1; i < prediction.probabilities.size(); ++i) {
        if (prediction.probabilities[i] > prediction.probabilities[best]) best = i;
    }
    return best;
}

namespace detail {

inline void check_batch(std::span<const Image> images) {
    if (images.empty()) throw ParameterError("predict_batch called with an empty batch");
    for (const auto& img : images) {
        if (!img.same_shape(images.front())) {
            throw ShapeError("batch images have differing dimensions");
        }
    }
}

} // namespace detail

// Class 0: mean red-channel intensity in [0,1]. Class 1: its complement.
struct ColorScorer {
    static constexpr std::size_t num_classes = 2;

    std::vector<Prediction> predict_batch(std::span<const Image> images) const {
        detail::check_batch(images);
        std::vector<Prediction> out;
        out.reserve(images.size());
        for (const auto& img : images) {
            std::uint64_t red = 0;
            const auto& data = img.data();
            for (std::size_t i = 0; i < data.size(); i += 3) red += data[i];
            const double p = static_cast<double>(red) / (255.0 * static_cast<double>(img.pixel_count()));
            out.push_back({{p, 1.0 - p}});
        }
        return out;
    }
};

// Class 0: fraction of pixels whose mean channel value exceeds 50% gray.
struct RegionCounter {
    static constexpr std::size_t num_classes = 2;

    std::vector<Prediction> predict_batch(std::span<const Image> images) const {
        detail::check_batch(images);
        std::vector<Prediction> out;
        out.reserve(images.size());
        for (const auto& img : images) {
            std::size_t bright = 0;
            const auto& data = img.data();
            for (std::size_t i = 0; i < data.size(); i += 3) {
                // (r+g+b)/3 > 127.5
                if (2u * (data[i] + data[i + 1] + data[i + 2]) > 765u) ++bright;
            }
            const double p = static_cast<double>(bright) / static_cast<double>(img.pixel_count());
            out.push_back({{p, 1.0 - p}});
        }
        return out;
    }
};

static_assert(BlackBoxClassifier<ColorScorer>);
static_assert(BlackBoxClassifier<RegionCounter>);

} // namespace mpslime
