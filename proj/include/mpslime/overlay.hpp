#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpslime/error.hpp"
#include "mpslime/image.hpp"
#include "mpslime/image_io.hpp"
#include "mpslime/segmentation.hpp"

namespace mpslime {

inline constexpr std::array<std::uint8_t, 3> kOutlineColor = {255, 255, 0};
inline constexpr double kDimFactor = 0.3;

// Listed segments keep their pixels; everything else is dimmed to 30%.
// Pixels of a listed segment that touch (4-adjacency) a different segment are
// drawn in the outline color.
inline Image render_overlay(const Image& image, const SuperpixelMap& map,
                            std::span<const std::size_t> segment_ids) {
    if (!map.matches(image)) throw ShapeError("image and label map dimensions differ");
    std::vector<char> listed(static_cast<std::size_t>(map.num_segments()), 0);
    for (std::size_t id : segment_ids) {
        if (id >= listed.size()) throw IndexError("overlay segment " + std::to_string(id) + " out of range");
        listed[id] = 1;
    }
    const int w = map.width(), h = map.height();
    Image out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int l = map.label(x, y);
            if (!listed[static_cast<std::size_t>(l)]) {
                auto px = image.at(x, y);
                for (auto& c : px) c = static_cast<std::uint8_t>(std::lround(c * kDimFactor));
                out.set(x, y, px);
                continue;
            }
            const bool boundary = (x > 0 && map.label(x - 1, y) != l) ||
                                  (x + 1 < w && map.label(x + 1, y) != l) ||
                                  (y > 0 && map.label(x, y - 1) != l) ||
                                  (y + 1 < h && map.label(x, y + 1) != l);
            out.set(x, y, boundary ? kOutlineColor : image.at(x, y));
        }
    }
    return out;
}

inline void write_overlay(const std::string& path, const Image& image, const SuperpixelMap& map,
                          std::span<const std::size_t> segment_ids) {
    write_png(path, render_overlay(image, map, segment_ids));
}

} // namespace mpslime
