#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mpslime/error.hpp"

namespace mpslime {

// 8-bit RGB image, row-major, interleaved channels.
class Image {
public:
    static constexpr int kChannels = 3;
    // Smallest side accepted for explanation.
    static constexpr int kMinSide = 16;

    Image() = default;

    Image(int width, int height)
        : width_(width), height_(height),
          data_(checked_size(width, height), std::uint8_t{0}) {}

    Image(int width, int height, std::vector<std::uint8_t> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != checked_size(width, height)) {
            throw ShapeError("image data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(width) + "x" +
                             std::to_string(height) + "x3");
        }
    }

    // Uniformly colored image.
    static Image filled(int width, int height, std::array<std::uint8_t, 3> rgb) {
        Image img(width, height);
        for (std::size_t i = 0; i < img.pixel_count(); ++i) img.set(i, rgb);
        return img;
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const noexcept { return data_.empty(); }

    const std::vector<std::uint8_t>& data() const noexcept { return data_; }
    std::vector<std::uint8_t>& data() noexcept { return data_; }

    std::array<std::uint8_t, 3> at(int x, int y) const noexcept {
        return get(static_cast<std::size_t>(y) * width_ + x);
    }
    void set(int x, int y, std::array<std::uint8_t, 3> rgb) noexcept {
        set(static_cast<std::size_t>(y) * width_ + x, rgb);
    }

    // Access by linear pixel index.
    std::array<std::uint8_t, 3> get(std::size_t pixel) const noexcept {
        const auto* p = &data_[pixel * kChannels];
        return {p[0], p[1], p[2]};
    }
    void set(std::size_t pixel, std::array<std::uint8_t, 3> rgb) noexcept {
        auto* p = &data_[pixel * kChannels];
        p[0] = rgb[0];
        p[1] = rgb[1];
        p[2] = rgb[2];
    }

    bool same_shape(const Image& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    static std::size_t checked_size(int width, int height) {
        if (width <= 0 || height <= 0) {
            throw ShapeError("image dimensions must be positive, got " + std::to_string(width) +
                             "x" + std::to_string(height));
        }
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * kChannels;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

} // namespace mpslime
