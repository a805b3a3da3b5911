#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace mpslime {

// Binary vector over superpixels: 1 = segment present, 0 = hidden.
class PerturbationMask {
public:
    PerturbationMask() = default;
    PerturbationMask(std::initializer_list<int> bits) {
        bits_.reserve(bits.size());
        for (int b : bits) bits_.push_back(b != 0 ? 1 : 0);
    }
    explicit PerturbationMask(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto& b : bits_) b = b != 0 ? 1 : 0;
    }

    static PerturbationMask filled(std::size_t size, bool value) {
        return PerturbationMask(std::vector<std::uint8_t>(size, value ? 1 : 0));
    }
    static PerturbationMask ones(std::size_t size) { return filled(size, true); }
    static PerturbationMask zeros(std::size_t size) { return filled(size, false); }

    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
    void set(std::size_t i, bool value) noexcept { bits_[i] = value ? 1 : 0; }

    std::size_t count_ones() const noexcept {
        std::size_t n = 0;
        for (auto b : bits_) n += b;
        return n;
    }
    std::size_t count_zeros() const noexcept { return bits_.size() - count_ones(); }

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    std::string to_string() const {
        std::string s;
        s.reserve(bits_.size());
        for (auto b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    friend bool operator==(const PerturbationMask&, const PerturbationMask&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

} // namespace mpslime
