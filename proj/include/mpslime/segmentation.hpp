#pragma once

// Superpixel segmentation: SLIC-style clustering in joint RGB + position space
// with grid seeding, followed by connectivity enforcement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mpslime/error.hpp"
#include "mpslime/image.hpp"
#include "mpslime/mask.hpp"

namespace mpslime {

struct SegmentationParams {
    int target_segments = 50;
    // Spatial weight relative to a color range of 100 (the usual SLIC scale):
    // one grid step of displacement costs as much as a color difference of
    // compactness/100 in [0,1] RGB.
    double compactness = 10.0;
    int iterations = 10;

    void validate() const {
        if (target_segments < 2) throw ParameterError("target_segments must be >= 2");
        if (!(compactness > 0.0)) throw ParameterError("compactness must be > 0");
        if (iterations < 1) throw ParameterError("iterations must be >= 1");
    }
};

// Per-pixel segment ids. Ids lie in [0, num_segments).
class SuperpixelMap {
public:
    SuperpixelMap() = default;

    // num_segments is max(label) + 1. Labels need not be compact or
    // connected; segment_image() guarantees both for its own output.
    SuperpixelMap(int width, int height, std::vector<int> labels)
        : width_(width), height_(height), labels_(std::move(labels)) {
        if (width <= 0 || height <= 0 ||
            labels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw ShapeError("label map size does not match " + std::to_string(width) + "x" +
                             std::to_string(height));
        }
        int max_label = -1;
        for (int l : labels_) {
            if (l < 0) throw ShapeError("negative segment label");
            max_label = std::max(max_label, l);
        }
        num_segments_ = max_label + 1;
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return labels_.size(); }
    int num_segments() const noexcept { return num_segments_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    int label(int x, int y) const noexcept {
        return labels_[static_cast<std::size_t>(y) * width_ + x];
    }

    std::vector<std::size_t> segment_sizes() const {
        std::vector<std::size_t> sizes(static_cast<std::size_t>(num_segments_), 0);
        for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
        return sizes;
    }

    bool matches(const Image& image) const noexcept {
        return image.width() == width_ && image.height() == height_;
    }

    friend bool operator==(const SuperpixelMap&, const SuperpixelMap&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<int> labels_;
    int num_segments_ = 0;
};

namespace detail {

struct SlicCenter {
    double r, g, b, x, y;
};

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
    }
    int find(int v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    void attach(int child_root, int parent_root) { parent_[child_root] = parent_root; }

private:
    std::vector<int> parent_;
};

// Labels 4-connected runs of equal label. Returns component id per pixel;
// ids are assigned in raster order of each component's first pixel.
inline std::vector<int> connected_components(int width, int height, const std::vector<int>& labels,
                                             int& num_components) {
    const std::size_t n = labels.size();
    std::vector<int> comp(n, -1);
    std::vector<std::size_t> stack;
    num_components = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        const int id = num_components++;
        comp[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(p % width);
            const int y = static_cast<int>(p / width);
            const auto visit = [&](int nx, int ny) {
                const std::size_t q = static_cast<std::size_t>(ny) * width + nx;
                if (comp[q] < 0 && labels[q] == labels[p]) {
                    comp[q] = id;
                    stack.push_back(q);
                }
            };
            if (x > 0) visit(x - 1, y);
            if (x + 1 < width) visit(x + 1, y);
            if (y > 0) visit(x, y - 1);
            if (y + 1 < height) visit(x, y + 1);
        }
    }
    return comp;
}

// Makes every label a single 4-connected component. For each raw label the
// largest component survives if it is at least `min_size` pixels; every other
// component is absorbed, smallest first, by its currently largest neighbor.
inline std::vector<int> enforce_connectivity(int width, int height, const std::vector<int>& raw,
                                             std::size_t min_size, int& num_segments) {
    int num_comp = 0;
    const auto comp = connected_components(width, height, raw, num_comp);
    const auto nc = static_cast<std::size_t>(num_comp);

    std::vector<std::size_t> size(nc, 0);
    std::vector<int> comp_label(nc, 0);
    for (std::size_t p = 0; p < comp.size(); ++p) {
        ++size[comp[p]];
        comp_label[comp[p]] = raw[p];
    }

    int max_label = 0;
    for (int l : raw) max_label = std::max(max_label, l);
    std::vector<int> largest(static_cast<std::size_t>(max_label) + 1, -1);
    for (std::size_t c = 0; c < nc; ++c) {
        int& best = largest[comp_label[c]];
        if (best < 0 || size[c] > size[best]) best = static_cast<int>(c);
    }
    std::vector<char> kept(nc, 0);
    std::size_t kept_count = 0;
    for (int c : largest) {
        if (c >= 0 && size[c] >= min_size) {
            kept[c] = 1;
            ++kept_count;
        }
    }
    if (kept_count < 2) {
        std::vector<int> order(nc);
        for (std::size_t c = 0; c < nc; ++c) order[c] = static_cast<int>(c);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return size[a] > size[b]; });
        for (int c : order) {
            if (kept_count >= 2) break;
            if (!kept[c]) {
                kept[c] = 1;
                ++kept_count;
            }
        }
    }

    std::vector<std::vector<int>> neighbors(nc);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * width + x;
            if (x + 1 < width && comp[p + 1] != comp[p]) {
                neighbors[comp[p]].push_back(comp[p + 1]);
                neighbors[comp[p + 1]].push_back(comp[p]);
            }
            if (y + 1 < height && comp[p + width] != comp[p]) {
                neighbors[comp[p]].push_back(comp[p + width]);
                neighbors[comp[p + width]].push_back(comp[p]);
            }
        }
    }
    for (auto& nb : neighbors) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }

    DisjointSets sets(nc);
    std::set<std::pair<std::size_t, int>> pending;
    for (std::size_t c = 0; c < nc; ++c) {
        if (!kept[c]) pending.emplace(size[c], static_cast<int>(c));
    }
    while (!pending.empty()) {
        const int root = pending.begin()->second;
        pending.erase(pending.begin());

        int target = -1;
        for (int nb : neighbors[root]) {
            const int r = sets.find(nb);
            if (r == root) continue;
            if (target < 0 || size[r] > size[target] || (size[r] == size[target] && r < target)) {
                target = r;
            }
        }
        if (target < 0) {
            kept[root] = 1;  // isolated: nothing to merge into
            continue;
        }
        const bool target_pending = !kept[target];
        if (target_pending) pending.erase({size[target], target});
        sets.attach(root, target);
        size[target] += size[root];
        kept[target] = static_cast<char>(kept[target] || kept[root]);
        auto& dst = neighbors[target];
        dst.insert(dst.end(), neighbors[root].begin(), neighbors[root].end());
        neighbors[root].clear();
        neighbors[root].shrink_to_fit();
        if (!kept[target]) pending.emplace(size[target], target);
    }

    std::vector<int> remap(nc, -1);
    std::vector<int> out(comp.size());
    num_segments = 0;
    for (std::size_t p = 0; p < comp.size(); ++p) {
        const int r = sets.find(comp[p]);
        if (remap[r] < 0) remap[r] = num_segments++;
        out[p] = remap[r];
    }
    return out;
}

} // namespace detail

// Grid-seeded SLIC clustering on [0,1] RGB + position, then connectivity
// enforcement. Deterministic; num_segments lands in [2, 2*target_segments].
inline SuperpixelMap segment_image(const Image& image, const SegmentationParams& params = {}) {
    params.validate();
    if (image.width() < Image::kMinSide || image.height() < Image::kMinSide) {
        throw ImageTooSmallError("image is " + std::to_string(image.width()) + "x" +
                                 std::to_string(image.height()) + ", minimum is " +
                                 std::to_string(Image::kMinSide) + "x" +
                                 std::to_string(Image::kMinSide));
    }
    const int w = image.width();
    const int h = image.height();
    const std::size_t n = image.pixel_count();
    const auto k = static_cast<std::size_t>(params.target_segments);
    if (k > n) {
        throw ParameterError("target_segments " + std::to_string(k) + " exceeds pixel count " +
                             std::to_string(n));
    }

    std::vector<double> r(n), g(n), b(n);
    for (std::size_t p = 0; p < n; ++p) {
        const auto px = image.get(p);
        r[p] = px[0] / 255.0;
        g[p] = px[1] / 255.0;
        b[p] = px[2] / 255.0;
    }

    // Grid: at least as many columns as the aspect ratio suggests, rounded up.
    const double kd = static_cast<double>(k);
    int nx = static_cast<int>(std::ceil(std::sqrt(kd * w / h) - 1e-9));
    nx = std::clamp(nx, 1, std::min(w, params.target_segments));
    int ny = static_cast<int>(std::lround(kd / nx));
    ny = std::clamp(ny, 1, h);
    if (nx * ny < 2) {
        if (w >= h) nx = 2; else ny = 2;
    }
    const double cell_w = static_cast<double>(w) / nx;
    const double cell_h = static_cast<double>(h) / ny;
    const double step = std::sqrt(cell_w * cell_h);
    const double spatial_weight =
        (params.compactness / 100.0) * (params.compactness / 100.0) / (step * step);

    const auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
    const auto gradient = [&](int x, int y) {
        const std::size_t l = idx(std::max(x - 1, 0), y), rt = idx(std::min(x + 1, w - 1), y);
        const std::size_t u = idx(x, std::max(y - 1, 0)), d = idx(x, std::min(y + 1, h - 1));
        const double gx = (r[rt] - r[l]) * (r[rt] - r[l]) + (g[rt] - g[l]) * (g[rt] - g[l]) +
                          (b[rt] - b[l]) * (b[rt] - b[l]);
        const double gy = (r[d] - r[u]) * (r[d] - r[u]) + (g[d] - g[u]) * (g[d] - g[u]) +
                          (b[d] - b[u]) * (b[d] - b[u]);
        return gx + gy;
    };

    std::vector<detail::SlicCenter> centers;
    centers.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double cx = (i + 0.5) * cell_w;
            double cy = (j + 0.5) * cell_h;
            int px = std::min(static_cast<int>(cx), w - 1);
            int py = std::min(static_cast<int>(cy), h - 1);
            // Move off edges: lowest gradient in the 3x3 neighborhood, if strictly lower.
            double best = gradient(px, py);
            int bx = px, by = py;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int qx = px + dx, qy = py + dy;
                    if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
                    const double gq = gradient(qx, qy);
                    if (gq < best) {
                        best = gq;
                        bx = qx;
                        by = qy;
                    }
                }
            }
            if (bx != px || by != py) {
                cx = bx + 0.5;
                cy = by + 0.5;
            }
            const std::size_t p = idx(bx, by);
            centers.push_back({r[p], g[p], b[p], cx, cy});
        }
    }

    const auto distance = [&](const detail::SlicCenter& c, std::size_t p, int x, int y) {
        const double dr = r[p] - c.r, dg = g[p] - c.g, db = b[p] - c.b;
        const double dx = (x + 0.5) - c.x, dy = (y + 0.5) - c.y;
        return dr * dr + dg * dg + db * db + spatial_weight * (dx * dx + dy * dy);
    };

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<int> assignment(n, -1);
    std::vector<double> best_dist(n, kInf);
    for (int iter = 0; iter < params.iterations; ++iter) {
        std::fill(best_dist.begin(), best_dist.end(), kInf);
        std::fill(assignment.begin(), assignment.end(), -1);
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const auto& ctr = centers[c];
            const int x0 = std::max(0, static_cast<int>(std::floor(ctr.x - cell_w)));
            const int x1 = std::min(w - 1, static_cast<int>(std::ceil(ctr.x + cell_w)));
            const int y0 = std::max(0, static_cast<int>(std::floor(ctr.y - cell_h)));
            const int y1 = std::min(h - 1, static_cast<int>(std::ceil(ctr.y + cell_h)));
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    const std::size_t p = idx(x, y);
                    const double d = distance(ctr, p, x, y);
                    if (d < best_dist[p]) {
                        best_dist[p] = d;
                        assignment[p] = static_cast<int>(c);
                    }
                }
            }
        }
        // Pixels outside every search window fall back to the global nearest center.
        for (std::size_t p = 0; p < n; ++p) {
            if (assignment[p] >= 0) continue;
            const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const double d = distance(centers[c], p, x, y);
                if (d < best_dist[p]) {
                    best_dist[p] = d;
                    assignment[p] = static_cast<int>(c);
                }
            }
        }

        std::vector<detail::SlicCenter> sums(centers.size(), {0, 0, 0, 0, 0});
        std::vector<std::size_t> counts(centers.size(), 0);
        for (std::size_t p = 0; p < n; ++p) {
            auto& s = sums[assignment[p]];
            s.r += r[p];
            s.g += g[p];
            s.b += b[p];
            s.x += static_cast<double>(p % w) + 0.5;
            s.y += static_cast<double>(p / w) + 0.5;
            ++counts[assignment[p]];
        }
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (counts[c] == 0) continue;
            const double inv = 1.0 / static_cast<double>(counts[c]);
            centers[c] = {sums[c].r * inv, sums[c].g * inv, sums[c].b * inv, sums[c].x * inv,
                          sums[c].y * inv};
        }
    }

    const std::size_t min_size = std::max<std::size_t>(1, n / (4 * k));
    int num_segments = 0;
    auto labels = detail::enforce_connectivity(w, h, assignment, min_size, num_segments);
    return SuperpixelMap(w, h, std::move(labels));
}

// The instance's interpretable representation: every superpixel present.
inline PerturbationMask full_mask(const SuperpixelMap& map) {
    return PerturbationMask::ones(static_cast<std::size_t>(map.num_segments()));
}

// Debug rendering: segment id modulo 256 in the red channel.
inline Image render_label_map(const SuperpixelMap& map) {
    Image out(map.width(), map.height());
    for (std::size_t p = 0; p < map.pixel_count(); ++p) {
        out.set(p, {static_cast<std::uint8_t>(map.labels()[p] % 256), 0, 0});
    }
    return out;
}

} // namespace mpslime
