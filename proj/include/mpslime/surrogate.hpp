#pragma once

// Weighted perturbation dataset and the K-sparse local linear surrogate
// (K-LASSO: weighted LASSO path to select K features, then a weighted least
// squares refit with intercept on those features).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mpslime/classifier.hpp"
#include "mpslime/clique_sampler.hpp"
#include "mpslime/error.hpp"
#include "mpslime/image.hpp"
#include "mpslime/mask.hpp"
#include "mpslime/perturbation.hpp"
#include "mpslime/region_graph.hpp"
#include "mpslime/segmentation.hpp"

namespace mpslime {

struct DatasetRow {
    PerturbationMask mask;
    double response = 0.0;  // target-class probability f(z)
    double weight = 0.0;    // locality kernel weight
};

// Row 0 is always the anchor: the all-ones mask, f(x), weight 1.
struct PerturbedDataset {
    std::size_t num_features = 0;
    std::size_t target_class = 0;
    std::vector<DatasetRow> rows;

    std::size_t size() const noexcept { return rows.size(); }
    const DatasetRow& anchor() const { return rows.front(); }
};

enum class SamplerKind { mps, uniform };

inline std::string_view to_string(SamplerKind kind) {
    return kind == SamplerKind::mps ? "mps" : "uniform";
}

struct SamplingConfig {
    SamplerKind sampler = SamplerKind::mps;
    MaskPolarity polarity = MaskPolarity::deactivate_clique;
    std::size_t n_samples = 1000;  // uniform sampler only
    std::uint64_t seed = 0;        // uniform sampler only
    FillStrategy fill = FillStrategy::segment_mean;
    KernelParams kernel{};
    // Images realized and sent to the classifier per call.
    std::size_t batch_size = 64;
};

// Perturbation masks for the requested sampler (the anchor is not included).
inline std::vector<PerturbationMask> sample_masks(const RegionGraph& graph, const SamplingConfig& config) {
    const auto d = static_cast<std::size_t>(graph.num_vertices());
    if (config.sampler == SamplerKind::uniform) {
        return uniform_sampler(d, config.n_samples, config.seed);
    }
    const auto cliques = enumerate_cliques(graph);
    std::vector<PerturbationMask> masks;
    masks.reserve(cliques.size());
    for (const auto& c : cliques) masks.push_back(clique_to_mask(c, d, config.polarity));
    return masks;
}

// Queries the classifier on every mask (realized over `image`) and records
// the response at `target`. The anchor row comes first.
template <BlackBoxClassifier C>
PerturbedDataset build_dataset_from_masks(const Image& image, const SuperpixelMap& map,
                                          const std::vector<PerturbationMask>& masks,
                                          const C& classifier, std::size_t target,
                                          double anchor_response, const SamplingConfig& config) {
    config.kernel.validate();
    const auto d = static_cast<std::size_t>(map.num_segments());
    PerturbedDataset ds;
    ds.num_features = d;
    ds.target_class = target;
    ds.rows.reserve(masks.size() + 1);
    ds.rows.push_back({PerturbationMask::ones(d), anchor_response, 1.0});

    const ImageRecoverer recover(image, map, config.fill);
    const std::size_t batch = std::max<std::size_t>(1, config.batch_size);
    std::vector<Image> images;
    for (std::size_t begin = 0; begin < masks.size(); begin += batch) {
        const std::size_t end = std::min(masks.size(), begin + batch);
        images.clear();
        for (std::size_t i = begin; i < end; ++i) images.push_back(recover(masks[i]));
        const auto preds = classifier.predict_batch(std::span<const Image>(images));
        if (preds.size() != images.size()) {
            throw ShapeError("classifier returned " + std::to_string(preds.size()) +
                             " predictions for " + std::to_string(images.size()) + " images");
        }
        for (std::size_t i = begin; i < end; ++i) {
            const auto& probs = preds[i - begin].probabilities;
            if (target >= probs.size()) throw IndexError("target class missing from prediction");
            const double weight = kernel_weight(mask_distance(masks[i], config.kernel), config.kernel);
            ds.rows.push_back({masks[i], probs[target], weight});
        }
    }
    return ds;
}

// Instance prediction f(x).
template <BlackBoxClassifier C>
Prediction predict_instance(const Image& image, const C& classifier) {
    auto preds = classifier.predict_batch(std::span<const Image>(&image, 1));
    if (preds.size() != 1) throw ShapeError("classifier returned no prediction for the instance");
    return std::move(preds.front());
}

// Full dataset for one sampler. When `target` is not given the top-1 class of
// the untouched image is explained.
template <BlackBoxClassifier C>
PerturbedDataset build_dataset(const Image& image, const SuperpixelMap& map, const RegionGraph& graph,
                               const C& classifier, const SamplingConfig& config,
                               std::optional<std::size_t> target = std::nullopt) {
    if (!map.matches(image)) throw ShapeError("image and label map dimensions differ");
    if (graph.num_vertices() != map.num_segments()) {
        throw ShapeError("region graph does not match the label map");
    }
    const auto instance = predict_instance(image, classifier);
    const std::size_t cls = target.value_or(target_class(instance));
    if (cls >= instance.probabilities.size()) throw IndexError("target class out of range");
    return build_dataset_from_masks(image, map, sample_masks(graph, config), classifier, cls,
                                    instance.probabilities[cls], config);
}

struct SurrogateModel {
    std::vector<double> weights;        // one per superpixel; at most k nonzero
    double intercept = 0.0;
    std::vector<std::size_t> selected;  // indices of nonzero weights, ascending
    std::size_t k = 0;
    std::vector<std::string> warnings;
};

inline double surrogate_predict(const SurrogateModel& model, const PerturbationMask& mask) {
    if (mask.size() != model.weights.size()) {
        throw ShapeError("mask length " + std::to_string(mask.size()) + " != model dimension " +
                         std::to_string(model.weights.size()));
    }
    double y = model.intercept;
    for (std::size_t j = 0; j < mask.size(); ++j) {
        if (mask[j]) y += model.weights[j];
    }
    return y;
}

// Sum over rows of weight * (response - g(mask))^2.
inline double weighted_square_loss(const SurrogateModel& model, const PerturbedDataset& dataset) {
    double loss = 0.0;
    for (const auto& row : dataset.rows) {
        const double r = row.response - surrogate_predict(model, row.mask);
        loss += row.weight * r * r;
    }
    return loss;
}

// Segments with the largest positive weights, descending; ties by lower id.
inline std::vector<std::size_t> top_k_segments(const SurrogateModel& model, std::size_t k) {
    std::vector<std::size_t> ids;
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
        if (model.weights[j] > 0.0) ids.push_back(j);
    }
    std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
        return model.weights[a] > model.weights[b];
    });
    if (ids.size() > k) ids.resize(k);
    return ids;
}

struct KLassoOptions {
    std::size_t path_points = 100;
    double min_lambda_ratio = 1e-4;
    double tolerance = 1e-9;  // max coefficient change per sweep
    std::size_t max_sweeps = 10000;
};

// Dataset in weighted-centered form. The intercept is unpenalized, so
// centering each column and the response by their weighted means removes it
// from the LASSO problem exactly.
class WeightedDesign {
public:
    explicit WeightedDesign(const PerturbedDataset& dataset)
        : n_(dataset.size()), d_(dataset.num_features) {
        if (n_ == 0) throw ParameterError("empty dataset");
        weights_.reserve(n_);
        double total = 0.0;
        for (const auto& row : dataset.rows) {
            if (row.mask.size() != d_) throw ShapeError("dataset rows have inconsistent mask length");
            if (!(row.weight > 0.0)) throw ParameterError("dataset weights must be positive");
            weights_.push_back(row.weight);
            total += row.weight;
        }
        x_mean_.assign(d_, 0.0);
        y_mean_ = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& row = dataset.rows[i];
            y_mean_ += weights_[i] * row.response;
            for (std::size_t j = 0; j < d_; ++j) {
                if (row.mask[j]) x_mean_[j] += weights_[i];
            }
        }
        y_mean_ /= total;
        for (auto& m : x_mean_) m /= total;
        // A weighted mean of identical values can miss them by an ulp; pin it
        // so a constant response centers to exact zeros.
        const bool constant_response = std::all_of(dataset.rows.begin(), dataset.rows.end(), [&](const auto& r) {
            return r.response == dataset.rows[0].response;
        });
        if (constant_response) y_mean_ = dataset.rows[0].response;

        columns_.assign(d_, std::vector<double>(n_));
        constant_.assign(d_, true);
        y_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& row = dataset.rows[i];
            y_[i] = row.response - y_mean_;
            for (std::size_t j = 0; j < d_; ++j) {
                columns_[j][i] = (row.mask[j] ? 1.0 : 0.0) - x_mean_[j];
                if (row.mask[j] != dataset.rows[0].mask[j]) constant_[j] = false;
            }
        }
        col_norm_.assign(d_, 0.0);
        for (std::size_t j = 0; j < d_; ++j) {
            if (constant_[j]) continue;
            for (std::size_t i = 0; i < n_; ++i) col_norm_[j] += weights_[i] * columns_[j][i] * columns_[j][i];
        }
    }

    std::size_t rows() const noexcept { return n_; }
    std::size_t features() const noexcept { return d_; }
    const std::vector<double>& column(std::size_t j) const { return columns_[j]; }
    const std::vector<double>& response() const noexcept { return y_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double x_mean(std::size_t j) const { return x_mean_[j]; }
    double y_mean() const noexcept { return y_mean_; }
    // Weighted squared norm of the centered column; 0 for constant columns.
    double column_norm(std::size_t j) const { return col_norm_[j]; }
    bool constant_column(std::size_t j) const { return constant_[j]; }

    // Weighted inner product of centered column j with v.
    double correlate(std::size_t j, const std::vector<double>& v) const {
        double s = 0.0;
        const auto& col = columns_[j];
        for (std::size_t i = 0; i < n_; ++i) s += weights_[i] * col[i] * v[i];
        return s;
    }

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> weights_;
    std::vector<double> x_mean_;
    double y_mean_ = 0.0;
    std::vector<std::vector<double>> columns_;
    std::vector<bool> constant_;
    std::vector<double> y_;
    std::vector<double> col_norm_;
};

// Smallest penalty at which every coefficient is zero: max_j |<x_j, y>_w|
// over centered columns.
inline double lambda_max(const WeightedDesign& design) {
    double best = 0.0;
    for (std::size_t j = 0; j < design.features(); ++j) {
        if (design.constant_column(j)) continue;
        best = std::max(best, std::abs(design.correlate(j, design.response())));
    }
    return best;
}

inline double lambda_max(const PerturbedDataset& dataset) { return lambda_max(WeightedDesign(dataset)); }

// Geometric grid from lambda_max down to min_lambda_ratio * lambda_max.
inline std::vector<double> lambda_grid(double lmax, const KLassoOptions& options = {}) {
    if (options.path_points < 2) throw ParameterError("lambda path needs at least 2 points");
    std::vector<double> grid(options.path_points);
    const double log_ratio = std::log(options.min_lambda_ratio);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(grid.size() - 1);
        grid[i] = lmax * std::exp(t * log_ratio);
    }
    grid.front() = lmax;
    return grid;
}

struct LassoPathPoint {
    double lambda = 0.0;
    std::vector<double> coefficients;
    std::vector<std::size_t> active;
    std::size_t sweeps = 0;
};

// Cyclic coordinate descent on
//   1/2 * sum_i w_i (y_i - x_i . beta)^2 + lambda * |beta|_1
// over the centered design, warm-started from `beta`.
class LassoSolver {
public:
    LassoSolver(const WeightedDesign& design, KLassoOptions options)
        : design_(design), options_(options), beta_(design.features(), 0.0),
          residual_(design.response()) {}

    LassoPathPoint solve(double lambda) {
        std::size_t sweep = 0;
        for (; sweep < options_.max_sweeps; ++sweep) {
            double max_change = 0.0;
            for (std::size_t j = 0; j < design_.features(); ++j) {
                const double norm = design_.column_norm(j);
                if (norm <= 0.0) continue;
                const double rho = design_.correlate(j, residual_) + norm * beta_[j];
                const double updated = soft_threshold(rho, lambda) / norm;
                const double delta = updated - beta_[j];
                if (delta == 0.0) continue;
                const auto& col = design_.column(j);
                for (std::size_t i = 0; i < residual_.size(); ++i) residual_[i] -= delta * col[i];
                beta_[j] = updated;
                max_change = std::max(max_change, std::abs(delta));
            }
            if (max_change < options_.tolerance) {
                ++sweep;
                break;
            }
        }
        LassoPathPoint point{lambda, beta_, {}, sweep};
        for (std::size_t j = 0; j < beta_.size(); ++j) {
            if (beta_[j] != 0.0) point.active.push_back(j);
        }
        return point;
    }

private:
    static double soft_threshold(double v, double t) {
        if (v > t) return v - t;
        if (v < -t) return v + t;
        return 0.0;
    }

    const WeightedDesign& design_;
    KLassoOptions options_;
    std::vector<double> beta_;
    std::vector<double> residual_;
};

inline std::vector<LassoPathPoint> lasso_path(const PerturbedDataset& dataset,
                                              std::span<const double> lambdas,
                                              const KLassoOptions& options = {}) {
    const WeightedDesign design(dataset);
    LassoSolver solver(design, options);
    std::vector<LassoPathPoint> path;
    path.reserve(lambdas.size());
    for (double lambda : lambdas) path.push_back(solver.solve(lambda));
    return path;
}

// Weighted least squares with intercept restricted to `selected`. A selected
// column that is constant over the dataset cannot be estimated; its weight is
// left at 0 and a warning is recorded.
inline SurrogateModel fit_restricted_ols(const PerturbedDataset& dataset,
                                         std::span<const std::size_t> selected, std::size_t k) {
    const WeightedDesign design(dataset);
    SurrogateModel model;
    model.k = k;
    model.weights.assign(design.features(), 0.0);

    std::vector<std::size_t> usable;
    for (std::size_t j : selected) {
        if (j >= design.features()) throw IndexError("selected feature out of range");
        if (design.constant_column(j)) {
            model.warnings.push_back("degenerate design: feature " + std::to_string(j) +
                                     " is constant across the dataset; coefficient set to 0");
        } else {
            usable.push_back(j);
        }
    }

    if (!usable.empty()) {
        const auto n = static_cast<Eigen::Index>(design.rows());
        const auto m = static_cast<Eigen::Index>(usable.size());
        Eigen::MatrixXd a(n, m);
        Eigen::VectorXd b(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sw = std::sqrt(design.weights()[static_cast<std::size_t>(i)]);
            b(i) = sw * design.response()[static_cast<std::size_t>(i)];
            for (Eigen::Index c = 0; c < m; ++c) {
                a(i, c) = sw * design.column(usable[static_cast<std::size_t>(c)])[static_cast<std::size_t>(i)];
            }
        }
        const Eigen::VectorXd beta = a.completeOrthogonalDecomposition().solve(b);
        for (Eigen::Index c = 0; c < m; ++c) model.weights[usable[static_cast<std::size_t>(c)]] = beta(c);
    }

    model.intercept = design.y_mean();
    for (std::size_t j = 0; j < design.features(); ++j) {
        model.intercept -= model.weights[j] * design.x_mean(j);
    }
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
        if (model.weights[j] != 0.0) model.selected.push_back(j);
    }
    return model;
}

// K-LASSO: walk the weighted LASSO path from lambda_max downward; at the first
// grid point with at least k active features keep the k largest in magnitude
// (ties keep the lower index), then refit by restricted weighted OLS.
inline SurrogateModel k_lasso(const PerturbedDataset& dataset, std::size_t k,
                              const KLassoOptions& options = {}) {
    if (k < 1) throw ParameterError("k must be >= 1");
    if (dataset.size() < k + 1) {
        throw ParameterError("dataset has " + std::to_string(dataset.size()) +
                             " rows; k-lasso with k=" + std::to_string(k) + " needs at least " +
                             std::to_string(k + 1));
    }
    const WeightedDesign design(dataset);
    const double lmax = lambda_max(design);

    std::vector<std::size_t> chosen;
    bool reached = false;
    if (lmax > 0.0) {
        LassoSolver solver(design, options);
        std::vector<std::size_t> widest;
        for (double lambda : lambda_grid(lmax, options)) {
            auto point = solver.solve(lambda);
            if (point.active.size() > widest.size()) widest = point.active;
            if (point.active.size() >= k) {
                chosen = point.active;
                std::stable_sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
                    return std::abs(point.coefficients[a]) > std::abs(point.coefficients[b]);
                });
                chosen.resize(k);
                std::sort(chosen.begin(), chosen.end());
                reached = true;
                break;
            }
        }
        if (!reached) chosen = widest;
    }

    auto model = fit_restricted_ols(dataset, chosen, k);
    if (!reached) {
        model.warnings.insert(model.warnings.begin(),
                              "only " + std::to_string(chosen.size()) + " of k=" + std::to_string(k) +
                                  " features activated along the lasso path");
    }
    return model;
}

} // namespace mpslime
