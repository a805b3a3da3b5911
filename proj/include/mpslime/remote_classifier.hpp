#pragma once

// HTTP client for a remote classifier, and a runtime handle that selects
// between the builtins and a remote endpoint.
//
// Wire protocol: POST <endpoint>/predict, body {"images": [<base64 PNG>, ...]},
// response {"probabilities": [[p0, p1, ...], ...]} in request order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "mpslime/classifier.hpp"
#include "mpslime/error.hpp"
#include "mpslime/image.hpp"
#include "mpslime/image_io.hpp"

namespace mpslime {

inline std::string base64_encode(std::span<const std::uint8_t> bytes) {
    static constexpr char table[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += table[(v >> 6) & 63];
        out += table[v & 63];
    }
    if (const std::size_t rest = bytes.size() - i; rest > 0) {
        std::uint32_t v = bytes[i] << 16;
        if (rest == 2) v |= bytes[i + 1] << 8;
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += rest == 2 ? table[(v >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

inline std::vector<std::uint8_t> base64_decode(std::string_view text) {
    const auto value = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::vector<std::uint8_t> out;
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=') break;
        const int v = value(c);
        if (v < 0) throw ParameterError("invalid base64 character");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

struct RemoteOptions {
    std::size_t batch_size = 32;
    int max_retries = 2;
    int timeout_seconds = 60;
    // 0 accepts whatever class count the server reports (at least 2).
    std::size_t expected_classes = 0;
};

class RemoteClassifier {
public:
    explicit RemoteClassifier(std::string endpoint, RemoteOptions options = {})
        : endpoint_(std::move(endpoint)), options_(options) {
        const auto scheme = endpoint_.find("://");
        if (scheme == std::string::npos) {
            throw ParameterError("remote endpoint must include a scheme: '" + endpoint_ + "'");
        }
        const auto slash = endpoint_.find('/', scheme + 3);
        host_ = endpoint_.substr(0, slash);
        prefix_ = slash == std::string::npos ? std::string{} : endpoint_.substr(slash);
        while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
        if (options_.batch_size == 0) throw ParameterError("remote batch size must be positive");
    }

    const std::string& endpoint() const noexcept { return endpoint_; }

    std::vector<Prediction> predict_batch(std::span<const Image> images) const {
        detail::check_batch(images);
        std::vector<Prediction> out;
        out.reserve(images.size());
        std::size_t classes = options_.expected_classes;
        for (std::size_t begin = 0; begin < images.size(); begin += options_.batch_size) {
            const auto chunk = images.subspan(begin, std::min(options_.batch_size, images.size() - begin));
            auto preds = request_chunk(chunk, classes);
            for (auto& p : preds) out.push_back(std::move(p));
        }
        return out;
    }

private:
    std::vector<Prediction> request_chunk(std::span<const Image> chunk, std::size_t& classes) const {
        nlohmann::json body;
        auto& arr = body["images"] = nlohmann::json::array();
        for (const auto& img : chunk) arr.push_back(base64_encode(encode_png(img)));
        const std::string payload = body.dump();

        httplib::Client client(host_);
        client.set_connection_timeout(options_.timeout_seconds, 0);
        client.set_read_timeout(options_.timeout_seconds, 0);
        client.set_write_timeout(options_.timeout_seconds, 0);

        httplib::Result result;
        for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
            result = client.Post(prefix_ + "/predict", payload, "application/json");
            if (result) break;
        }
        if (!result) {
            throw TransportError("POST " + endpoint_ + "/predict failed after " +
                                 std::to_string(options_.max_retries + 1) + " attempts: " +
                                 httplib::to_string(result.error()));
        }
        if (result->status != 200) {
            throw ProtocolError("status", "remote classifier returned HTTP " +
                                              std::to_string(result->status));
        }
        return parse_response(result->body, chunk.size(), classes);
    }

    static std::vector<Prediction> parse_response(const std::string& text, std::size_t expected_rows,
                                                  std::size_t& classes) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ProtocolError("body", std::string("response is not JSON: ") + e.what());
        }
        if (!doc.is_object() || !doc.contains("probabilities")) {
            throw ProtocolError("probabilities", "response lacks \"probabilities\"");
        }
        const auto& rows = doc["probabilities"];
        if (!rows.is_array() || rows.size() != expected_rows) {
            throw ProtocolError("probabilities", "\"probabilities\" must be an array of " +
                                                     std::to_string(expected_rows) + " rows");
        }
        std::vector<Prediction> out;
        out.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& row = rows[i];
            const std::string field = "probabilities[" + std::to_string(i) + "]";
            if (!row.is_array() || row.size() < 2) {
                throw ProtocolError(field, field + " must be an array of at least 2 numbers");
            }
            if (classes == 0) classes = row.size();
            if (row.size() != classes) {
                throw ProtocolError(field, field + " has " + std::to_string(row.size()) +
                                               " classes, expected " + std::to_string(classes));
            }
            Prediction p;
            p.probabilities.reserve(row.size());
            for (std::size_t j = 0; j < row.size(); ++j) {
                const auto& v = row[j];
                const std::string cell = field + "[" + std::to_string(j) + "]";
                if (!v.is_number()) throw ProtocolError(cell, cell + " is not a number");
                const double x = v.get<double>();
                if (!(x >= 0.0 && x <= 1.0)) throw ProtocolError(cell, cell + " outside [0,1]");
                p.probabilities.push_back(x);
            }
            out.push_back(std::move(p));
        }
        return out;
    }

    std::string endpoint_;
    std::string host_;
    std::string prefix_;
    RemoteOptions options_;
};

static_assert(BlackBoxClassifier<RemoteClassifier>);

// Runtime-selected classifier: "builtin:color_scorer", "builtin:region_counter"
// or "url:<endpoint>".
class ClassifierHandle {
public:
    using Variant = std::variant<ColorScorer, RegionCounter, RemoteClassifier>;

    explicit ClassifierHandle(Variant impl) : impl_(std::move(impl)) {}

    static ClassifierHandle parse(std::string_view spec) {
        if (spec.starts_with("builtin:")) {
            const auto name = spec.substr(8);
            if (name == "color_scorer" || name == "builtin_color_scorer") {
                return ClassifierHandle(ColorScorer{});
            }
            if (name == "region_counter" || name == "builtin_region_counter") {
                return ClassifierHandle(RegionCounter{});
            }
            throw ParameterError("unknown builtin classifier '" + std::string(name) + "'");
        }
        if (spec.starts_with("url:")) {
            return ClassifierHandle(RemoteClassifier(std::string(spec.substr(4))));
        }
        throw ParameterError("classifier must be builtin:<name> or url:<endpoint>, got '" +
                             std::string(spec) + "'");
    }

    std::string kind() const {
        return std::visit(
            [](const auto& c) -> std::string {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, ColorScorer>) return "builtin_color_scorer";
                else if constexpr (std::is_same_v<T, RegionCounter>) return "builtin_region_counter";
                else return "remote";
            },
            impl_);
    }

    std::vector<Prediction> predict_batch(std::span<const Image> images) const {
        return std::visit([&](const auto& c) { return c.predict_batch(images); }, impl_);
    }

private:
    Variant impl_;
};

static_assert(BlackBoxClassifier<ClassifierHandle>);

} // namespace mpslime
