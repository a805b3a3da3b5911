#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <numeric>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "mpslime/classifier.hpp"
#include "mpslime/remote_classifier.hpp"
#include "support/scenes.hpp"

namespace mpslime {
namespace {

Image HalfWhiteHalfBlack() {
    Image img(16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
            img.set(x, y, x < 8 ? std::array<std::uint8_t, 3>{255, 255, 255} : std::array<std::uint8_t, 3>{0, 0, 0});
    return img;
}

TEST(ColorScorer, RedAndBlack) {
    const std::vector<Image> batch{Image::filled(16, 16, {255, 0, 0}), Image::filled(16, 16, {0, 0, 0})};
    const auto preds = ColorScorer{}.predict_batch(batch);
    ASSERT_EQ(preds.size(), 2u);
    EXPECT_EQ(preds[0].probabilities, (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(preds[1].probabilities, (std::vector<double>{0.0, 1.0}));
}

TEST(RegionCounter, HalfBright) {
    const std::vector<Image> batch{HalfWhiteHalfBlack()};
    EXPECT_EQ(RegionCounter{}.predict_batch(batch)[0].probabilities, (std::vector<double>{0.5, 0.5}));
    // Exactly 50% gray is not brighter than 50% gray; 128 is.
    const std::vector<Image> grays{Image::filled(16, 16, {127, 127, 127}), Image::filled(16, 16, {128, 128, 128})};
    const auto p = RegionCounter{}.predict_batch(grays);
    EXPECT_EQ(p[0].probabilities[0], 0.0);
    EXPECT_EQ(p[1].probabilities[0], 1.0);
}

TEST(Builtins, ProbabilitiesSumToOneAndBatchConsistent) {
    std::vector<Image> batch;
    for (std::uint32_t s = 0; s < 4; ++s) batch.push_back(scenes::random_scene(s, 32));
    for (const auto& preds : {ColorScorer{}.predict_batch(batch), RegionCounter{}.predict_batch(batch)}) {
        for (const auto& p : preds) {
            EXPECT_NEAR(p.probabilities[0] + p.probabilities[1], 1.0, 1e-6);
        }
    }
    const auto whole = ColorScorer{}.predict_batch(batch);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        EXPECT_EQ(ColorScorer{}.predict_batch(std::span<const Image>(&batch[i], 1))[0], whole[i]);
    }
    EXPECT_EQ(RegionCounter{}.predict_batch(batch), RegionCounter{}.predict_batch(batch));
}

TEST(Builtins, RejectEmptyAndRaggedBatches) {
    EXPECT_THROW(ColorScorer{}.predict_batch({}), ParameterError);
    const std::vector<Image> ragged{Image::filled(16, 16, {0, 0, 0}), Image::filled(17, 16, {0, 0, 0})};
    EXPECT_THROW(RegionCounter{}.predict_batch(ragged), ShapeError);
}

TEST(TargetClass, ArgmaxLowestOnTies) {
    EXPECT_EQ(target_class({{0.1, 0.9}}), 1u);
    EXPECT_EQ(target_class({{0.5, 0.5}}), 0u);
    EXPECT_EQ(target_class({{0.2, 0.3, 0.5}}), 2u);
}

TEST(Base64, KnownVectorsAndRoundTrip) {
    const std::string text = "foobar";
    const std::vector<std::uint8_t> bytes(text.begin(), text.end());
    EXPECT_EQ(base64_encode(std::span(bytes).first(0)), "");
    EXPECT_EQ(base64_encode(std::span(bytes).first(1)), "Zg==");
    EXPECT_EQ(base64_encode(std::span(bytes).first(2)), "Zm8=");
    EXPECT_EQ(base64_encode(std::span(bytes).first(3)), "Zm9v");
    EXPECT_EQ(base64_encode(bytes), "Zm9vYmFy");
    std::vector<std::uint8_t> all(256);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(base64_decode(base64_encode(all)), all);
}

// In-process server speaking the remote wire protocol, answering with the
// color scorer, with hooks for misbehaving.
class FakeServer {
public:
    FakeServer() {
        server_.Post("/predict", [this](const httplib::Request& req, httplib::Response& res) {
            const int call = calls_++;
            if (call < stall_calls_) std::this_thread::sleep_for(std::chrono::milliseconds(1600));
            const auto body = nlohmann::json::parse(req.body);
            request_sizes_.push_back(body["images"].size());
            if (!override_body_.empty()) {
                res.status = override_status_;
                res.set_content(override_body_, "application/json");
                return;
            }
            nlohmann::json out;
            out["probabilities"] = nlohmann::json::array();
            for (const auto& b64 : body["images"]) {
                const auto img = decode_png(base64_decode(b64.get<std::string>()));
                const auto p = ColorScorer{}.predict_batch(std::span<const Image>(&img, 1));
                out["probabilities"].push_back(p[0].probabilities);
            }
            res.set_content(out.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        thread_.join();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<int> calls_{0};
    int stall_calls_ = 0;
    std::vector<std::size_t> request_sizes_;
    int override_status_ = 200;
    std::string override_body_;
};

std::vector<Image> Batch(std::size_t n) {
    std::vector<Image> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(scenes::random_scene(static_cast<std::uint32_t>(i), 16));
    return out;
}

TEST(RemoteClassifier, TenImageRoundTripIsOrderAligned) {
    FakeServer server;
    const RemoteClassifier remote(server.endpoint());
    const auto batch = Batch(10);
    const auto preds = remote.predict_batch(batch);
    const auto local = ColorScorer{}.predict_batch(batch);
    ASSERT_EQ(preds.size(), 10u);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        EXPECT_NEAR(preds[i].probabilities[0], local[i].probabilities[0], 1e-12);
        EXPECT_NEAR(preds[i].probabilities[0] + preds[i].probabilities[1], 1.0, 1e-4);
    }
}

TEST(RemoteClassifier, ChunksAtThirtyTwo) {
    FakeServer server;
    const auto preds = RemoteClassifier(server.endpoint()).predict_batch(Batch(70));
    EXPECT_EQ(preds.size(), 70u);
    EXPECT_EQ(server.request_sizes_, (std::vector<std::size_t>{32, 32, 6}));
}

TEST(RemoteClassifier, HandleParsesUrl) {
    FakeServer server;
    const auto handle = ClassifierHandle::parse("url:" + server.endpoint() + "/");
    EXPECT_EQ(handle.kind(), "remote");
    EXPECT_EQ(handle.predict_batch(Batch(2)).size(), 2u);
}

TEST(RemoteClassifier, MissingProbabilitiesIsProtocolError) {
    FakeServer server;
    server.override_body_ = R"({"probs": []})";
    try {
        RemoteClassifier(server.endpoint()).predict_batch(Batch(1));
        FAIL() << "expected ProtocolError";
    } catch (const ProtocolError& e) {
        EXPECT_EQ(e.field(), "probabilities");
    }
}

TEST(RemoteClassifier, MalformedRowsNameTheField) {
    FakeServer server;
    server.override_body_ = R"({"probabilities": [[0.5, 0.5], [1.5, -0.5]]})";
    try {
        RemoteClassifier(server.endpoint()).predict_batch(Batch(2));
        FAIL() << "expected ProtocolError";
    } catch (const ProtocolError& e) {
        EXPECT_EQ(e.field(), "probabilities[1][0]");
    }
    server.override_body_ = R"({"probabilities": [[0.5, 0.5]]})";
    EXPECT_THROW(RemoteClassifier(server.endpoint()).predict_batch(Batch(2)), ProtocolError);
    server.override_body_ = "not json";
    EXPECT_THROW(RemoteClassifier(server.endpoint()).predict_batch(Batch(1)), ProtocolError);
}

TEST(RemoteClassifier, NonOkStatusIsProtocolError) {
    FakeServer server;
    server.override_status_ = 500;
    server.override_body_ = R"({"error": "boom"})";
    try {
        RemoteClassifier(server.endpoint()).predict_batch(Batch(1));
        FAIL() << "expected ProtocolError";
    } catch (const ProtocolError& e) {
        EXPECT_EQ(e.field(), "status");
    }
}

TEST(RemoteClassifier, RetriesTransportFailures) {
    FakeServer server;
    server.stall_calls_ = 2;
    RemoteOptions opts;
    opts.timeout_seconds = 1;
    const auto preds = RemoteClassifier(server.endpoint(), opts).predict_batch(Batch(1));
    EXPECT_EQ(preds.size(), 1u);
    EXPECT_EQ(server.calls_.load(), 3);
}

TEST(RemoteClassifier, GivesUpAfterTwoRetries) {
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    RemoteOptions opts;
    opts.timeout_seconds = 1;
    const RemoteClassifier remote("http://127.0.0.1:" + std::to_string(port), opts);
    EXPECT_THROW(remote.predict_batch(Batch(1)), TransportError);
}

TEST(ClassifierHandleTest, ParsesBuiltins) {
    EXPECT_EQ(ClassifierHandle::parse("builtin:color_scorer").kind(), "builtin_color_scorer");
    EXPECT_EQ(ClassifierHandle::parse("builtin:region_counter").kind(), "builtin_region_counter");
    EXPECT_THROW(ClassifierHandle::parse("builtin:inception"), ParameterError);
    EXPECT_THROW(ClassifierHandle::parse("inception"), ParameterError);
    EXPECT_THROW(ClassifierHandle::parse("url:localhost:8000"), ParameterError);
}

} // namespace
} // namespace mpslime
