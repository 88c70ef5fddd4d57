#include "diytab/preview.hpp"

#include <chrono>
#include <string>

#include "httplib.h"

#include "diytab/image_io.hpp"

namespace diytab {

namespace {

constexpr const char* kBoundary = "frame";

constexpr const char* kIndex =
    "<!doctype html><title>preview</title>"
    "<body style=\"margin:0;background:#222\"><img src=\"/stream\" style=\"max-width:100%\"></body>";

}  // namespace

PreviewServer::PreviewServer(int port) : server_(std::make_unique<httplib::Server>()) {
    server_->Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kIndex, "text/html"); });

    server_->Get("/snapshot.jpg", [this](const httplib::Request&, httplib::Response& res) {
        Raster frame;
        {
            std::lock_guard lock(mu_);
            frame = latest_;
        }
        if (frame.width() == 0) {
            res.status = 503;
            res.set_content("no frame yet\n", "text/plain");
            return;
        }
        const auto jpeg = encode_jpeg(frame);
        res.set_content(std::string(jpeg.begin(), jpeg.end()), "image/jpeg");
    });

    server_->Get("/stream", [this](const httplib::Request&, httplib::Response& res) {
        auto sent = std::make_shared<std::uint64_t>(0);
        res.set_chunked_content_provider(
            std::string("multipart/x-mixed-replace; boundary=") + kBoundary,
            [this, sent](std::size_t, httplib::DataSink& sink) {
                Raster frame;
                std::uint64_t seq = 0;
                if (!wait_for_frame(*sent, frame, seq)) {
                    sink.done();
                    return false;
                }
                if (seq == *sent) return true;  // timed out; poll again
                *sent = seq;
                const auto jpeg = encode_jpeg(frame);
                std::string head = std::string("--") + kBoundary +
                                   "\r\nContent-Type: image/jpeg\r\nContent-Length: " + std::to_string(jpeg.size()) +
                                   "\r\n\r\n";
                return sink.write(head.data(), head.size()) &&
                       sink.write(reinterpret_cast<const char*>(jpeg.data()), jpeg.size()) &&
                       sink.write("\r\n", 2);
            });
    });

    if (port == 0) {
        port_ = server_->bind_to_any_port("127.0.0.1");
        if (port_ < 0) throw IoError("preview: cannot bind a port");
    } else {
        if (!server_->bind_to_port("127.0.0.1", port)) throw IoError("preview: cannot bind port " + std::to_string(port));
        port_ = port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

PreviewServer::~PreviewServer() { stop(); }

void PreviewServer::publish(const Raster& frame) {
    {
        std::lock_guard lock(mu_);
        latest_ = frame;
        ++seq_;
    }
    cv_.notify_all();
}

std::uint64_t PreviewServer::published() const {
    std::lock_guard lock(mu_);
    return seq_;
}

bool PreviewServer::wait_for_frame(std::uint64_t after, Raster& out, std::uint64_t& seq) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, std::chrono::milliseconds(500), [&] { return stopping_ || seq_ > after; });
    if (stopping_) return false;
    seq = seq_;
    if (seq_ > after) out = latest_;
    return true;
}

void PreviewServer::stop() {
    {
        std::lock_guard lock(mu_);
        if (stopping_) return;
        stopping_ = true;
    }
    cv_.notify_all();
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace diytab
