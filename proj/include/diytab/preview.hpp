#pragma once

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <thread>

#include "diytab/raster.hpp"

namespace httplib {
class Server;
}

namespace diytab {

/// Read-only MJPEG preview over HTTP: `GET /stream` is a
/// multipart/x-mixed-replace stream of JPEG parts, `GET /snapshot.jpg` the
/// latest frame. Only the newest published frame is kept, so slow clients
/// skip frames and never block the publisher.
class PreviewServer {
public:
    /// Binds 127.0.0.1:port (0 picks a free port); throws IoError.
    explicit PreviewServer(int port);
    ~PreviewServer();
    PreviewServer(const PreviewServer&) = delete;
    PreviewServer& operator=(const PreviewServer&) = delete;

    int port() const { return port_; }
    void publish(const Raster& frame);
    std::uint64_t published() const;
    void stop();

private:
    bool wait_for_frame(std::uint64_t after, Raster& out, std::uint64_t& seq);

    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    Raster latest_;
    std::uint64_t seq_ = 0;
    bool stopping_ = false;
};

}  // namespace diytab
