// JSON-over-HTTP facade: classification, option listing, and play sessions
// against the perfect-play engine.
//
// Service::handle is the transport-free core (method, path, body) -> response;
// serve() binds it to an HTTP listener.

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "delsplit/game.hpp"

namespace delsplit {

struct Response {
        int status = 200;
        std::string body;
};

enum class SessionStatus { Ongoing, HumanLost, HumanWon };
enum class Side { Human, Engine };

struct Ply {
        Side by;
        MoveRecord move;
        Position result;
};

struct GameSession {
        std::string id;
        Ruleset rules = Ruleset::vdn();
        Position initial;
        Position position;
        std::vector<Ply> history;
        SessionStatus status = SessionStatus::Ongoing;
        Side to_move = Side::Human;
        std::chrono::steady_clock::time_point touched;
};

struct ServiceConfig {
        std::chrono::milliseconds session_ttl = std::chrono::hours(1);
};

class Service {
public:
        explicit Service(ServiceConfig config = {});

        Response handle(std::string_view method, std::string_view path, std::string_view body);

        std::size_t session_count();

private:
        struct Slot {
                std::mutex mutex;
                GameSession session;
        };

        Response classify(std::string_view body);
        Response options(std::string_view body);
        Response new_session(std::string_view body);
        Response human_move(const std::string& id, std::string_view body);
        Response engine_move(const std::string& id);
        Response show_session(const std::string& id);

        std::shared_ptr<Slot> find(const std::string& id);
        void evict_expired();

        ServiceConfig config_;
        std::mutex sessions_mutex_;
        std::map<std::string, std::shared_ptr<Slot>> sessions_;
        std::uint64_t next_id_ = 1;
        std::mt19937_64 rng_;
};

/// HTTP listener routing /api/* to a Service.
class HttpFrontend {
public:
        explicit HttpFrontend(Service& service);
        ~HttpFrontend();

        /// Binds host:port (port 0 picks a free port). Returns the bound port or -1.
        int bind(const std::string& host, int port);
        /// Serves until stop() is called.
        void run();
        void stop();

private:
        struct Impl;
        std::unique_ptr<Impl> impl_;
};

} // namespace delsplit
