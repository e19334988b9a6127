#include "delsplit/service.hpp"

#include <cstdio>
#include <limits>

#include <httplib.h>
#include <json.hpp>

#include "delsplit/classifier.hpp"
#include "delsplit/strategy.hpp"

namespace delsplit {

using json = nlohmann::ordered_json;

namespace {

struct HttpError {
        int status;
        std::string code;
        std::string message;
        std::string reason;
};

Response reply(int status, const json& body) { return {status, body.dump()}; }

Response error_reply(const HttpError& e)
{
        json body;
        body["error"] = e.code;
        if (!e.reason.empty())
                body["reason"] = e.reason;
        body["message"] = e.message;
        return reply(e.status, body);
}

HttpError from_error(const Error& e)
{
        switch (e.code()) {
        case Errc::ParseError:
        case Errc::DomainError: return {400, "bad-ruleset", e.what(), {}};
        case Errc::WrongArity: return {400, "wrong-arity", e.what(), {}};
        case Errc::IllegalHeapSize: return {400, "illegal-heap-size", e.what(), {}};
        case Errc::Unsupported: return {422, "unsupported", e.what(), {}};
        case Errc::IllegalMove: return {409, "illegal-move", e.what(), e.reason()};
        case Errc::LimitExceeded: return {422, "limit-exceeded", e.what(), {}};
        case Errc::InternalContradiction: return {500, "internal-contradiction", e.what(), {}};
        }
        return {500, "internal", e.what(), {}};
}

json parse_body(std::string_view body)
{
        auto parsed = json::parse(body.begin(), body.end(), nullptr, false);
        if (parsed.is_discarded())
                throw HttpError{400, "bad-json", "request body is not valid JSON", {}};
        if (!parsed.is_object())
                throw HttpError{400, "bad-request", "request body must be a JSON object", {}};
        return parsed;
}

const json& field(const json& obj, const char* name)
{
        auto it = obj.find(name);
        if (it == obj.end())
                throw HttpError{400, "bad-request", std::string("missing field '") + name + "'", {}};
        return *it;
}

std::int64_t integer(const json& value, const char* what)
{
        if (value.is_number_unsigned()) {
                auto u = value.get<std::uint64_t>();
                if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
                        throw HttpError{400, "illegal-heap-size", std::string(what) + " is too large", {}};
                return static_cast<std::int64_t>(u);
        }
        if (value.is_number_integer())
                return value.get<std::int64_t>();
        throw HttpError{400, "bad-request", std::string(what) + " must be an integer", {}};
}

Ruleset ruleset_of(const json& body)
{
        const auto& code = field(body, "ruleset");
        if (!code.is_string())
                throw HttpError{400, "bad-request", "'ruleset' must be a string", {}};
        return Ruleset::parse(code.get<std::string>());
}

Position position_of(const json& body, const Ruleset& rules)
{
        const auto& heaps = field(body, "heaps");
        if (!heaps.is_array())
                throw HttpError{400, "bad-request", "'heaps' must be an array of integers", {}};
        std::vector<std::int64_t> values;
        for (const auto& h : heaps)
                values.push_back(integer(h, "heap size"));
        return Position::canonicalize(values, rules);
}

std::size_t index_of(const json& value)
{
        auto i = integer(value, "heap index");
        if (i < 0)
                throw Error(Errc::IllegalMove, "negative heap index", "bad-index");
        return static_cast<std::size_t>(i);
}

MoveRecord move_of(const json& body)
{
        MoveRecord move;
        const auto& deleted = field(body, "deleted");
        const auto& splits = field(body, "splits");
        if (!deleted.is_array() || !splits.is_array())
                throw HttpError{400, "bad-request", "'deleted' and 'splits' must be arrays", {}};
        for (const auto& d : deleted)
                move.deleted.push_back(index_of(d));
        for (const auto& s : splits) {
                if (!s.is_object())
                        throw HttpError{400, "bad-request", "each split must be {heap, parts}", {}};
                Split split{index_of(field(s, "heap")), {}};
                const auto& parts = field(s, "parts");
                if (!parts.is_array())
                        throw HttpError{400, "bad-request", "'parts' must be an array", {}};
                for (const auto& part : parts) {
                        auto v = integer(part, "part size");
                        if (v < 0)
                                throw Error(Errc::IllegalMove, "negative part size", "empty-part");
                        split.parts.push_back(static_cast<Heap>(v));
                }
                move.splits.push_back(std::move(split));
        }
        std::sort(move.deleted.begin(), move.deleted.end());
        std::sort(move.splits.begin(), move.splits.end(),
                  [](const Split& l, const Split& r) { return l.heap < r.heap; });
        return move;
}

json heaps_json(const Position& p) { return std::vector<Heap>(p.heaps().begin(), p.heaps().end()); }

json move_json(const MoveRecord& m)
{
        json out;
        out["deleted"] = m.deleted;
        out["splits"] = json::array();
        for (const auto& s : m.splits)
                out["splits"].push_back(json{{"heap", s.heap}, {"parts", s.parts}});
        return out;
}

const char* status_name(SessionStatus s)
{
        switch (s) {
        case SessionStatus::Ongoing: return "ongoing";
        case SessionStatus::HumanLost: return "human_lost";
        case SessionStatus::HumanWon: return "human_won";
        }
        return "ongoing";
}

const char* side_name(Side s) { return s == Side::Human ? "human" : "engine"; }

json session_json(const GameSession& s)
{
        json out;
        out["id"] = s.id;
        out["ruleset"] = s.rules.code();
        out["initial"] = heaps_json(s.initial);
        out["position"] = heaps_json(s.position);
        out["status"] = status_name(s.status);
        out["to_move"] = side_name(s.to_move);
        auto c = classify(s.rules, s.position);
        out["outcome"] = std::string(1, to_char(c.outcome));
        out["certificate"] = std::string(to_string(c.certificate.id));
        out["history"] = json::array();
        for (const auto& ply : s.history)
                out["history"].push_back(
                    json{{"by", side_name(ply.by)}, {"move", move_json(ply.move)}, {"result", heaps_json(ply.result)}});
        return out;
}

// The mover who leaves a terminal position wins.
void settle(GameSession& s, Side mover)
{
        s.to_move = mover == Side::Human ? Side::Engine : Side::Human;
        if (is_terminal(s.rules, s.position))
                s.status = mover == Side::Human ? SessionStatus::HumanWon : SessionStatus::HumanLost;
}

void require_turn(const GameSession& s, Side side)
{
        if (s.status != SessionStatus::Ongoing)
                throw HttpError{410, "game-over", std::string("game is over: ") + status_name(s.status), {}};
        if (s.to_move != side)
                throw HttpError{409, "illegal-move", std::string("it is the ") + side_name(s.to_move) + "'s turn",
                                "wrong-turn"};
}

// Splits "/api/session/<id>/<action>" into id and action.
bool session_route(std::string_view path, std::string& id, std::string& action)
{
        constexpr std::string_view prefix = "/api/session/";
        if (path.substr(0, prefix.size()) != prefix)
                return false;
        auto rest = path.substr(prefix.size());
        auto slash = rest.find('/');
        id = std::string(rest.substr(0, slash));
        action = slash == std::string_view::npos ? "" : std::string(rest.substr(slash + 1));
        return !id.empty();
}

json rulesets_json()
{
        auto bound = [](unsigned lo, unsigned hi) { return json{{"min", lo}, {"max", hi}}; };
        json list = json::array();
        list.push_back(json{{"code", "delete-nim"}, {"heaps", 2}, {"params", json::object()}});
        list.push_back(json{{"code", "vdn"}, {"heaps", 2}, {"params", json::object()}});
        list.push_back(json{{"code", "abo:n"}, {"heaps", "n"}, {"params", {{"n", bound(2, 64)}}}});
        list.push_back(json{{"code", "nmth:n"}, {"heaps", "n"}, {"params", {{"n", bound(2, 64)}}}});
        list.push_back(json{{"code", "half:m"}, {"heaps", "2m"}, {"params", {{"m", bound(1, 32)}}}});
        list.push_back(json{{"code", "kfrac:k,m"},
                            {"heaps", "km"},
                            {"params", {{"k", bound(2, 64)}, {"m", bound(1, 32)}}},
                            {"constraint", "k*m <= 64"}});
        list.push_back(json{{"code", "single:n"},
                            {"heaps", "n"},
                            {"params", {{"n", bound(2, 64)}}},
                            {"classified", bound(2, 4)}});
        return json{{"rulesets", list}};
}

} // namespace

Service::Service(ServiceConfig config) : config_(config), rng_(std::random_device{}()) {}

std::size_t Service::session_count()
{
        std::lock_guard lock(sessions_mutex_);
        evict_expired();
        return sessions_.size();
}

void Service::evict_expired()
{
        auto now = std::chrono::steady_clock::now();
        for (auto it = sessions_.begin(); it != sessions_.end();) {
                std::unique_lock slot_lock(it->second->mutex, std::try_to_lock);
                if (slot_lock.owns_lock() && now - it->second->session.touched >= config_.session_ttl)
                        it = sessions_.erase(it);
                else
                        ++it;
        }
}

std::shared_ptr<Service::Slot> Service::find(const std::string& id)
{
        std::lock_guard lock(sessions_mutex_);
        evict_expired();
        auto it = sessions_.find(id);
        if (it == sessions_.end())
                throw HttpError{404, "unknown-session", "no session '" + id + "'", {}};
        return it->second;
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body)
{
        try {
                if (path == "/api/health") {
                        if (method != "GET")
                                throw HttpError{405, "method-not-allowed", "use GET", {}};
                        return reply(200, json{{"ok", true}});
                }
                if (path == "/api/rulesets") {
                        if (method != "GET")
                                throw HttpError{405, "method-not-allowed", "use GET", {}};
                        return reply(200, rulesets_json());
                }
                if (path == "/api/classify" || path == "/api/options" || path == "/api/session") {
                        if (method != "POST")
                                throw HttpError{405, "method-not-allowed", "use POST", {}};
                        if (path == "/api/classify")
                                return classify(body);
                        if (path == "/api/options")
                                return options(body);
                        return new_session(body);
                }
                std::string id, action;
                if (session_route(path, id, action)) {
                        if (action.empty() && method == "GET")
                                return show_session(id);
                        if (action == "move" && method == "POST")
                                return human_move(id, body);
                        if (action == "engine-move" && method == "POST")
                                return engine_move(id);
                }
                throw HttpError{404, "not-found", "no route for " + std::string(method) + " " + std::string(path),
                                {}};
        } catch (const HttpError& e) {
                return error_reply(e);
        } catch (const Error& e) {
                return error_reply(from_error(e));
        }
}

Response Service::classify(std::string_view body)
{
        auto request = parse_body(body);
        auto rules = ruleset_of(request);
        auto p = position_of(request, rules);
        auto c = delsplit::classify(rules, p);
        json out;
        out["outcome"] = std::string(1, to_char(c.outcome));
        out["certificate"] = std::string(to_string(c.certificate.id));
        out["matched"] = c.certificate.matched;
        if (c.grundy)
                out["grundy"] = *c.grundy;
        out["heaps"] = heaps_json(p);
        return reply(200, out);
}

Response Service::options(std::string_view body)
{
        auto request = parse_body(body);
        auto rules = ruleset_of(request);
        auto p = position_of(request, rules);
        delsplit::classify(rules, p); // refuse uncharacterized rulesets up front
        json list = json::array();
        for (const auto& choice : legal_moves(rules, p)) {
                json option;
                option["move"] = move_json(choice.record);
                option["description"] = describe(p, choice.record);
                option["result"] = heaps_json(choice.result);
                option["outcome"] = std::string(1, to_char(delsplit::classify(rules, choice.result).outcome));
                list.push_back(std::move(option));
        }
        return reply(200, json{{"options", list}});
}

Response Service::new_session(std::string_view body)
{
        auto request = parse_body(body);
        auto rules = ruleset_of(request);
        auto p = position_of(request, rules);
        delsplit::classify(rules, p);

        Side first = Side::Human;
        if (auto it = request.find("first"); it != request.end()) {
                if (*it == "engine")
                        first = Side::Engine;
                else if (*it != "human")
                        throw HttpError{400, "bad-request", "'first' must be \"human\" or \"engine\"", {}};
        }

        auto slot = std::make_shared<Slot>();
        auto& s = slot->session;
        s.rules = rules;
        s.initial = p;
        s.position = p;
        s.to_move = first;
        s.touched = std::chrono::steady_clock::now();
        if (is_terminal(rules, p))
                s.status = first == Side::Human ? SessionStatus::HumanLost : SessionStatus::HumanWon;

        std::lock_guard lock(sessions_mutex_);
        evict_expired();
        char suffix[17];
        std::snprintf(suffix, sizeof suffix, "%016llx", static_cast<unsigned long long>(rng_()));
        s.id = "s" + std::to_string(next_id_++) + "-" + suffix;
        sessions_.emplace(s.id, slot);
        return reply(201, session_json(s));
}

Response Service::show_session(const std::string& id)
{
        auto slot = find(id);
        std::lock_guard lock(slot->mutex);
        slot->session.touched = std::chrono::steady_clock::now();
        return reply(200, session_json(slot->session));
}

Response Service::human_move(const std::string& id, std::string_view body)
{
        auto slot = find(id);
        auto request = parse_body(body);
        std::lock_guard lock(slot->mutex);
        auto& s = slot->session;
        s.touched = std::chrono::steady_clock::now();
        require_turn(s, Side::Human);
        auto move = move_of(request);
        auto next = apply(s.rules, s.position, move);
        s.history.push_back({Side::Human, std::move(move), next});
        s.position = std::move(next);
        settle(s, Side::Human);
        return reply(200, session_json(s));
}

Response Service::engine_move(const std::string& id)
{
        auto slot = find(id);
        std::lock_guard lock(slot->mutex);
        auto& s = slot->session;
        s.touched = std::chrono::steady_clock::now();
        require_turn(s, Side::Engine);

        bool expects_to_lose = false;
        auto choice = winning_move(s.rules, s.position);
        if (!choice) {
                // every move loses against perfect play; take the first in deterministic order
                expects_to_lose = true;
                choice = legal_moves(s.rules, s.position).front();
        }
        s.history.push_back({Side::Engine, choice->record, choice->result});
        s.position = choice->result;
        settle(s, Side::Engine);

        auto out = session_json(s);
        out["engine_expects_to_lose"] = expects_to_lose;
        return reply(200, out);
}

struct HttpFrontend::Impl {
        httplib::Server server;
};

HttpFrontend::HttpFrontend(Service& service) : impl_(std::make_unique<Impl>())
{
        auto route = [&service](const httplib::Request& req, httplib::Response& res) {
                auto r = service.handle(req.method, req.path, req.body);
                res.status = r.status;
                res.set_content(r.body, "application/json");
        };
        impl_->server.Get(R"(/api/.*)", route);
        impl_->server.Post(R"(/api/.*)", route);
}

HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind(const std::string& host, int port)
{
        if (port == 0)
                return impl_->server.bind_to_any_port(host);
        return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpFrontend::run() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop() { impl_->server.stop(); }

} // namespace delsplit
