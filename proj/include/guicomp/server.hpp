#pragma once

// HTTP/JSON API v1 over the feedback engine.
//
//   POST /v1/feedback                    layout + options -> FeedbackBundle
//   GET  /v1/corpus/{id}/layout          template, optionally rescaled (?canvas_w&canvas_h)
//   GET  /v1/corpus/{id}/thumbnail.png   flat-color wireframe
//   GET|POST /v1/attention.png           layout body -> heatmap PNG
//   GET  /v1/health
//
// Errors are {"error":{"code","message"}}. Corpus and weights are immutable
// while serving; a reload swaps the whole state at once.

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "guicomp/attention.hpp"
#include "guicomp/autoencoder.hpp"
#include "guicomp/corpus.hpp"
#include "guicomp/errors.hpp"
#include "guicomp/feedback.hpp"
#include "guicomp/layout.hpp"
#include "guicomp/wireframe.hpp"

#include <httplib.h>

namespace guicomp {

struct ServiceState {
  Corpus corpus;
  std::optional<AutoencoderWeights<float>> weights;
};

// Checks that corpus and weights agree. A fallback-mode corpus served with
// weights is re-embedded so queries and index use the same space.
inline std::shared_ptr<const ServiceState> make_service_state(
    Corpus corpus, std::optional<AutoencoderWeights<float>> weights) {
  if (weights && (weights->input_dim() != kRasterSize || weights->embedding_dim() != kEmbeddingDim))
    throw ValidationError("weights must map 13500 inputs to 64-d embeddings");
  if (corpus.embedding_mode() == EmbeddingMode::trained && !weights)
    throw ValidationError("index holds trained embeddings; --weights is required to embed queries");
  if (corpus.embedding_mode() == EmbeddingMode::fallback && weights)
    corpus = embed_corpus(corpus, *weights);
  return std::make_shared<const ServiceState>(ServiceState{std::move(corpus), std::move(weights)});
}

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

inline HttpResponse error_response(int status, std::string_view code, std::string_view message) {
  nlohmann::json j = {{"error", {{"code", code}, {"message", message}}}};
  return {status, j.dump(), "application/json"};
}

inline int status_for(const Error& e) {
  if (dynamic_cast<const NotFoundError*>(&e)) return 404;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
      dynamic_cast<const ArgumentError*>(&e))
    return 400;
  return 500;
}

class FeedbackService {
 public:
  explicit FeedbackService(std::shared_ptr<const ServiceState> state,
                           std::shared_ptr<const AttentionModel> model =
                               std::make_shared<BaselineSaliencyModel>())
      : state_(std::move(state)), model_(std::move(model)) {}

  std::shared_ptr<const ServiceState> state() const {
    std::lock_guard lock(mu_);
    return state_;
  }

  void swap_state(std::shared_ptr<const ServiceState> next) {
    std::lock_guard lock(mu_);
    state_ = std::move(next);
  }

  HttpResponse health() const {
    const auto s = state();
    nlohmann::json j = {{"status", "ok"},
                        {"corpus_size", s->corpus.size()},
                        {"embedding_mode", std::string(to_string(s->corpus.embedding_mode()))},
                        {"attention_model", model_->name()}};
    return {200, j.dump(), "application/json"};
  }

  HttpResponse feedback(std::string_view body) const {
    return guarded([&] {
      const auto req = parse_body(body);
      const auto it = req.find("layout");
      if (it == req.end()) throw ValidationError("request body needs a 'layout' field");
      const LayoutDocument doc = layout_from_json(*it);
      const RecommendOptions opt = parse_options(req);
      const auto s = state();
      const auto bundle = assemble_feedback(doc, s->corpus, opt, *model_,
                                            s->weights ? &*s->weights : nullptr);
      auto j = to_json(bundle);
      if (!doc.warnings.empty()) j["warnings"] = doc.warnings;
      return HttpResponse{200, j.dump(), "application/json"};
    });
  }

  HttpResponse corpus_layout(std::string_view id, std::optional<std::string> canvas_w,
                             std::optional<std::string> canvas_h) const {
    return guarded([&] {
      const auto s = state();
      const CorpusEntry* e = s->corpus.find(id);
      if (!e) throw NotFoundError("no corpus entry '" + std::string(id) + "'");
      if (canvas_w.has_value() != canvas_h.has_value())
        throw ArgumentError("canvas_w and canvas_h must be given together");
      if (!canvas_w) return HttpResponse{200, layout_to_json(e->doc).dump(), "application/json"};
      const auto w = parse_int(*canvas_w, "canvas_w");
      const auto h = parse_int(*canvas_h, "canvas_h");
      return HttpResponse{200, layout_to_json(scale_to_canvas(e->doc, w, h)).dump(),
                          "application/json"};
    });
  }

  HttpResponse thumbnail(std::string_view id) const {
    return guarded([&] {
      const auto s = state();
      const CorpusEntry* e = s->corpus.find(id);
      if (!e) throw NotFoundError("no corpus entry '" + std::string(id) + "'");
      return HttpResponse{200, render_wireframe_png(e->doc), "image/png"};
    });
  }

  HttpResponse attention_png(std::string_view body) const {
    return guarded([&] {
      auto req = parse_body(body);
      // Accept either a bare layout or {"layout": ...}.
      const auto it = req.find("layout");
      const LayoutDocument doc = layout_from_json(it != req.end() ? *it : req);
      return HttpResponse{200, render_heatmap_png(attention_map(doc, *model_)), "image/png"};
    });
  }

  void mount(httplib::Server& server) const {
    auto send = [](httplib::Response& res, const HttpResponse& r) {
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
    server.Get("/v1/health", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, health());
    });
    server.Post("/v1/feedback", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, feedback(req.body));
    });
    server.Get(R"(/v1/corpus/([^/]+)/layout)",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 auto param = [&](const char* key) -> std::optional<std::string> {
                   if (!req.has_param(key)) return std::nullopt;
                   return req.get_param_value(key);
                 };
                 send(res, corpus_layout(req.matches[1].str(), param("canvas_w"), param("canvas_h")));
               });
    server.Get(R"(/v1/corpus/([^/]+)/thumbnail\.png)",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 send(res, thumbnail(req.matches[1].str()));
               });
    auto attention = [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, attention_png(req.body));
    };
    server.Get("/v1/attention.png", attention);
    server.Post("/v1/attention.png", attention);
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      const auto r = error_response(res.status, res.status == 404 ? "not_found" : "http_error",
                                    res.status == 404 ? "no such route" : "request failed");
      res.set_content(r.body, r.content_type);
    });
  }

 private:
  template <typename F>
  static HttpResponse guarded(F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      return error_response(status_for(e), e.code(), e.what());
    } catch (const std::exception& e) {
      return error_response(500, "internal_error", e.what());
    }
  }

  static nlohmann::json parse_body(std::string_view body) {
    try {
      auto j = nlohmann::json::parse(body.begin(), body.end());
      if (!j.is_object()) throw ValidationError("request body must be a JSON object");
      return j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what(), e.byte);
    }
  }

  static std::int64_t parse_int(const std::string& s, const char* name) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ArgumentError(std::string(name) + " must be an integer");
    return v;
  }

  static RecommendOptions parse_options(const nlohmann::json& req) {
    RecommendOptions opt;
    opt.seed = static_cast<std::uint64_t>(
        std::chrono::system_clock::now().time_since_epoch().count());
    const auto it = req.find("options");
    if (it == req.end() || it->is_null()) return opt;
    if (!it->is_object()) throw ValidationError("options must be an object");
    const auto& o = *it;
    auto count = [&](const char* key, std::size_t& dst) {
      if (auto f = o.find(key); f != o.end() && !f->is_null()) {
        if (!f->is_number_unsigned()) throw ValidationError(std::string(key) + " must be a non-negative integer");
        dst = f->get<std::size_t>();
      }
    };
    count("k_similar", opt.k_similar);
    count("n_random", opt.n_random);
    if (opt.k_similar > 1000 || opt.n_random > 1000) throw ValidationError("too many recommendations requested");
    if (auto f = o.find("seed"); f != o.end() && !f->is_null()) {
      if (!f->is_number_integer()) throw ValidationError("seed must be an integer");
      opt.seed = f->is_number_unsigned() ? f->get<std::uint64_t>()
                                         : static_cast<std::uint64_t>(f->get<std::int64_t>());
    }
    if (auto f = o.find("min_rating"); f != o.end() && !f->is_null()) {
      if (!f->is_number()) throw ValidationError("min_rating must be a number");
      opt.min_rating = f->get<double>();
    }
    if (auto f = o.find("category"); f != o.end() && !f->is_null()) {
      if (!f->is_string()) throw ValidationError("category must be a string");
      opt.category = f->get<std::string>();
    }
    return opt;
  }

  mutable std::mutex mu_;
  std::shared_ptr<const ServiceState> state_;
  std::shared_ptr<const AttentionModel> model_;
};

// Owns an httplib server running the API on a background thread.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<FeedbackService> service) : service_(std::move(service)) {
    service_->mount(server_);
  }
  ~HttpServer() { stop(); }

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and starts serving; port 0 picks a free port. Returns the bound port.
  int start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
      bound = server_.bind_to_any_port(host);
      if (bound < 0) throw IoError("cannot bind " + host);
    } else if (!server_.bind_to_port(host, port)) {
      throw IoError("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
    }
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  // Binds and serves on the calling thread until stop().
  void run(const std::string& host, int port) {
    if (!server_.bind_to_port(host, port))
      throw IoError("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
    server_.listen_after_bind();
  }

  void stop() {
    if (server_.is_running()) server_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  std::shared_ptr<FeedbackService> service_;
  httplib::Server server_;
  std::thread thread_;
};

}  // namespace guicomp
