#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "dgcomics/clustering.hpp"
#include "dgcomics/comic.hpp"
#include "dgcomics/community.hpp"
#include "dgcomics/session.hpp"
#include "dgcomics/store.hpp"

namespace httplib {
class Server;
}

namespace dgc {

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::string content_type;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

struct ServiceOptions {
  std::filesystem::path data_dir;
  CaptionTemplates captions;
  Exec exec = Exec::parallel;
};

// Transport-independent request handling; HttpServer adapts it to HTTP/1.1.
// Errors map to 400 (validation, with a JSON pointer when available), 404 (unknown ids)
// and 409 (stale session version). Every response carries CORS headers.
class Service {
 public:
  explicit Service(ServiceOptions opts);

  HttpResponse handle(const HttpRequest& req);

  DatasetStore& datasets() { return datasets_; }
  SessionStore& sessions() { return sessions_; }
  std::shared_ptr<const Dendrogram> dendrogram(const std::string& dataset, const Scope& scope, Aggregation agg);
  std::shared_ptr<const CommunityTimeline> communities(const std::string& dataset, const CommunityMethod& method,
                                                       const TimelineOptions& opts);

 private:
  HttpResponse route(const HttpRequest& req);

  ServiceOptions opts_;
  DatasetStore datasets_;
  SessionStore sessions_;
  std::mutex cache_mutex_;
  std::map<std::string, std::shared_ptr<const Dendrogram>> dendrograms_;
  std::map<std::string, std::shared_ptr<const CommunityTimeline>> timelines_;
};

class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws IoError on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace dgc
