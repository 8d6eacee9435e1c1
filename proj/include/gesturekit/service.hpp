#ifndef GESTUREKIT_SERVICE_HPP
#define GESTUREKIT_SERVICE_HPP

#include "gesturekit/config.hpp"
#include "gesturekit/store.hpp"
#include "gesturekit/trace.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace gesturekit {

/// Handler result, independent of the HTTP transport.
struct Response {
  int status = 200;
  nlohmann::json body;
};

/// Interpretive label for an enrollment's mean MI. Heuristic cut points:
/// below 15 bits weak, above 30 strong.
std::string_view security_band(double mean_bits);

struct EnrollmentSession {
  std::string session_id;
  std::string gesture_id;
  std::vector<GestureTrace> collected;
  std::size_t required_reps = 10;
  bool complete = false;
  bool overwrite = false;
  std::mutex mutex;  // one writer per session
};

class Service {
public:
  explicit Service(Config config);

  Response enroll_start(const std::string& body, bool overwrite);
  Response enroll_trace(const std::string& session_id, const std::string& body);
  Response auth(const std::string& body);
  Response analyze_mi(const std::string& body);

  /// Registers the routes on an httplib server.
  void mount(httplib::Server& server);

  const Config& config() const { return config_; }
  TemplateStore& store() { return store_; }

private:
  std::shared_ptr<EnrollmentSession> find_session(const std::string& session_id);
  std::string next_session_id();

  Config config_;
  TemplateStore store_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<EnrollmentSession>> sessions_;
  unsigned long long session_counter_ = 0;
  unsigned long long session_salt_ = 0;
};

/// Blocks serving on config.port until the server is stopped.
void run_server(Service& service, const std::string& host = "0.0.0.0");

}  // namespace gesturekit

#endif  // GESTUREKIT_SERVICE_HPP
