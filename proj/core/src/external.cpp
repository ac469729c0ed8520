#include "dtp/external.hpp"

#include <nlohmann/json.hpp>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <mutex>
#include <string>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace dtp {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// A dead child turns writes into SIGPIPE, which would kill the whole
// process; we want an error instead. Installed once, process-wide.
void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { std::signal(SIGPIPE, SIG_IGN); });
}

int remaining_ms(Clock::time_point deadline) {
  const auto left =
      std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return left.count() <= 0 ? 0 : static_cast<int>(left.count());
}

}  // namespace

struct ExternalPredictor::Impl {
  std::string command;
  double timeout_s;
  pid_t pid = -1;
  int to_child = -1;    // our write end of the child's stdin
  int from_child = -1;  // our read end of the child's stdout
  std::string buffer;   // bytes read but not yet consumed
  std::mutex mutex;     // one in-flight request per process

  explicit Impl(std::string cmd, double timeout) : command(std::move(cmd)), timeout_s(timeout) {
    ignore_sigpipe_once();
    int in_pipe[2];   // parent -> child
    int out_pipe[2];  // child -> parent
    if (pipe(in_pipe) != 0) {
      throw ProtocolError("pipe failed: " + std::string(std::strerror(errno)));
    }
    if (pipe(out_pipe) != 0) {
      close(in_pipe[0]);
      close(in_pipe[1]);
      throw ProtocolError("pipe failed: " + std::string(std::strerror(errno)));
    }
    pid = fork();
    if (pid < 0) {
      for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
      throw ProtocolError("fork failed: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
      // Own process group, so shutdown can kill the shell and anything it
      // forked (dash forks even simple commands here).
      setpgid(0, 0);
      dup2(in_pipe[0], STDIN_FILENO);
      dup2(out_pipe[1], STDOUT_FILENO);
      for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child = in_pipe[1];
    from_child = out_pipe[0];
  }

  ~Impl() { shutdown(); }

  void shutdown() {
    if (to_child >= 0) {
      close(to_child);  // EOF: a well-behaved endpoint exits now
      to_child = -1;
    }
    if (from_child >= 0) {
      close(from_child);
      from_child = -1;
    }
    if (pid > 0) {
      // Grace period for a clean EOF-triggered exit, then kill the whole
      // group: the shell may have forked the endpoint rather than exec'd it,
      // and stray grandchildren would otherwise outlive us holding our
      // callers' inherited pipes open.
      bool reaped = false;
      for (int i = 0; i < 100; ++i) {
        const pid_t r = waitpid(pid, nullptr, WNOHANG);
        if (r == pid || (r < 0 && errno == ECHILD)) {
          reaped = true;
          break;
        }
        usleep(10 * 1000);
      }
      if (!reaped) {
        kill(-pid, SIGKILL);
        waitpid(pid, nullptr, 0);
      }
      pid = -1;
    }
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ProtocolError("external predictor '" + command + "': " + what);
  }

  void write_line(const std::string& line, Clock::time_point deadline) {
    std::size_t off = 0;
    while (off < line.size()) {
      pollfd pfd{to_child, POLLOUT, 0};
      const int pr = poll(&pfd, 1, remaining_ms(deadline));
      if (pr == 0) fail("timed out writing request");
      if (pr < 0) fail("poll failed: " + std::string(std::strerror(errno)));
      const ssize_t n = write(to_child, line.data() + off, line.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail("write failed: " + std::string(std::strerror(errno)));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(Clock::time_point deadline) {
    while (true) {
      const auto nl = buffer.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        return line;
      }
      pollfd pfd{from_child, POLLIN, 0};
      const int pr = poll(&pfd, 1, remaining_ms(deadline));
      if (pr == 0) fail("timed out waiting for response");
      if (pr < 0) fail("poll failed: " + std::string(std::strerror(errno)));
      char chunk[4096];
      const ssize_t n = read(from_child, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        fail("read failed: " + std::string(std::strerror(errno)));
      }
      if (n == 0) fail("endpoint exited before responding");
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

ExternalPredictor::ExternalPredictor(std::string command, double timeout_s)
    : impl_(std::make_unique<Impl>(std::move(command), timeout_s)) {}

ExternalPredictor::~ExternalPredictor() = default;
ExternalPredictor::ExternalPredictor(ExternalPredictor&&) noexcept = default;
ExternalPredictor& ExternalPredictor::operator=(ExternalPredictor&&) noexcept = default;

Prediction ExternalPredictor::predict(const Scene& scene) {
  scene.validate();
  const std::size_t horizon = scene.horizon();

  Json history = Json::object();
  for (const auto& [id, traj] : scene.histories) {
    Json track = Json::array();
    for (const auto& s : traj.states) {
      track.push_back(Json::array({s.position.x(), s.position.y()}));
    }
    history[id] = std::move(track);
  }
  Json request = {
      {"schema", "dtp-predict/1"},
      {"dt", scene.target_history().dt},
      {"horizon", horizon},
      {"target", scene.target_agent},
      {"history", std::move(history)},
      {"context", nullptr},
  };

  std::lock_guard<std::mutex> lock(impl_->mutex);
  const auto deadline =
      Clock::now() + std::chrono::milliseconds(static_cast<long>(impl_->timeout_s * 1000.0));
  impl_->write_line(request.dump() + "\n", deadline);
  const std::string line = impl_->read_line(deadline);

  Json response;
  try {
    response = Json::parse(line);
  } catch (const Json::parse_error& e) {
    impl_->fail("malformed response line: " + std::string(e.what()));
  }
  if (!response.is_object() || !response.contains("prediction") ||
      !response["prediction"].is_object()) {
    impl_->fail("response lacks a prediction object");
  }

  Prediction pred;
  for (const auto& [id, track] : response["prediction"].items()) {
    if (!track.is_array()) impl_->fail("track for '" + id + "' is not an array");
    std::vector<Vec2> points;
    points.reserve(track.size());
    for (const auto& pt : track) {
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
        impl_->fail("track for '" + id + "' contains a malformed point");
      }
      const double x = pt[0].get<double>();
      const double y = pt[1].get<double>();
      if (!std::isfinite(x) || !std::isfinite(y)) {
        impl_->fail("track for '" + id + "' contains a non-finite coordinate");
      }
      points.emplace_back(x, y);
    }
    pred.positions[id] = std::move(points);
  }

  for (const auto& [id, traj] : scene.histories) {
    (void)traj;
    auto it = pred.positions.find(id);
    if (it == pred.positions.end()) {
      impl_->fail("response misses agent '" + id + "'");
    }
    if (it->second.size() != horizon) {
      impl_->fail("response horizon for '" + id + "' is " +
                  std::to_string(it->second.size()) + ", expected " +
                  std::to_string(horizon));
    }
  }
  return pred;
}

Prediction external_predict(const std::string& endpoint, const Scene& scene,
                            double timeout_s) {
  ExternalPredictor client(endpoint, timeout_s);
  return client.predict(scene);
}

}  // namespace dtp
