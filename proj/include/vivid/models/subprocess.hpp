/*
 * Copyright 2026 The vivid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Predictor backed by a child process speaking newline-delimited JSON:
//
//   handshake  -> {"hello":1}                 <- {"hello":1}
//   request    -> {"id":7,"cols":[..],"rows":[[..],..]}
//   response   <- {"id":7,"preds":[..]}       or {"id":7,"error":"msg"}
//
// Categorical cells travel as their level strings.

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <memory>

#include "json.hpp"
#include "vivid/predictor.hpp"

extern char** environ;

namespace vivid {

namespace detail {

class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command) {
    static const bool sigpipe_ignored = [] {
      ::signal(SIGPIPE, SIG_IGN);
      return true;
    }();
    (void)sigpipe_ignored;

    int in_pipe[2];   // parent writes -> child stdin
    int out_pipe[2];  // child stdout -> parent reads
    if (::pipe(in_pipe) != 0) throw Error("external predictor: pipe() failed");
    if (::pipe(out_pipe) != 0) {
      ::close(in_pipe[0]);
      ::close(in_pipe[1]);
      throw Error("external predictor: pipe() failed");
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
    posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
    std::string sh = "/bin/sh", dash_c = "-c", cmd = command;
    char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};
    const int rc = ::posix_spawn(&pid_, "/bin/sh", &actions, nullptr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    if (rc != 0) {
      ::close(in_pipe[1]);
      ::close(out_pipe[0]);
      throw Error("external predictor: cannot launch '" + command + "': " + std::strerror(rc));
    }
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  ~ChildProcess() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    if (pid_ > 0) {
      int status = 0;
      for (int attempt = 0; attempt < 200; ++attempt) {
        if (::waitpid(pid_, &status, WNOHANG) != 0) return;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
  }

  void write_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t w = ::write(to_child_, data.data() + off, data.size() - off);
      if (w < 0) {
        if (errno == EINTR) continue;
        throw Error("external predictor: process is not accepting input (exited?)");
      }
      off += static_cast<std::size_t>(w);
    }
  }

  std::string read_line() {
    while (true) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      char chunk[65536];
      const ssize_t r = ::read(from_child_, chunk, sizeof(chunk));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw Error("external predictor: read failed");
      }
      if (r == 0) throw Error("external predictor: process exited unexpectedly");
      buffer_.append(chunk, static_cast<std::size_t>(r));
    }
  }

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

inline nlohmann::json parse_line(const std::string& line) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw Error("external predictor: malformed response line: " + line.substr(0, 200));
  return j;
}

}  // namespace detail

// Requests go to one of `pool_size` children; each child serves one request
// at a time.
class SubprocessPredictor final : public Predictor {
 public:
  SubprocessPredictor(std::string command, std::vector<ColumnSchema> schema,
                      std::size_t pool_size = 1)
      : Predictor(names_of(schema)), command_(std::move(command)), schema_(std::move(schema)) {
    if (pool_size < 1) throw Error("external predictor: pool size must be at least 1");
    for (std::size_t k = 0; k < pool_size; ++k) {
      auto child = std::make_unique<detail::ChildProcess>(command_);
      handshake(*child);
      children_.push_back(std::move(child));
      busy_.push_back(false);
    }
  }

  PredictorKind kind() const override { return PredictorKind::external_subprocess; }
  const std::string& command() const { return command_; }

  // Wire form of a batch; exposed for protocol tests.
  static nlohmann::ordered_json encode_request(std::int64_t id, const FeatureFrame& batch) {
    nlohmann::ordered_json req;
    req["id"] = id;
    auto cols = nlohmann::ordered_json::array();
    for (const auto& s : batch.schema) cols.push_back(s.name);
    req["cols"] = std::move(cols);
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < batch.n_rows(); ++i) {
      auto row = nlohmann::ordered_json::array();
      for (std::size_t j = 0; j < batch.n_cols(); ++j) {
        const double v = batch.columns[j][i];
        if (batch.schema[j].kind == ColumnKind::categorical)
          row.push_back(batch.schema[j].levels.at(static_cast<std::size_t>(v)));
        else
          row.push_back(v);
      }
      rows.push_back(std::move(row));
    }
    req["rows"] = std::move(rows);
    return req;
  }

 protected:
  std::vector<double> predict_unchecked(const FeatureFrame& batch) const override {
    const std::int64_t id = next_id_.fetch_add(1);
    const std::string request = encode_request(id, batch).dump();
    const std::size_t slot = acquire();
    struct Release {
      const SubprocessPredictor* self;
      std::size_t slot;
      ~Release() { self->release(slot); }
    } release{this, slot};

    auto& child = *children_[slot];
    child.write_line(request);
    const auto resp = detail::parse_line(child.read_line());
    if (resp.contains("error")) {
      throw Error("external predictor error: " +
                  (resp["error"].is_string() ? resp["error"].get<std::string>()
                                             : resp["error"].dump()));
    }
    if (!resp.contains("id") || !resp["id"].is_number_integer() ||
        resp["id"].get<std::int64_t>() != id)
      throw Error("external predictor: response id does not match request " + std::to_string(id));
    if (!resp.contains("preds") || !resp["preds"].is_array())
      throw Error("external predictor: response lacks a preds array");
    const auto& preds = resp["preds"];
    if (preds.size() != batch.n_rows())
      throw Error("external predictor: expected " + std::to_string(batch.n_rows()) +
                  " predictions, got " + std::to_string(preds.size()));
    std::vector<double> out;
    out.reserve(preds.size());
    for (const auto& p : preds) {
      if (!p.is_number()) throw Error("external predictor: non-numeric prediction");
      out.push_back(p.get<double>());
    }
    return out;
  }

 private:
  static std::vector<std::string> names_of(const std::vector<ColumnSchema>& schema) {
    std::vector<std::string> names;
    for (const auto& s : schema) names.push_back(s.name);
    return names;
  }

  static void handshake(detail::ChildProcess& child) {
    child.write_line(R"({"hello":1})");
    const auto resp = detail::parse_line(child.read_line());
    if (resp != nlohmann::json{{"hello", 1}})
      throw Error("external predictor: bad handshake response: " + resp.dump());
  }

  std::size_t acquire() const {
    std::unique_lock<std::mutex> lock(mutex_);
    while (true) {
      for (std::size_t k = 0; k < busy_.size(); ++k) {
        if (!busy_[k]) {
          busy_[k] = true;
          return k;
        }
      }
      available_.wait(lock);
    }
  }

  void release(std::size_t slot) const {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      busy_[slot] = false;
    }
    available_.notify_one();
  }

  std::string command_;
  std::vector<ColumnSchema> schema_;
  std::vector<std::unique_ptr<detail::ChildProcess>> children_;
  mutable std::vector<bool> busy_;
  mutable std::mutex mutex_;
  mutable std::condition_variable available_;
  mutable std::atomic<std::int64_t> next_id_{1};
};

}  // namespace vivid
