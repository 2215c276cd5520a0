#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace algsim {

// Configuration problems (bad JSON, schema violations, inconsistent values).
// `path` is a JSON-pointer-ish location when the error comes from a config
// file, empty otherwise.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class HttpParseError : public std::runtime_error {
 public:
  explicit HttpParseError(const std::string& m) : std::runtime_error(m) {}
};

class FtpParseError : public std::runtime_error {
 public:
  explicit FtpParseError(const std::string& m) : std::runtime_error(m) {}
};

class DocFormatError : public std::runtime_error {
 public:
  explicit DocFormatError(const std::string& m) : std::runtime_error(m) {}
};

class FrameError : public std::runtime_error {
 public:
  explicit FrameError(const std::string& m) : std::runtime_error(m) {}
};

// Regex compilation failure; `position` is the 1-based column of the
// offending character in the pattern source.
class PatternSyntaxError : public std::runtime_error {
 public:
  PatternSyntaxError(std::size_t position, const std::string& m)
      : std::runtime_error(m + " (at " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownHostError : public std::runtime_error {
 public:
  explicit UnknownHostError(const std::string& host)
      : std::runtime_error("unknown host '" + host + "'") {}
};

class UnknownScenarioError : public std::runtime_error {
 public:
  explicit UnknownScenarioError(const std::string& id)
      : std::runtime_error("unknown scenario '" + id + "'") {}
};

// The event budget of a simulation run was exhausted.
class SimOverrunError : public std::runtime_error {
 public:
  explicit SimOverrunError(std::uint64_t budget)
      : std::runtime_error("simulation exceeded event budget of " +
                           std::to_string(budget)) {}
};

// latency_of() was asked about a frame that never completed gateway service.
class NotCompletedError : public std::runtime_error {
 public:
  explicit NotCompletedError(std::uint64_t frame_id)
      : std::runtime_error("frame " + std::to_string(frame_id) +
                           " did not complete gateway service") {}
};

}  // namespace algsim
