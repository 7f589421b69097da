#pragma once

// A child process with piped stdin/stdout (stderr merged into stdout).

#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

namespace mad {

class SpawnError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

class Subprocess
{
 public:
  using Clock = std::chrono::steady_clock;

  /// Starts `argv[0]` (looked up on PATH when it has no '/'). Throws SpawnError.
  explicit Subprocess(const std::vector<std::string>& argv);
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  /// Writes all of `data` to the child's stdin. Returns false if the child
  /// closed its input.
  bool write(const std::string& data);

  /// Reads whatever output is available, waiting at most until `deadline`.
  /// Returns false on timeout; on end of output sets `eof`.
  bool read_some(std::string& out, Clock::time_point deadline, bool& eof);

  void close_stdin();
  /// Sends SIGKILL and reaps the child.
  void kill();
  bool running() const { return d_pid > 0; }

 private:
  int d_pid = -1;
  int d_stdin = -1;
  int d_stdout = -1;

  void reap();
};

/// Absolute path of `name` on PATH, or empty.
std::string find_on_path(const std::string& name);

}  // namespace mad
