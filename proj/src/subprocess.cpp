#include "mad/subprocess.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <mutex>
#include <poll.h>
#include <sstream>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

namespace mad {

namespace {

void
ignore_sigpipe()
{
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

bool
executable(const std::string& path)
{
  struct stat st;
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(path.c_str(), X_OK) == 0;
}

}  // namespace

std::string
find_on_path(const std::string& name)
{
  if (name.find('/') != std::string::npos) return executable(name) ? name : "";
  const char* path = std::getenv("PATH");
  if (!path) return "";
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':'))
  {
    if (dir.empty()) dir = ".";
    std::string candidate = dir + "/" + name;
    if (executable(candidate)) return candidate;
  }
  return "";
}

Subprocess::Subprocess(const std::vector<std::string>& argv)
{
  ignore_sigpipe();
  if (argv.empty()) throw SpawnError("empty command");
  std::string exe = find_on_path(argv[0]);
  if (exe.empty()) throw SpawnError("executable not found: " + argv[0]);

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0
      || ::pipe2(err_pipe, O_CLOEXEC) != 0)
  {
    throw SpawnError(std::string("pipe: ") + std::strerror(errno));
  }

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) throw SpawnError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0)
  {
    ::dup2(in_pipe[0], 0);
    ::dup2(out_pipe[1], 1);
    ::dup2(out_pipe[1], 2);
    ::execv(exe.c_str(), args.data());
    int e = errno;
    [[maybe_unused]] auto n = ::write(err_pipe[1], &e, sizeof e);
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  int child_errno = 0;
  ssize_t n = ::read(err_pipe[0], &child_errno, sizeof child_errno);
  ::close(err_pipe[0]);
  d_pid = pid;
  d_stdin = in_pipe[1];
  d_stdout = out_pipe[0];
  if (n == sizeof child_errno)
  {
    kill();
    throw SpawnError("cannot execute " + exe + ": " + std::strerror(child_errno));
  }
}

Subprocess::~Subprocess()
{
  kill();
}

bool
Subprocess::write(const std::string& data)
{
  std::size_t off = 0;
  while (off < data.size())
  {
    ssize_t n = ::write(d_stdin, data.data() + off, data.size() - off);
    if (n < 0)
    {
      if (errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

bool
Subprocess::read_some(std::string& out, Clock::time_point deadline, bool& eof)
{
  eof = false;
  for (;;)
  {
    auto now = Clock::now();
    if (now >= deadline) return false;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{d_stdout, POLLIN, 0};
    int r = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(ms + 1, 1 << 30)));
    if (r < 0)
    {
      if (errno == EINTR) continue;
      eof = true;
      return true;
    }
    if (r == 0) continue;
    char buf[65536];
    ssize_t n = ::read(d_stdout, buf, sizeof buf);
    if (n < 0)
    {
      if (errno == EINTR || errno == EAGAIN) continue;
      eof = true;
      return true;
    }
    if (n == 0)
    {
      eof = true;
      return true;
    }
    out.append(buf, static_cast<std::size_t>(n));
    return true;
  }
}

void
Subprocess::close_stdin()
{
  if (d_stdin >= 0)
  {
    ::close(d_stdin);
    d_stdin = -1;
  }
}

void
Subprocess::kill()
{
  close_stdin();
  if (d_stdout >= 0)
  {
    ::close(d_stdout);
    d_stdout = -1;
  }
  if (d_pid > 0)
  {
    ::kill(d_pid, SIGKILL);
    reap();
  }
}

void
Subprocess::reap()
{
  int status = 0;
  while (::waitpid(d_pid, &status, 0) < 0 && errno == EINTR)
  {
  }
  d_pid = -1;
}

}  // namespace mad
