#include "util/subprocess.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "core/errors.hpp"

namespace mrl::util {

namespace {

void read_all(int fd, std::string& sink) {
  char buf[4096];
  ssize_t n = 0;
  while ((n = read(fd, buf, sizeof buf)) > 0) sink.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

RunResult run_process(const std::vector<std::string>& argv) {
  if (argv.empty()) throw Error("run_process: empty argv");

  int out_pipe[2];
  int err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw Error("run_process: pipe() failed");

  const auto t0 = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) throw Error("run_process: fork() failed");

  if (pid == 0) {
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    // exec failed
    std::string msg = "exec failed: " + argv[0] + ": " + std::strerror(errno) + "\n";
    (void)!write(STDERR_FILENO, msg.data(), msg.size());
    _exit(127);
  }

  close(out_pipe[1]);
  close(err_pipe[1]);
  RunResult res;
  // drain stdout first, then stderr; kernels write little, so sequential
  // draining cannot deadlock the pipe buffers in practice, but interleave
  // anyway to stay safe with chatty tools
  fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
  fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);
  bool out_open = true;
  bool err_open = true;
  while (out_open || err_open) {
    fd_set fds;
    FD_ZERO(&fds);
    int maxfd = -1;
    if (out_open) {
      FD_SET(out_pipe[0], &fds);
      maxfd = std::max(maxfd, out_pipe[0]);
    }
    if (err_open) {
      FD_SET(err_pipe[0], &fds);
      maxfd = std::max(maxfd, err_pipe[0]);
    }
    if (select(maxfd + 1, &fds, nullptr, nullptr, nullptr) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    char buf[4096];
    if (out_open && FD_ISSET(out_pipe[0], &fds)) {
      const ssize_t n = read(out_pipe[0], buf, sizeof buf);
      if (n > 0)
        res.out.append(buf, static_cast<std::size_t>(n));
      else if (n == 0 || errno != EAGAIN)
        out_open = false;
    }
    if (err_open && FD_ISSET(err_pipe[0], &fds)) {
      const ssize_t n = read(err_pipe[0], buf, sizeof buf);
      if (n > 0)
        res.err.append(buf, static_cast<std::size_t>(n));
      else if (n == 0 || errno != EAGAIN)
        err_open = false;
    }
  }
  read_all(out_pipe[0], res.out);
  read_all(err_pipe[0], res.err);
  close(out_pipe[0]);
  close(err_pipe[0]);

  int status = 0;
  if (waitpid(pid, &status, 0) < 0) throw Error("run_process: waitpid() failed");
  res.wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (WIFEXITED(status))
    res.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    res.exit_code = 128 + WTERMSIG(status);
  return res;
}

bool executable_exists(const std::string& name) {
  if (name.find('/') != std::string::npos)
    return access(name.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::istringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    std::filesystem::path candidate = std::filesystem::path(dir) / name;
    if (access(candidate.c_str(), X_OK) == 0) return true;
  }
  return false;
}

}  // namespace mrl::util
