#include "trajevo/exec/runner.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <mutex>

#include "trajevo/assets.hpp"
#include "trajevo/error.hpp"
#include "trajevo/util/text.hpp"

namespace fs = std::filesystem;

namespace trajevo::exec {

void ExecLimits::validate() const {
  if (wall_timeout <= 0.0) throw Error::config("wall_timeout must be > 0");
  if (max_output_bytes == 0) throw Error::config("max_output_bytes must be > 0");
  if (batch_size == 0) throw Error::config("batch_size must be > 0");
}

std::vector<std::string> InterpreterProfile::expand(const std::string& source_path,
                                                    std::uint64_t seed) const {
  std::vector<std::string> argv;
  argv.reserve(argv_template.size());
  for (const std::string& part : argv_template) {
    std::string expanded = replace_all(part, "{source}", source_path);
    expanded = replace_all(expanded, "{seed}", std::to_string(seed));
    if (expanded.find("{shim}") != std::string::npos)
      expanded = replace_all(expanded, "{shim}", asset_path(shim_asset));
    argv.push_back(std::move(expanded));
  }
  return argv;
}

namespace {

constexpr std::size_t kStderrTailBytes = 4096;

void set_nonblocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void append_tail(std::string& tail, const char* data, std::size_t n) {
  tail.append(data, n);
  if (tail.size() > kStderrTailBytes)
    tail.erase(0, tail.size() - kStderrTailBytes);
}

// A candidate that dies mid-read must not take the engine with it.
void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& stdin_data, double wall_timeout,
                          std::size_t max_output_bytes) {
  if (argv.empty()) throw Error(Errc::internal, "empty argv");
  ignore_sigpipe_once();

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw Error(Errc::internal, std::string("pipe: ") + std::strerror(errno));

  const pid_t pid = fork();
  if (pid < 0) throw Error(Errc::internal, std::string("fork: ") + std::strerror(errno));

  if (pid == 0) {
    // Child: own process group so the whole tree can be killed at once.
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0],
                   err_pipe[1]})
      close(fd);
    std::vector<char*> cargv;
    for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    // Exec failed; report over the inherited stderr and bail.
    const char* msg = "exec failed\n";
    ssize_t ignored = write(STDERR_FILENO, msg, std::strlen(msg));
    (void)ignored;
    _exit(127);
  }

  // Parent. Mirror setpgid to close the race either way.
  setpgid(pid, pid);
  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);
  set_nonblocking(in_pipe[1]);
  set_nonblocking(out_pipe[0]);
  set_nonblocking(err_pipe[0]);

  ProcessResult result;
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + std::chrono::duration<double>(wall_timeout);

  int stdin_fd = in_pipe[1], stdout_fd = out_pipe[0], stderr_fd = err_pipe[0];
  std::size_t written = 0;
  bool killed = false;
  char buf[65536];

  auto kill_group = [&]() {
    if (!killed) {
      killpg(pid, SIGKILL);
      killed = true;
    }
  };

  while (stdout_fd >= 0 || stderr_fd >= 0) {
    struct pollfd fds[3];
    int nfds = 0;
    int stdin_slot = -1, stdout_slot = -1, stderr_slot = -1;
    if (stdin_fd >= 0) {
      stdin_slot = nfds;
      fds[nfds++] = {stdin_fd, POLLOUT, 0};
    }
    if (stdout_fd >= 0) {
      stdout_slot = nfds;
      fds[nfds++] = {stdout_fd, POLLIN, 0};
    }
    if (stderr_fd >= 0) {
      stderr_slot = nfds;
      fds[nfds++] = {stderr_fd, POLLIN, 0};
    }

    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      kill_group();
      // One final drain pass after the kill, then stop.
      break;
    }
    const int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count()) +
        1;
    const int rc = poll(fds, static_cast<nfds_t>(nfds), wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      kill_group();
      break;
    }
    if (rc == 0) continue;  // loop re-checks the deadline

    if (stdin_slot >= 0 && (fds[stdin_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[stdin_slot].revents & (POLLERR | POLLHUP)) {
        close(stdin_fd);
        stdin_fd = -1;
      } else {
        const ssize_t n = write(stdin_fd, stdin_data.data() + written,
                                std::min<std::size_t>(stdin_data.size() - written, 65536));
        if (n > 0) written += static_cast<std::size_t>(n);
        if ((n < 0 && errno != EAGAIN && errno != EINTR) ||
            written == stdin_data.size()) {
          close(stdin_fd);
          stdin_fd = -1;
        }
      }
    }
    if (stdout_slot >= 0 && (fds[stdout_slot].revents & (POLLIN | POLLHUP | POLLERR))) {
      const ssize_t n = read(stdout_fd, buf, sizeof(buf));
      if (n > 0) {
        const std::size_t room = max_output_bytes - result.stdout_data.size();
        if (static_cast<std::size_t>(n) > room) {
          result.stdout_data.append(buf, room);
          result.stdout_capped = true;
          kill_group();
          close(stdout_fd);
          stdout_fd = -1;
        } else {
          result.stdout_data.append(buf, static_cast<std::size_t>(n));
        }
      } else if (n == 0 || (n < 0 && errno != EAGAIN && errno != EINTR)) {
        close(stdout_fd);
        stdout_fd = -1;
      }
    }
    if (stderr_slot >= 0 && (fds[stderr_slot].revents & (POLLIN | POLLHUP | POLLERR))) {
      const ssize_t n = read(stderr_fd, buf, sizeof(buf));
      if (n > 0) {
        append_tail(result.stderr_tail, buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (n < 0 && errno != EAGAIN && errno != EINTR)) {
        close(stderr_fd);
        stderr_fd = -1;
      }
    }
  }

  if (stdin_fd >= 0) close(stdin_fd);
  if (stdout_fd >= 0) close(stdout_fd);
  if (stderr_fd >= 0) close(stderr_fd);

  if (result.timed_out) kill_group();
  int status = 0;
  waitpid(pid, &status, 0);
  // Sweep any grandchildren that survived in the group.
  killpg(pid, SIGKILL);

  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.exit_code = 128 + WTERMSIG(status);
  result.elapsed_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

ExecOutcome execute(const std::string& source,
                    const std::vector<TrajectoryWindow>& windows,
                    const ExecLimits& limits, const InterpreterProfile& profile,
                    const std::string& work_dir, std::uint64_t seed,
                    std::size_t num_samples) {
  limits.validate();
  ExecOutcome outcome;

  fs::create_directories(work_dir);
  const std::string source_path =
      (fs::path(work_dir) /
       ("candidate_" + sha256_hex(source).substr(0, 16) + profile.source_suffix))
          .string();
  write_file(source_path, source);
  const std::vector<std::string> argv = profile.expand(source_path, seed);

  std::size_t begin = 0;
  do {
    const std::size_t end =
        begin + std::min(limits.batch_size, windows.size() - begin);
    const std::vector<TrajectoryWindow> batch(windows.begin() + begin,
                                              windows.begin() + end);
    begin = end;
    const std::string request = frame_request(batch, num_samples);
    const ProcessResult proc =
        run_process(argv, request, limits.wall_timeout, limits.max_output_bytes);
    outcome.elapsed_s += proc.elapsed_s;
    outcome.stderr_tail = proc.stderr_tail;

    if (proc.timed_out) {
      outcome.status = CandidateStatus::timeout;
      outcome.detail = "wall timeout after " + fmt_g9(limits.wall_timeout) + "s";
      return outcome;
    }
    if (proc.stdout_capped) {
      // The flood was cut off (and the process killed); classify by what the
      // captured prefix looks like, never as an engine-side failure.
      ParseResult parsed = parse_response(proc.stdout_data, batch, num_samples);
      outcome.status = CandidateStatus::invalid_output;
      outcome.invalid_reason =
          to_string(parsed.ok ? InvalidReason::wrong_count : parsed.reason);
      outcome.detail = "stdout exceeded " + std::to_string(limits.max_output_bytes) +
                       " bytes";
      return outcome;
    }
    if (proc.exit_code != 0) {
      outcome.status = CandidateStatus::crash;
      outcome.detail = "exit code " + std::to_string(proc.exit_code);
      return outcome;
    }
    ParseResult parsed = parse_response(proc.stdout_data, batch, num_samples);
    if (!parsed.ok) {
      outcome.status = CandidateStatus::invalid_output;
      outcome.invalid_reason = to_string(parsed.reason);
      outcome.detail = parsed.detail;
      return outcome;
    }
    for (auto& ps : parsed.predictions)
      outcome.predictions.push_back(std::move(ps));
  } while (begin < windows.size());

  outcome.status = CandidateStatus::ok;
  return outcome;
}

}  // namespace trajevo::exec
