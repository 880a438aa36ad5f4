#pragma once

#include "swapmap/cnf.hpp"
#include "swapmap/error.hpp"
#include "swapmap/solver.hpp"

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <algorithm>
#include <optional>
#include <fstream>
#include <sstream>
#include <string>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace swapmap {

/**
 * Parses competition-style solver output: an `s SATISFIABLE`,
 * `s UNSATISFIABLE` or `s UNKNOWN` line plus `v` lines whose literals may be
 * spread over any number of lines, terminated by 0.
 */
inline SolveOutcome parseSolverOutput(const std::string& text, std::size_t numVars) {
  std::istringstream in(text);
  std::string line;
  std::optional<SolveStatus> status;
  Model model(numVars + 1, false);
  bool sawModel = false;
  while (std::getline(in, line)) {
    if (line.size() >= 2 && line[0] == 's' && (line[1] == ' ' || line[1] == '\t')) {
      const auto word = line.substr(2);
      if (word.find("UNSATISFIABLE") != std::string::npos) {
        status = SolveStatus::Unsat;
      } else if (word.find("SATISFIABLE") != std::string::npos) {
        status = SolveStatus::Sat;
      } else if (word.find("UNKNOWN") != std::string::npos) {
        status = SolveStatus::Timeout;
      } else {
        throw ExternalSolverError("unrecognised status line: " + line);
      }
    } else if (!line.empty() && line[0] == 'v') {
      std::istringstream lits(line.substr(1));
      std::string tok;
      while (lits >> tok) {
        char* end = nullptr;
        const long long lit = std::strtoll(tok.c_str(), &end, 10);
        if (end == tok.c_str() || *end != '\0') {
          throw ExternalSolverError("bad model literal '" + tok + "'");
        }
        if (lit == 0) {
          continue;
        }
        const auto var = static_cast<std::size_t>(std::llabs(lit));
        if (var > numVars) {
          throw ExternalSolverError("model literal " + tok + " exceeds variable count");
        }
        model[var] = lit > 0;
        sawModel = true;
      }
    }
  }
  if (!status) {
    throw ExternalSolverError("solver output has no status line");
  }
  SolveOutcome out;
  out.status = *status;
  if (*status == SolveStatus::Sat) {
    if (!sawModel && numVars > 0) {
      throw ExternalSolverError("solver reported SAT without a model");
    }
    out.model = std::move(model);
  }
  return out;
}

/**
 * Runs `command <dimacs-file>` through /bin/sh and reads its stdout.
 * The whole process group is killed when the budget expires.
 */
inline SolveOutcome solveExternal(const CnfFormula& formula, const std::string& command,
                                  SolveBudget budget = {}) {
  formula.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = budget.deadlineFrom(start);

  char path[] = "/tmp/swapmap-XXXXXX.cnf";
  const int fd = ::mkstemps(path, 4);
  if (fd < 0) {
    throw ExternalSolverError(std::string("cannot create temp file: ") + std::strerror(errno));
  }
  {
    const auto text = toDimacs(formula);
    std::size_t off = 0;
    while (off < text.size()) {
      const auto n = ::write(fd, text.data() + off, text.size() - off);
      if (n <= 0) {
        ::close(fd);
        ::unlink(path);
        throw ExternalSolverError("cannot write temp DIMACS file");
      }
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }
  struct Cleanup {
    const char* p;
    ~Cleanup() { ::unlink(p); }
  } cleanup{path};

  int pipeFds[2];
  if (::pipe(pipeFds) != 0) {
    throw ExternalSolverError("pipe() failed");
  }
  const std::string shellCmd = command + " '" + path + "'";
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(pipeFds[0]);
    ::close(pipeFds[1]);
    throw ExternalSolverError("fork() failed");
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(pipeFds[1], STDOUT_FILENO);
    ::close(pipeFds[0]);
    ::close(pipeFds[1]);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) {
      ::dup2(devnull, STDIN_FILENO);
    }
    ::execl("/bin/sh", "sh", "-c", shellCmd.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(pipeFds[1]);

  std::string output;
  bool timedOut = false;
  char buf[65536];
  for (;;) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timedOut = true;
      break;
    }
    const auto waitMs = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{pipeFds[0], POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(waitMs + 1, 100)));
    if (rc < 0 && errno != EINTR) {
      break;
    }
    if (rc > 0) {
      const auto n = ::read(pipeFds[0], buf, sizeof(buf));
      if (n <= 0) {
        break;  // EOF
      }
      output.append(buf, static_cast<std::size_t>(n));
    }
  }
  ::close(pipeFds[0]);
  int status = 0;
  bool reaped = false;
  while (!timedOut) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid || (r < 0 && errno != EINTR)) {
      reaped = true;
      break;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      timedOut = true;
      break;
    }
    ::usleep(2000);
  }
  if (timedOut) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &status, 0);
    SolveOutcome out;
    out.status = SolveStatus::Timeout;
    out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }
  if (!reaped) {
    ::waitpid(pid, &status, 0);
  }

  if (WIFSIGNALED(status)) {
    throw ExternalSolverError("external solver killed by signal " +
                              std::to_string(WTERMSIG(status)));
  }
  auto out = parseSolverOutput(output, formula.numVars());
  out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.status == SolveStatus::Sat && !formula.satisfiedBy(*out.model)) {
    throw ExternalSolverError("external solver returned a model that violates the formula");
  }
  return out;
}

inline SatBackend externalBackend(std::string command) {
  return [cmd = std::move(command)](const CnfFormula& f, SolveBudget b) {
    return solveExternal(f, cmd, b);
  };
}

} // namespace swapmap
