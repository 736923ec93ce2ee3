#include <bzlib.h>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "stylo/compression.hpp"
#include "stylo/error.hpp"

namespace stylo::compression {

std::string Compressor::decompress(std::string_view, std::size_t) const {
  fail(ErrorCode::invalid_argument, "compressor \"" + id() + "\" cannot decompress");
}

namespace {

class Bzip2 final : public Compressor {
 public:
  explicit Bzip2(int level) : level_(level) {
    require(level >= 1 && level <= 9, ErrorCode::invalid_argument, "bzip2 level must be 1..9");
  }
  std::string id() const override { return "bzip2"; }
  int level() const override { return level_; }

  std::string compress(std::string_view input) const override {
    // Worst case per the bzip2 manual: 1% larger plus 600 bytes.
    unsigned int len = static_cast<unsigned int>(input.size() + input.size() / 100 + 601);
    std::string out(len, '\0');
    const int rc = BZ2_bzBuffToBuffCompress(out.data(), &len, const_cast<char*>(input.data()),
                                            static_cast<unsigned int>(input.size()), level_, 0, 0);
    require(rc == BZ_OK, ErrorCode::numeric, "bzip2 compression failed (" + std::to_string(rc) + ")");
    out.resize(len);
    return out;
  }

  std::string decompress(std::string_view packed, std::size_t original_size) const override {
    std::string out(original_size + 1, '\0');
    unsigned int len = static_cast<unsigned int>(out.size());
    const int rc = BZ2_bzBuffToBuffDecompress(out.data(), &len, const_cast<char*>(packed.data()),
                                              static_cast<unsigned int>(packed.size()), 0, 0);
    require(rc == BZ_OK, ErrorCode::numeric, "bzip2 decompression failed (" + std::to_string(rc) + ")");
    out.resize(len);
    return out;
  }

 private:
  int level_;
};

class Deflate final : public Compressor {
 public:
  explicit Deflate(int level) : level_(level) {
    require(level >= 0 && level <= 9, ErrorCode::invalid_argument, "deflate level must be 0..9");
  }
  std::string id() const override { return "deflate"; }
  int level() const override { return level_; }

  std::string compress(std::string_view input) const override {
    uLongf len = compressBound(static_cast<uLong>(input.size()));
    std::string out(len, '\0');
    const int rc = compress2(reinterpret_cast<Bytef*>(out.data()), &len,
                             reinterpret_cast<const Bytef*>(input.data()), static_cast<uLong>(input.size()), level_);
    require(rc == Z_OK, ErrorCode::numeric, "deflate compression failed (" + std::to_string(rc) + ")");
    out.resize(len);
    return out;
  }

  std::string decompress(std::string_view packed, std::size_t original_size) const override {
    uLongf len = static_cast<uLongf>(original_size);
    std::string out(original_size, '\0');
    const int rc = uncompress(reinterpret_cast<Bytef*>(out.data()), &len,
                              reinterpret_cast<const Bytef*>(packed.data()), static_cast<uLong>(packed.size()));
    require(rc == Z_OK, ErrorCode::numeric, "deflate decompression failed (" + std::to_string(rc) + ")");
    out.resize(len);
    return out;
  }

 private:
  int level_;
};

class External final : public Compressor {
 public:
  explicit External(ExternalConfig cfg) : cfg_(std::move(cfg)) {
    require(!cfg_.command.empty(), ErrorCode::config, "external compressor needs a command");
    require(cfg_.timeout_s > 0.0, ErrorCode::config, "external compressor timeout must be positive");
    // A child that exits before reading all input must not kill us with SIGPIPE.
    signal(SIGPIPE, SIG_IGN);
  }
  std::string id() const override { return cfg_.id; }
  int level() const override { return 0; }
  std::string compress(std::string_view input) const override { return run(input); }

 private:
  std::string run(std::string_view input) const {
    // argv is built before fork(): the child may only make async-signal-safe calls.
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(cfg_.command.c_str()));
    for (const auto& a : cfg_.args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    int to_child[2], from_child[2];
    // Close-on-exec so children spawned concurrently by other threads do not
    // inherit (and hold open) this child's pipes.
    require(pipe2(to_child, O_CLOEXEC) == 0 && pipe2(from_child, O_CLOEXEC) == 0, ErrorCode::io,
            "pipe() failed");
    const pid_t pid = fork();
    require(pid >= 0, ErrorCode::io, "fork() failed");
    if (pid == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execvp(argv[0], argv.data());
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    fcntl(to_child[1], F_SETFL, O_NONBLOCK);
    fcntl(from_child[0], F_SETFL, O_NONBLOCK);

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(static_cast<long long>(cfg_.timeout_s * 1000.0));
    std::string output;
    std::size_t written = 0;
    int in_fd = to_child[1];
    if (input.empty()) {
      close(in_fd);
      in_fd = -1;
    }
    bool timed_out = false;
    char buf[65536];
    while (true) {
      pollfd fds[2];
      nfds_t count = 0;
      fds[count++] = {from_child[0], POLLIN, 0};
      if (in_fd >= 0) fds[count++] = {in_fd, POLLOUT, 0};
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        timed_out = true;
        break;
      }
      const int rc = poll(fds, count, static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc < 0) break;
      if (count == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
        const ssize_t n = write(in_fd, input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN) written = input.size();
        if (written >= input.size()) {
          close(in_fd);
          in_fd = -1;
        }
      }
      if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
        const ssize_t n = read(from_child[0], buf, sizeof buf);
        if (n > 0) output.append(buf, static_cast<std::size_t>(n));
        else if (n == 0 || errno != EAGAIN) break;
      }
    }
    if (in_fd >= 0) close(in_fd);
    close(from_child[0]);
    if (timed_out) kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
    require(!timed_out, ErrorCode::io,
            "external compressor \"" + cfg_.id + "\" timed out after " + std::to_string(cfg_.timeout_s) + " s");
    require(WIFEXITED(status) && WEXITSTATUS(status) == 0, ErrorCode::io,
            "external compressor \"" + cfg_.id + "\" failed (command " + cfg_.command + ")");
    return output;
  }

  ExternalConfig cfg_;
};

}  // namespace

std::unique_ptr<Compressor> make_bzip2(int level) { return std::make_unique<Bzip2>(level); }
std::unique_ptr<Compressor> make_deflate(int level) { return std::make_unique<Deflate>(level); }
std::unique_ptr<Compressor> make_external(ExternalConfig config) {
  return std::make_unique<External>(std::move(config));
}

Registry Registry::with_builtins() {
  Registry r;
  r.add(make_bzip2());
  r.add(make_deflate());
  return r;
}

void Registry::add(std::unique_ptr<Compressor> c) {
  const std::string key = c->id();
  items_[key] = std::move(c);
}

const Compressor& Registry::get(const std::string& id) const {
  auto it = items_.find(id);
  if (it == items_.end()) fail(ErrorCode::unknown_compressor, "unknown compressor \"" + id + "\"");
  return *it->second;
}

std::vector<std::string> Registry::ids() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : items_) out.push_back(k);
  return out;
}

}  // namespace stylo::compression
