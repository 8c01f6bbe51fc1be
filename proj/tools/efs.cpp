// Copyright 2026 The efsgate Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// efs: command-line front end for the encrypted file gateway.
//
//   efs daemon                         run the gateway daemon in the foreground
//   efs emkdir DIR                     create an encrypted directory
//   efs attach DIR NAME [--obscure]    attach DIR under the virtual root as NAME
//   efs detach NAME
//   efs list                           attach points visible to the caller
//   efs ls|cat|put VPATH               browse, read, or write through an attach
//   efs bench space|time               size-expansion and timing measurements
//
// Exit codes: 0 success, 1 usage, 2 daemon or I/O error, 3 bad key.

#include <signal.h>
#include <string.h>
#include <termios.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "efs/efs.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitError = 2;
constexpr int kExitBadKey = 3;

/// Passphrase buffer that is wiped on destruction.
class Secret {
 public:
  Secret() = default;
  ~Secret() { wipe(); }
  Secret(const Secret&) = delete;
  Secret& operator=(const Secret&) = delete;

  std::string& str() { return text_; }
  const char* data() const { return text_.data(); }
  std::size_t size() const { return text_.size(); }
  bool operator==(const Secret& o) const { return text_ == o.text_; }
  void wipe() {
    if (!text_.empty()) explicit_bzero(text_.data(), text_.size());
    text_.clear();
  }

 private:
  std::string text_;
};

int report(int status, const char* what) {
  std::cerr << "efs: " << what << ": " << efs_status_string(status);
  const char* detail = efs_last_error();
  if (detail != nullptr && *detail != '\0' && std::strcmp(detail, efs_status_string(status)) != 0) std::cerr << " (" << detail << ")";
  std::cerr << "\n";
  if (status == EFS_BADKEY || status == EFS_E_SHORT_KEY) return kExitBadKey;
  return kExitError;
}

// One line from fd, without the newline. False on EOF before any byte.
bool read_line_fd(int fd, Secret& out) {
  out.wipe();
  char c;
  bool any = false;
  for (;;) {
    const ssize_t n = ::read(fd, &c, 1);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return any;
    any = true;
    if (c == '\n') return true;
    out.str().push_back(c);
  }
}

// Prompts on the controlling terminal with echo disabled.
bool prompt_tty(const char* prompt, Secret& out) {
  FILE* tty = std::fopen("/dev/tty", "r+");
  if (tty == nullptr) return false;
  const int fd = ::fileno(tty);
  termios saved{};
  const bool have_term = ::tcgetattr(fd, &saved) == 0;
  if (have_term) {
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    ::tcsetattr(fd, TCSAFLUSH, &quiet);
  }
  std::fputs(prompt, tty);
  std::fflush(tty);
  const bool ok = read_line_fd(fd, out);
  if (have_term) ::tcsetattr(fd, TCSAFLUSH, &saved);
  std::fputs("\n", tty);
  std::fclose(tty);
  return ok;
}

bool get_passphrase(int fd, const char* prompt, Secret& out) {
  return fd >= 0 ? read_line_fd(fd, out) : prompt_tty(prompt, out);
}

struct Connection {
  efs_client* client = nullptr;
  ~Connection() { efs_client_close(client); }
};

int connect(const std::string& endpoint, Connection& conn) {
  const int rc = efs_client_connect(endpoint.c_str(), &conn.client);
  return rc == EFS_OK ? kExitOk : report(rc, "connect");
}

// Resolves "attach/dir/file" from the virtual root.
int walk(efs_client* c, const std::string& vpath, efs_handle& out, efs_attr& attr) {
  efs_root_handle(&out);
  attr = efs_attr{};
  attr.kind = EFS_KIND_DIRECTORY;
  std::stringstream ss(vpath);
  std::string part;
  while (std::getline(ss, part, '/')) {
    if (part.empty()) continue;
    efs_handle next{};
    const int rc = efs_lookup(c, &out, part.c_str(), &next, &attr);
    if (rc != EFS_OK) return report(rc, ("lookup " + part).c_str());
    out = next;
  }
  return kExitOk;
}

std::vector<std::uint64_t> default_sizes() { return {0, 1, 909, 3686, 9728, 10956, 15974}; }

volatile sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"efs - encrypted file gateway"};
  app.require_subcommand(1);

  std::string endpoint = "/tmp/efsd.sock";
  app.add_option("--endpoint", endpoint, "Daemon socket path")->envname("EFS_ENDPOINT");

  // daemon
  auto* daemon_cmd = app.add_subcommand("daemon", "Run the gateway daemon in the foreground");
  std::size_t cache_cap = 16;
  std::size_t mask_blocks = 4096;
  daemon_cmd->add_option("--cache-cap", cache_cap, "Open-file cache capacity")
      ->envname("EFS_CACHE_CAP");
  daemon_cmd->add_option("--mask-blocks", mask_blocks, "Whitening mask period in 16-byte blocks")
      ->envname("EFS_MASK_BLOCKS")
      ->check(CLI::PositiveNumber);

  // emkdir
  auto* emkdir_cmd = app.add_subcommand("emkdir", "Create an encrypted directory");
  std::string emkdir_dir;
  int pass_fd = -1;
  std::size_t emkdir_mask = 4096;
  emkdir_cmd->add_option("dir", emkdir_dir, "Directory to create")->required();
  emkdir_cmd->add_option("--passphrase-fd", pass_fd, "Read the passphrase from this descriptor");
  emkdir_cmd->add_option("--mask-blocks", emkdir_mask, "Whitening mask period")
      ->envname("EFS_MASK_BLOCKS")
      ->check(CLI::PositiveNumber);

  // attach
  auto* attach_cmd = app.add_subcommand("attach", "Attach an encrypted directory");
  std::string attach_dir, attach_name;
  bool obscure = false;
  attach_cmd->add_option("dir", attach_dir, "Encrypted backing directory")->required();
  attach_cmd->add_option("name", attach_name, "Name under the virtual root")->required();
  attach_cmd->add_flag("--obscure", obscure, "Hide the attach point from listings");
  attach_cmd->add_option("--passphrase-fd", pass_fd, "Read the passphrase from this descriptor");

  // detach / list
  auto* detach_cmd = app.add_subcommand("detach", "Remove an attach point");
  std::string detach_name;
  detach_cmd->add_option("name", detach_name, "Attach point name")->required();
  auto* list_cmd = app.add_subcommand("list", "List attach points");

  // ls / cat / put
  std::string vpath;
  auto* ls_cmd = app.add_subcommand("ls", "List a directory through an attach point");
  ls_cmd->add_option("path", vpath, "Virtual path, e.g. aks/src");
  auto* cat_cmd = app.add_subcommand("cat", "Print a file through an attach point");
  cat_cmd->add_option("path", vpath, "Virtual path")->required();
  auto* put_cmd = app.add_subcommand("put", "Write stdin to a file through an attach point");
  put_cmd->add_option("path", vpath, "Virtual path")->required();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Space and time measurements");
  bench_cmd->require_subcommand(1);
  std::vector<std::uint64_t> sizes = default_sizes();
  bool json = false;
  std::string workdir;
  std::string mode = "binary";
  unsigned reps = 101;
  auto* space_cmd = bench_cmd->add_subcommand("space", "Backing size vs cleartext size");
  space_cmd->add_option("--sizes", sizes, "Cleartext sizes in bytes")->delimiter(',');
  space_cmd->add_option("--mode", mode, "Payload encoding")->check(CLI::IsMember({"binary", "ascii"}));
  space_cmd->add_flag("--json", json, "Emit JSON instead of CSV");
  space_cmd->add_option("--workdir", workdir, "Scratch directory");
  auto* time_cmd = bench_cmd->add_subcommand("time", "Encrypt-and-write time vs size");
  time_cmd->add_option("--sizes", sizes, "Cleartext sizes in bytes")->delimiter(',');
  time_cmd->add_option("--reps", reps, "Timed repetitions per size")->check(CLI::PositiveNumber);
  time_cmd->add_flag("--json", json, "Emit JSON instead of CSV");
  time_cmd->add_option("--workdir", workdir, "Scratch directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (daemon_cmd->parsed()) {
    efs_daemon* d = nullptr;
    int rc = efs_daemon_create(endpoint.c_str(), cache_cap, mask_blocks, &d);
    if (rc == EFS_OK) rc = efs_daemon_start(d);
    if (rc != EFS_OK) {
      efs_daemon_destroy(d);
      return report(rc, "daemon");
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "efs: daemon listening on " << endpoint << "\n";
    while (g_stop == 0) ::pause();
    efs_daemon_stop(d);
    efs_daemon_destroy(d);
    return kExitOk;
  }

  if (emkdir_cmd->parsed()) {
    Secret first, second;
    if (!get_passphrase(pass_fd, "Key: ", first) || !get_passphrase(pass_fd, "Again: ", second)) {
      std::cerr << "efs: emkdir: no passphrase given\n";
      return kExitUsage;
    }
    if (!(first == second)) {
      std::cerr << "efs: emkdir: passphrases do not match\n";
      return kExitUsage;
    }
    second.wipe();
    const int rc = efs_emkdir(emkdir_dir.c_str(), first.data(), first.size(), emkdir_mask);
    return rc == EFS_OK ? kExitOk : report(rc, "emkdir");
  }

  if (attach_cmd->parsed()) {
    Secret key;
    if (!get_passphrase(pass_fd, "Key: ", key)) {
      std::cerr << "efs: attach: no passphrase given\n";
      return kExitUsage;
    }
    std::error_code ec;
    const auto abs = std::filesystem::absolute(attach_dir, ec);
    Connection conn;
    if (int rc = connect(endpoint, conn); rc != kExitOk) return rc;
    efs_handle root{};
    const int rc = efs_attach(conn.client, abs.c_str(), attach_name.c_str(), key.data(),
                              key.size(), obscure ? 1 : 0, &root);
    if (rc == EFS_BADKEY) {
      std::cerr << "efs: attach: incorrect key\n";
      return kExitBadKey;
    }
    return rc == EFS_OK ? kExitOk : report(rc, "attach");
  }

  if (detach_cmd->parsed() || list_cmd->parsed()) {
    Connection conn;
    if (int rc = connect(endpoint, conn); rc != kExitOk) return rc;
    if (detach_cmd->parsed()) {
      const int rc = efs_detach(conn.client, detach_name.c_str());
      return rc == EFS_OK ? kExitOk : report(rc, "detach");
    }
    const int rc = efs_list_attaches(
        conn.client, [](const char* name, int, void*) { std::cout << name << "\n"; }, nullptr);
    return rc == EFS_OK ? kExitOk : report(rc, "list");
  }

  if (ls_cmd->parsed() || cat_cmd->parsed() || put_cmd->parsed()) {
    Connection conn;
    if (int rc = connect(endpoint, conn); rc != kExitOk) return rc;
    efs_handle h{};
    efs_attr attr{};
    if (put_cmd->parsed()) {
      const auto slash = vpath.rfind('/');
      if (slash == std::string::npos) {
        std::cerr << "efs: put: path must be inside an attach point\n";
        return kExitUsage;
      }
      if (int rc = walk(conn.client, vpath.substr(0, slash), h, attr); rc != kExitOk) return rc;
      const std::string name = vpath.substr(slash + 1);
      efs_handle file{};
      // Replace rather than overwrite in place: there is no truncate operation.
      int rc = efs_lookup(conn.client, &h, name.c_str(), &file, &attr);
      if (rc == EFS_OK) rc = efs_remove(conn.client, &h, name.c_str());
      if (rc == EFS_OK || rc == EFS_NOENT) rc = efs_create(conn.client, &h, name.c_str(), 0644, &file);
      if (rc != EFS_OK) return report(rc, "put");
      std::string data((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
      rc = efs_write(conn.client, &file, 0, data.data(), data.size(), nullptr);
      return rc == EFS_OK ? kExitOk : report(rc, "put");
    }
    if (int rc = walk(conn.client, vpath, h, attr); rc != kExitOk) return rc;
    if (ls_cmd->parsed()) {
      const int rc = efs_readdir(
          conn.client, &h,
          [](const char* name, int kind, void*) {
            std::cout << name << (kind == EFS_KIND_DIRECTORY ? "/" : "") << "\n";
          },
          nullptr);
      return rc == EFS_OK ? kExitOk : report(rc, "ls");
    }
    std::vector<char> buf(1 << 20);
    std::uint64_t off = 0;
    for (;;) {
      std::size_t n = 0;
      const int rc = efs_read(conn.client, &h, off, buf.data(), buf.size(), &n);
      if (rc != EFS_OK) return report(rc, "cat");
      if (n == 0) break;
      std::cout.write(buf.data(), static_cast<std::streamsize>(n));
      off += n;
    }
    return kExitOk;
  }

  if (space_cmd->parsed() || time_cmd->parsed()) {
    char* out = nullptr;
    const char* wd = workdir.empty() ? nullptr : workdir.c_str();
    const int rc = space_cmd->parsed()
                       ? efs_bench_space(sizes.data(), sizes.size(), mode == "ascii", json, wd, &out)
                       : efs_bench_time(sizes.data(), sizes.size(), reps, json, wd, &out);
    if (rc != EFS_OK) return report(rc, "bench");
    std::cout << out;
    efs_free(out);
    return kExitOk;
  }
  return kExitUsage;
}
