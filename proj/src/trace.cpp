#include "termite/trace.hpp"

#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace termite {

std::string strf(const char* fmt, ...) {
  char stack_buf[256];
  va_list args;
  va_start(args, fmt);
  int n = vsnprintf(stack_buf, sizeof stack_buf, fmt, args);
  va_end(args);
  if (n < 0) return {};
  if (static_cast<size_t>(n) < sizeof stack_buf) return std::string(stack_buf, n);
  std::vector<char> buf(static_cast<size_t>(n) + 1);
  va_start(args, fmt);
  vsnprintf(buf.data(), buf.size(), fmt, args);
  va_end(args);
  return std::string(buf.data(), n);
}

void TraceLog::open_file(const std::string& path) {
  file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*file_) throw std::runtime_error("cannot open trace file: " + path);
  out_ = file_.get();
}

void TraceLog::close() {
  out_ = nullptr;
  file_.reset();
}

void TraceLog::record(double t, std::string_view kind, int node,
                      std::string_view kv) {
  if (!out_) return;
  char head[48];
  int n = snprintf(head, sizeof head, "%.6f ", t);
  out_->write(head, n);
  out_->write(kind.data(), static_cast<std::streamsize>(kind.size()));
  char mid[16];
  n = snprintf(mid, sizeof mid, " %d", node);
  out_->write(mid, n);
  if (!kv.empty()) {
    out_->put(' ');
    out_->write(kv.data(), static_cast<std::streamsize>(kv.size()));
  }
  out_->put('\n');
}

}  // namespace termite
