#pragma once

#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

namespace termite {

// printf-style helper for building trace key=value payloads.
std::string strf(const char* fmt, ...);

// Line-oriented run trace: "<time> <kind> <node> key=value ...".
// Disabled by default; when disabled, record() is a no-op so hot paths can
// call it unconditionally.
class TraceLog {
 public:
  bool enabled() const { return out_ != nullptr; }
  void attach(std::ostream* out) { out_ = out; }
  void open_file(const std::string& path);
  void close();
  void record(double t, std::string_view kind, int node, std::string_view kv);

 private:
  std::ostream* out_ = nullptr;
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace termite
