#include "tsruin/diagnostics.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace tsruin::diag {
namespace {

std::mutex sink_mutex;
Sink current_sink;
std::atomic<unsigned long> counter{0};

}  // namespace

void set_sink(Sink sink) {
  std::lock_guard lock(sink_mutex);
  current_sink = std::move(sink);
}

void reset_sink() {
  std::lock_guard lock(sink_mutex);
  current_sink = nullptr;
}

void warn(const std::string& message) {
  ++counter;
  std::lock_guard lock(sink_mutex);
  if (current_sink) {
    current_sink(message);
  } else {
    std::cerr << "tsruin: warning: " << message << '\n';
  }
}

unsigned long warning_count() { return counter.load(); }

void reset_warning_count() { counter = 0; }

}  // namespace tsruin::diag
