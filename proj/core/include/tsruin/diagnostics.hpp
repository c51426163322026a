#pragma once

#include <functional>
#include <string>

namespace tsruin::diag {

// Non-fatal numerical notes (clamping, ill-conditioning, degenerate
// statistics).  The default sink writes to stderr; callers may redirect.
using Sink = std::function<void(const std::string&)>;

void set_sink(Sink sink);
void reset_sink();
void warn(const std::string& message);

// Counts warnings emitted since the last reset (process-wide).
unsigned long warning_count();
void reset_warning_count();

}  // namespace tsruin::diag
