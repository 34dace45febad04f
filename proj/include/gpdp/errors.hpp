#pragma once

#include <stdexcept>
#include <string>

namespace gpdp {

// Invalid mathematical input: out-of-range parameters, dimension mismatches,
// points outside their required domain. Maps to CLI exit code 4.
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Work refused because it would exceed a configured budget (memory, cells).
// Maps to CLI exit code 3.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem trouble: missing or unreadable/unwritable paths. CLI exit code 3.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed problem file content. Carries the offending field in the message.
// Maps to CLI exit code 2.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gpdp
