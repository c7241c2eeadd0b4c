#pragma once

#include <stdexcept>
#include <string>

namespace fhs {

// Precondition or hypothesis violation. The message names the violated
// hypothesis so front ends can surface it verbatim.
struct validation_error : std::invalid_argument {
  explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Requested field motion would move significant mass out of the
// representable box (translate/rescale guards).
struct support_error : std::runtime_error {
  explicit support_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct grid_mismatch_error : std::runtime_error {
  explicit grid_mismatch_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mountain-pass geometry failure: no positive energy barrier on the seed ray.
struct path_collapse_error : std::runtime_error {
  explicit path_collapse_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fhs
