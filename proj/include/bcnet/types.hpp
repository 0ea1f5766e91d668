#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bcnet {

// Dense tables are indexed [parent configuration j][child state k].
using CountArray = Eigen::Array<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountVector = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>;
using ProbArray = Eigen::ArrayXXd;
using ProbVector = Eigen::ArrayXd;

// State index of a categorical entry; kMissing marks an unobserved entry.
using StateIndex = std::int32_t;
inline constexpr StateIndex kMissing = -1;

inline bool is_missing(StateIndex s) { return s < 0; }

// Bad user input: malformed files, unknown names, violated preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed result broke one of the library's own invariants.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bcnet
