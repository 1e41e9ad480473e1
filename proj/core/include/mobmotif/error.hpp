#pragma once

#include <stdexcept>
#include <string>

namespace mobmotif {

/// Fatal pipeline error: unreadable input, invalid configuration, or an empty
/// mandatory data set. Recoverable per-record problems are counted instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mobmotif
