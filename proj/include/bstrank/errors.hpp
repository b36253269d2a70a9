#pragma once

#include <stdexcept>

namespace bstrank {

/// Two independent computation routes disagreed; always an implementation bug.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bstrank
