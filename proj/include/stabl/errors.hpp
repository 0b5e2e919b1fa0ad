#pragma once

#include <stdexcept>

namespace stabl {

// Query-protocol violations: reveal before announce, double reveal for a
// round, reveal budget exceeded, missing feedback for an announced arm.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an evaluation routine would exceed its elementary-op budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stabl
