#ifndef CMCIRCUITS_ERRORS_HPP
#define CMCIRCUITS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmc {

// Input violates a documented precondition (bad graph, wrong variable, ...).
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource limit was exceeded.  Never a wrong answer: the
// computation stops loudly instead.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// A resultant factored with no factor supported on the target graph.  This is
// a genuinely open situation; callers surface it verbatim.
class no_qualifying_factor_error : public std::runtime_error {
 public:
  explicit no_qualifying_factor_error(const std::string& what) : std::runtime_error(what) {}
};

// Cache file failed its integrity check.
class checksum_error : public std::runtime_error {
 public:
  explicit checksum_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cmc

#endif
