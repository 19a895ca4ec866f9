#pragma once

#include <stdexcept>
#include <string>

namespace sts {

// Error categories map onto CLI exit codes:
//   kInvalidInput -> 2, kBudget -> 1 (clean negative), kInternal -> 3.
enum class ErrorKind {
  kInvalidInput,
  kBudget,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message),
        kind_(kind),
        code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error invalid_input(std::string code, const std::string& msg) {
  return Error(ErrorKind::kInvalidInput, std::move(code), msg);
}

inline Error budget_exceeded(const std::string& msg) {
  return Error(ErrorKind::kBudget, "BudgetExceeded", msg);
}

inline Error internal_error(std::string code, const std::string& msg) {
  return Error(ErrorKind::kInternal, std::move(code), msg);
}

}  // namespace sts
