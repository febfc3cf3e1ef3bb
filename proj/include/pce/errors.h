#ifndef PCE_ERRORS_H_
#define PCE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pce {

// Malformed input documents (bad JSON, missing keys, non-total payoff
// tables). `path` is a JSON pointer into the offending document.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A well-formed request that violates an operation's precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pce

#endif  // PCE_ERRORS_H_
