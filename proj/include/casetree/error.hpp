#pragma once

#include <stdexcept>
#include <string>

namespace casetree {

enum class ErrorKind {
  io,              // unreadable/unwritable files, missing paths
  data,            // malformed corpora, duplicate ids, unpaired cases
  contract,        // API misuse (e.g. alignment from different sets)
  length_mismatch, // paired vectors of different length
  constant_input,  // correlation of a zero-variance vector
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace casetree
