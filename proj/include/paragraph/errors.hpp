#pragma once

#include <stdexcept>
#include <string>

namespace paragraph {

// A dataset or graph value violates one of its structural invariants.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonicalization left nothing usable of a sentence.
class UnusableSentence : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

// The input table cannot be interpreted at all (bad header, no usable rows).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable input or failed write.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace paragraph
