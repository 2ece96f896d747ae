#ifndef FEVER_COMMON_ERRORS_H_
#define FEVER_COMMON_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fever {

// Input that does not follow one of the accepted file formats. The line
// number is 1-based and refers to the physical line of the offending input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string &message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line),
        detail_(message) {}

  std::size_t line() const { return line_; }
  // The message without the line prefix.
  const std::string &detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// A NaN or infinity surfaced inside the encoder. layer is -1 for the
// embedding block and num_layers for the classification head.
class NumericError : public std::runtime_error {
 public:
  NumericError(int layer, const std::string &message)
      : std::runtime_error("layer " + std::to_string(layer) + ": " + message),
        layer_(layer) {}

  int layer() const { return layer_; }

 private:
  int layer_;
};

// Violated precondition on a public entry point.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A pipeline stage could not find one of its input artifacts.
class MissingArtifact : public std::runtime_error {
 public:
  explicit MissingArtifact(const std::string &path)
      : std::runtime_error("missing artifact: " + path), path_(path) {}

  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace fever

#endif  // FEVER_COMMON_ERRORS_H_
