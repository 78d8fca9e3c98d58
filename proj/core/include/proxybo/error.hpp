#pragma once

#include <stdexcept>
#include <string>

namespace proxybo {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The search space cannot support the requested operation (e.g. ops_per_edge < 2).
class InvalidSpace : public Error {
 public:
  using Error::Error;
};

class SpaceTooLarge : public Error {
 public:
  SpaceTooLarge(double size, double cap)
      : Error("search space has " + std::to_string(size) +
              " encodings, exceeding the enumeration cap of " +
              std::to_string(cap)),
        size_(size) {}
  double size() const { return size_; }

 private:
  double size_;
};

class ShapeMismatch : public Error {
 public:
  ShapeMismatch(int layer, const std::string& what)
      : Error("shape mismatch at layer " + std::to_string(layer) + ": " + what),
        layer_(layer) {}
  int layer() const { return layer_; }

 private:
  int layer_;
};

class NumericOverflow : public Error {
 public:
  NumericOverflow(int layer, const std::string& what)
      : Error("non-finite value at layer " + std::to_string(layer) + ": " +
              what),
        layer_(layer) {}
  int layer() const { return layer_; }

 private:
  int layer_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class ModelUnfit : public Error {
 public:
  using Error::Error;
};

// Every encoding of the space has already been evaluated.
class SearchComplete : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& field, const std::string& what)
      : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
        line_(line),
        field_(field) {}
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class CalibrationError : public Error {
 public:
  CalibrationError(double target, double achieved)
      : Error("proxy calibration did not converge: target rho " +
              std::to_string(target) + ", achieved " + std::to_string(achieved)),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

}  // namespace proxybo
