#pragma once

#include <stdexcept>
#include <string>

namespace ridgekit {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class dimension_error : public error {
 public:
  using error::error;
};

class precondition_error : public error {
 public:
  using error::error;
};

// Raised when Gram-Schmidt meets a (numerically) dependent vector.
class conditioning_error : public error {
 public:
  using error::error;
};

class resource_error : public error {
 public:
  using error::error;
};

// Raised when a ridge decomposition fails its residual check.
class decomposition_error : public error {
 public:
  decomposition_error(const std::string& what, double residual)
      : error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

class numeric_error : public error {
 public:
  using error::error;
};

}  // namespace ridgekit
