#pragma once

#include <stdexcept>
#include <string>

namespace weakkam {

// Base of every library error; the CLI maps subclasses onto exit codes.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_lattice : public error {
 public:
  using error::error;
};

class invalid_input : public error {
 public:
  using error::error;
};

class invalid_resolution : public error {
 public:
  using error::error;
};

class domain_error : public error {
 public:
  using error::error;
};

class range_error : public error {
 public:
  using error::error;
};

// Power iteration or a fixed-point sweep ran out of iterations.
class iteration_limit : public error {
 public:
  iteration_limit(const std::string& what, double last_residual, long iterations)
      : error(what), last_residual_(last_residual), iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  long iterations_;
};

class irreducibility_violation : public error {
 public:
  using error::error;
};

class inconsistent_eigendata : public error {
 public:
  using error::error;
};

// Requested a limit object that is only defined for a unique maximizer.
class unsupported_configuration : public error {
 public:
  using error::error;
};

class numerical_degeneracy : public error {
 public:
  using error::error;
};

class config_error : public error {
 public:
  config_error(const std::string& what, int line) : error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace weakkam
