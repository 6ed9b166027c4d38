#ifndef SPARSEFIT_ERRORS_HPP
#define SPARSEFIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sparsefit {

// Data cannot identify the requested model (e.g. every observation is zero,
// or fewer nonzero observations than free parameters).
class degenerate_data_error : public std::runtime_error {
public:
  explicit degenerate_data_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Numerical failure: non-convergent optimization asked to be strict,
// singular information matrix, degenerate truncation, overflow.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Asymptotics requested at a parameter boundary (phi equal to 0 or 1).
class boundary_error : public std::runtime_error {
public:
  explicit boundary_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file; carries a 1-based line number.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace sparsefit

#endif
