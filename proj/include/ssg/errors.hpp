#ifndef SSG_ERRORS_HPP
#define SSG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssg {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Requested pre-fractal depth exceeds the configured enumeration cap.
class DepthCapError : public std::length_error {
public:
  DepthCapError(int depth, int cap)
      : std::length_error("depth " + std::to_string(depth) + " exceeds cap " + std::to_string(cap)),
        depth_(depth), cap_(cap) {}
  int depth() const noexcept { return depth_; }
  int cap() const noexcept { return cap_; }

private:
  int depth_;
  int cap_;
};

/// A cable of zero length (epsilon_s == 1) carries an infinite prefactor.
class DegenerateCableError : public DomainError {
public:
  explicit DegenerateCableError(int generation)
      : DomainError("degenerate cable at generation " + std::to_string(generation) +
                    " (epsilon == 1)"),
        generation_(generation) {}
  int generation() const noexcept { return generation_; }

private:
  int generation_;
};

/// Inconsistent pre-fractal graph (a vertex star that does not close up).
class GeometryError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class ParseError : public std::invalid_argument {
public:
  ParseError(const std::string &msg, std::size_t pos)
      : std::invalid_argument(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

private:
  std::size_t pos_;
};

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace ssg

#endif // SSG_ERRORS_HPP
