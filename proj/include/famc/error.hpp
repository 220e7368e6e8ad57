#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace famc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live on different ground spaces, or a point is not in the ground.
class GroundMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed input text or JSON; `where` is a JSON-pointer-like field path.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

// A precondition on measure values failed (signed input to a cone-only
// operation, a non-probability initial measure, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Kernel rules violate the kernel axioms or the representable rule class.
class KernelError : public Error {
 public:
  using Error::Error;
};

// A limit along a filter could not be decided on the representable algebra.
class UndecidedLimit : public Error {
 public:
  UndecidedLimit(std::string filter_id, std::string piece, const std::string& why)
      : Error("undecided limit along filter '" + filter_id + "' on piece " + piece + ": " + why),
        filter_id_(std::move(filter_id)),
        piece_(std::move(piece)) {}
  const std::string& filter_id() const noexcept { return filter_id_; }
  const std::string& piece() const noexcept { return piece_; }

 private:
  std::string filter_id_;
  std::string piece_;
};

class ClosureDiverged : public Error {
 public:
  explicit ClosureDiverged(std::size_t cap)
      : Error("orbit closure exceeded cap of " + std::to_string(cap) + " generators"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

class NoRepresentableSolution : public Error {
 public:
  using Error::Error;
};

}  // namespace famc
