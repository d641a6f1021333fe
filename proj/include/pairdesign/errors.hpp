#ifndef PAIRDESIGN_ERRORS_HPP
#define PAIRDESIGN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pairdesign {

/// Thrown when an information matrix (or one of its diagonal blocks) vanishes
/// where a nonsingular one is required. `block` names the offending block
/// ("main", "first-order", "second-order") or is empty for a full matrix.
class SingularError : public std::runtime_error {
 public:
  explicit SingularError(const std::string& what, std::string block = {})
      : std::runtime_error(what), block_(std::move(block)) {}
  const std::string& block() const { return block_; }

 private:
  std::string block_;
};

/// Thrown when a request would require enumerating more pairs than the
/// configured cap allows.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pairdesign

#endif  // PAIRDESIGN_ERRORS_HPP
