#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace adconv {

enum class Role { CvMode, Qubit };

struct Subsystem {
  Role role;
  std::size_t dim;
  std::string label;

  bool operator==(const Subsystem&) const = default;
};

/// Ordered list of subsystems of a composite register.
///
/// Index convention: subsystem 0 is the slowest-varying digit of the flat
/// index (big-endian over the declared order). Every operation in the
/// library composes and decomposes indices through this class.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Subsystem> subsystems);

  static RegisterLayout cv_mode(std::string label, std::size_t n_trunc);
  static RegisterLayout qubit(std::string label);

  std::size_t size() const { return subsystems_.size(); }
  bool empty() const { return subsystems_.empty(); }
  const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }

  /// Product of all subsystem dimensions (1 for an empty layout).
  std::size_t dimension() const { return dimension_; }

  bool contains(const std::string& label) const;
  /// Position of `label`; throws ValidationError when absent.
  std::size_t index_of(const std::string& label) const;
  std::vector<std::string> labels() const;

  /// Distance in the flat index between consecutive values of subsystem i.
  std::size_t stride(std::size_t i) const { return strides_[i]; }

  std::size_t compose(std::span<const std::size_t> digits) const;
  std::vector<std::size_t> decompose(std::size_t flat) const;

  /// Concatenation; throws ValidationError on duplicate labels.
  RegisterLayout concat(const RegisterLayout& other) const;
  /// Subsystems named in `labels`, kept in this layout's order.
  RegisterLayout subset(std::span<const std::string> labels) const;
  /// Subsystems not named in `labels`, in this layout's order.
  RegisterLayout complement(std::span<const std::string> labels) const;

  bool operator==(const RegisterLayout& other) const { return subsystems_ == other.subsystems_; }

 private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

/// Flat-index maps splitting a layout into a kept part and its complement.
///
/// For every flat index i of the full layout, `kept[i]` and `rest[i]` are the
/// flat indices of i restricted to the kept and complementary subsystems.
struct IndexSplit {
  RegisterLayout kept_layout;
  RegisterLayout rest_layout;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> rest;
};

IndexSplit split_indices(const RegisterLayout& layout, std::span<const std::string> keep);

}  // namespace adconv
