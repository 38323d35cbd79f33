#include "adconv/layout.hpp"

#include <algorithm>
#include <set>

#include "adconv/errors.hpp"

namespace adconv {

RegisterLayout::RegisterLayout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  std::set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (!seen.insert(s.label).second) {
      throw ValidationError("duplicate subsystem label '" + s.label + "'");
    }
    if (s.role == Role::Qubit && s.dim != 2) {
      throw ValidationError("qubit '" + s.label + "' must have dimension 2");
    }
    if (s.role == Role::CvMode && s.dim < 2) {
      throw ValidationError("cv mode '" + s.label + "' needs truncation >= 2");
    }
  }
  strides_.assign(subsystems_.size(), 1);
  dimension_ = 1;
  for (std::size_t i = subsystems_.size(); i-- > 0;) {
    strides_[i] = dimension_;
    dimension_ *= subsystems_[i].dim;
  }
}

RegisterLayout RegisterLayout::cv_mode(std::string label, std::size_t n_trunc) {
  return RegisterLayout({Subsystem{Role::CvMode, n_trunc, std::move(label)}});
}

RegisterLayout RegisterLayout::qubit(std::string label) {
  return RegisterLayout({Subsystem{Role::Qubit, 2, std::move(label)}});
}

bool RegisterLayout::contains(const std::string& label) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(),
                     [&](const Subsystem& s) { return s.label == label; });
}

std::size_t RegisterLayout::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label == label) return i;
  }
  throw ValidationError("unknown subsystem label '" + label + "'");
}

std::vector<std::string> RegisterLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.label);
  return out;
}

std::size_t RegisterLayout::compose(std::span<const std::size_t> digits) const {
  if (digits.size() != subsystems_.size()) throw ValidationError("digit count does not match layout");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= subsystems_[i].dim) throw ValidationError("digit out of range");
    flat += digits[i] * strides_[i];
  }
  return flat;
}

std::vector<std::size_t> RegisterLayout::decompose(std::size_t flat) const {
  if (flat >= dimension_) throw ValidationError("flat index out of range");
  std::vector<std::size_t> digits(subsystems_.size());
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    digits[i] = (flat / strides_[i]) % subsystems_[i].dim;
  }
  return digits;
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other) const {
  std::vector<Subsystem> all = subsystems_;
  all.insert(all.end(), other.subsystems_.begin(), other.subsystems_.end());
  return RegisterLayout(std::move(all));
}

RegisterLayout RegisterLayout::subset(std::span<const std::string> labels) const {
  for (const auto& l : labels) index_of(l);
  std::vector<Subsystem> kept;
  for (const auto& s : subsystems_) {
    if (std::find(labels.begin(), labels.end(), s.label) != labels.end()) kept.push_back(s);
  }
  return RegisterLayout(std::move(kept));
}

RegisterLayout RegisterLayout::complement(std::span<const std::string> labels) const {
  for (const auto& l : labels) index_of(l);
  std::vector<Subsystem> rest;
  for (const auto& s : subsystems_) {
    if (std::find(labels.begin(), labels.end(), s.label) == labels.end()) rest.push_back(s);
  }
  return RegisterLayout(std::move(rest));
}

IndexSplit split_indices(const RegisterLayout& layout, std::span<const std::string> keep) {
  IndexSplit split{layout.subset(keep), layout.complement(keep), {}, {}};
  const std::size_t n = layout.size();
  std::vector<bool> is_kept(n);
  for (std::size_t i = 0; i < n; ++i) is_kept[i] = split.kept_layout.contains(layout[i].label);

  const std::size_t dim = layout.dimension();
  split.kept.resize(dim);
  split.rest.resize(dim);
  // Odometer walk over the digits; avoids a decompose per index.
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t flat = 0; flat < dim; ++flat) {
    std::size_t k = 0;
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_kept[i]) {
        k = k * layout[i].dim + digits[i];
      } else {
        r = r * layout[i].dim + digits[i];
      }
    }
    split.kept[flat] = k;
    split.rest[flat] = r;
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < layout[i].dim) break;
      digits[i] = 0;
    }
  }
  return split;
}

}  // namespace adconv
