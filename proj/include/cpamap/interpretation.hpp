#pragma once

#include <cstdint>
#include <vector>

#include "cpamap/mln_model.hpp"

namespace cpamap {

/// A possible world: one truth value per atom of the Herbrand base.
class Interpretation {
 public:
  Interpretation() = default;
  explicit Interpretation(std::size_t atom_count) : truth_(atom_count, 0) {}

  bool operator[](AtomId atom) const { return truth_[atom] != 0; }
  void set(AtomId atom, bool value) { truth_[atom] = value ? 1 : 0; }
  std::size_t size() const { return truth_.size(); }

  std::uint64_t generation() const { return generation_; }
  void bump_generation() { ++generation_; }

  std::vector<AtomId> true_atoms() const {
    std::vector<AtomId> out;
    for (std::size_t i = 0; i < truth_.size(); ++i)
      if (truth_[i]) out.push_back(static_cast<AtomId>(i));
    return out;
  }

  /// Compares truth values only.
  bool same_world(const Interpretation& other) const { return truth_ == other.truth_; }

 private:
  std::vector<std::uint8_t> truth_;
  std::uint64_t generation_ = 0;
};

}  // namespace cpamap
