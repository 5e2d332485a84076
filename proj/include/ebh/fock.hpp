#pragma once

// Particle-number-conserving bosonic Fock basis.
//
// Sites are addressed 0..L-1 throughout the library. A state is a list of
// per-site occupations; the basis of all states with L sites and N bosons is
// kept in strict lexicographic order so indices are reproducible.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ebh {

using Occupation = std::uint8_t;

/// Raised when a requested Hilbert space would exceed the dimension ceiling.
class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class OccupationVector {
public:
  OccupationVector() = default;
  explicit OccupationVector(std::size_t sites) : n_(sites, 0) {}
  OccupationVector(std::initializer_list<int> occupations);
  explicit OccupationVector(std::span<const Occupation> occupations)
      : n_(occupations.begin(), occupations.end()) {}

  std::size_t sites() const { return n_.size(); }
  int operator[](std::size_t site) const { return n_[site]; }
  void set(std::size_t site, int count);
  int total() const;

  std::span<const Occupation> view() const { return n_; }
  std::string to_string() const;

  friend bool operator==(const OccupationVector&, const OccupationVector&) = default;
  friend auto operator<=>(const OccupationVector&, const OccupationVector&) = default;

private:
  std::vector<Occupation> n_;
};

/// Result of b^dagger_dest b_src acting on a Fock state.
struct HopResult {
  OccupationVector state;
  double amplitude;
};

/// Applies b^dagger_dest b_src. Returns nullopt when the source site is empty.
std::optional<HopResult> apply_hop(const OccupationVector& s, std::size_t dest,
                                   std::size_t src);

/// Binomial coefficient C(n, k); returns nullopt on 64-bit overflow.
std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k);

/// Number of ways to place N bosons on L sites, C(N+L-1, N).
std::optional<std::uint64_t> fock_dimension(int sites, int bosons);

inline constexpr std::size_t kDefaultMaxDimension = 5'000'000;

class BasisTable {
public:
  /// Enumerates every occupation vector with `bosons` particles on `sites`
  /// sites. Throws CapacityError when the dimension exceeds `max_dim`.
  BasisTable(int sites, int bosons, std::size_t max_dim = kDefaultMaxDimension);

  int sites() const { return sites_; }
  int bosons() const { return bosons_; }
  std::size_t dim() const { return dim_; }

  /// Occupations of basis state k, without copying.
  std::span<const Occupation> state(std::size_t k) const {
    return {states_.data() + k * static_cast<std::size_t>(sites_),
            static_cast<std::size_t>(sites_)};
  }

  OccupationVector unrank(std::size_t k) const;
  std::size_t rank(const OccupationVector& s) const;

  /// Rank lookup that reports absence instead of throwing.
  std::optional<std::size_t> find(std::span<const Occupation> s) const;

private:
  struct KeyHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view key) const {
      return std::hash<std::string_view>{}(key);
    }
  };

  static std::string_view key_of(std::span<const Occupation> s) {
    return {reinterpret_cast<const char*>(s.data()), s.size()};
  }

  int sites_;
  int bosons_;
  std::size_t dim_ = 0;
  std::vector<Occupation> states_;
  std::unordered_map<std::string, std::size_t, KeyHash, std::equal_to<>> index_;
};

/// Enumerates the N-boson basis on L sites.
BasisTable enumerate_basis(int sites, int bosons,
                           std::size_t max_dim = kDefaultMaxDimension);

}  // namespace ebh
