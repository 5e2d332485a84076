#include "ebh/fock.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ebh {

OccupationVector::OccupationVector(std::initializer_list<int> occupations) {
  n_.reserve(occupations.size());
  for (int n : occupations) {
    if (n < 0 || n > std::numeric_limits<Occupation>::max())
      throw std::invalid_argument("occupation out of range");
    n_.push_back(static_cast<Occupation>(n));
  }
}

void OccupationVector::set(std::size_t site, int count) {
  if (count < 0 || count > std::numeric_limits<Occupation>::max())
    throw std::invalid_argument("occupation out of range");
  n_.at(site) = static_cast<Occupation>(count);
}

int OccupationVector::total() const {
  return std::accumulate(n_.begin(), n_.end(), 0);
}

std::string OccupationVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < n_.size(); ++j) {
    if (j) os << ',';
    os << static_cast<int>(n_[j]);
  }
  os << ')';
  return os.str();
}

std::optional<HopResult> apply_hop(const OccupationVector& s, std::size_t dest,
                                   std::size_t src) {
  if (dest == src || dest >= s.sites() || src >= s.sites())
    throw std::invalid_argument("apply_hop: need two distinct valid sites");
  const int n_src = s[src];
  const int n_dest = s[dest];
  if (n_src == 0) return std::nullopt;
  HopResult out{s, std::sqrt(static_cast<double>(n_src) * (n_dest + 1))};
  out.state.set(src, n_src - 1);
  out.state.set(dest, n_dest + 1);
  return out;
}

std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i at every step.
    const std::uint64_t factor = n - k + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t r = result / g;
    const std::uint64_t f = factor / (i / g);
    if (r != 0 && f > std::numeric_limits<std::uint64_t>::max() / r)
      return std::nullopt;
    result = r * f;
  }
  return result;
}

std::optional<std::uint64_t> fock_dimension(int sites, int bosons) {
  if (sites < 1 || bosons < 0) return 0;
  return binomial(static_cast<std::uint64_t>(bosons + sites - 1),
                  static_cast<std::uint64_t>(bosons));
}

namespace {

// Appends every composition of `remaining` over sites [site, L) in
// lexicographic order.
void enumerate(std::vector<Occupation>& prefix, std::size_t site, int remaining,
               std::vector<Occupation>& out) {
  if (site + 1 == prefix.size()) {
    prefix[site] = static_cast<Occupation>(remaining);
    out.insert(out.end(), prefix.begin(), prefix.end());
    return;
  }
  for (int n = 0; n <= remaining; ++n) {
    prefix[site] = static_cast<Occupation>(n);
    enumerate(prefix, site + 1, remaining - n, out);
  }
}

}  // namespace

BasisTable::BasisTable(int sites, int bosons, std::size_t max_dim)
    : sites_(sites), bosons_(bosons) {
  if (sites < 1) throw std::invalid_argument("basis needs at least one site");
  if (bosons < 0) throw std::invalid_argument("boson count must be non-negative");
  if (bosons > std::numeric_limits<Occupation>::max())
    throw CapacityError("boson count exceeds per-site occupation storage (255)");

  const auto dim = fock_dimension(sites, bosons);
  if (!dim || *dim > max_dim) {
    std::ostringstream os;
    os << "basis for L=" << sites << ", N=" << bosons << " has dimension "
       << (dim ? std::to_string(*dim) : std::string("> 2^64"))
       << ", above the ceiling " << max_dim;
    throw CapacityError(os.str());
  }
  dim_ = static_cast<std::size_t>(*dim);

  states_.reserve(dim_ * static_cast<std::size_t>(sites_));
  std::vector<Occupation> prefix(static_cast<std::size_t>(sites_), 0);
  enumerate(prefix, 0, bosons_, states_);

  index_.reserve(dim_);
  for (std::size_t k = 0; k < dim_; ++k)
    index_.emplace(std::string(key_of(state(k))), k);
}

OccupationVector BasisTable::unrank(std::size_t k) const {
  if (k >= dim_) throw std::out_of_range("unrank: index beyond basis dimension");
  return OccupationVector(state(k));
}

std::optional<std::size_t> BasisTable::find(std::span<const Occupation> s) const {
  if (s.size() != static_cast<std::size_t>(sites_)) return std::nullopt;
  auto it = index_.find(key_of(s));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t BasisTable::rank(const OccupationVector& s) const {
  auto k = find(s.view());
  if (!k) throw std::out_of_range("rank: state " + s.to_string() + " not in basis");
  return *k;
}

BasisTable enumerate_basis(int sites, int bosons, std::size_t max_dim) {
  return BasisTable(sites, bosons, max_dim);
}

}  // namespace ebh
