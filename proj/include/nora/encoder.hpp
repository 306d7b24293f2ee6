// SPDX-License-Identifier: Apache-2.0
#pragma once

// Layered random-Clifford encoders. Layer l acts on n_l = k + r^l sites: the
// previous n_{l-1} sites plus dn_l fresh |0> ancillas. Each layer circuit has
// `depth` sub-layers; a sub-layer permutes the sites uniformly and applies
// independent uniformly random q-site Cliffords to consecutive blocks of the
// permuted order, leaving the n_l mod q tail sites idle.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nora/clifford.hpp"
#include "nora/rng.hpp"
#include "nora/stabilizer.hpp"

namespace nora {

/// k logical qudits and L layers.
struct FixedMode {
  std::size_t k = 2;
  std::size_t layers = 3;
  friend bool operator==(const FixedMode&, const FixedMode&) = default;
};

/// k = r^a and L = a + b, so N = r^a + r^{a+b}.
struct SykMode {
  std::size_t a = 1;
  std::size_t b = 1;
  friend bool operator==(const SykMode&, const SykMode&) = default;
};

inline std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) {
    if (__builtin_mul_overflow(r, base, &r)) throw std::overflow_error("r^L exceeds the machine range");
  }
  return r;
}

struct NoraParams {
  unsigned d = 3;
  std::size_t q = 2;
  std::size_t r = 2;
  std::size_t depth = 1;
  std::variant<FixedMode, SykMode> mode = FixedMode{};
  std::uint64_t seed = 0;

  bool is_syk() const noexcept { return std::holds_alternative<SykMode>(mode); }

  std::size_t k() const {
    if (auto* f = std::get_if<FixedMode>(&mode)) return f->k;
    return checked_pow(r, std::get<SykMode>(mode).a);
  }
  std::size_t layers() const {
    if (auto* f = std::get_if<FixedMode>(&mode)) return f->layers;
    const auto& s = std::get<SykMode>(mode);
    return s.a + s.b;
  }
  /// Physical qudit count n_L = k + r^L.
  std::size_t N() const {
    std::size_t n;
    if (__builtin_add_overflow(k(), checked_pow(r, layers()), &n)) throw std::overflow_error("N overflows");
    return n;
  }

  void validate() const {
    if (!is_prime(d) || d == 2 || d > kMaxModulus) throw std::invalid_argument("d must be an odd prime <= 251");
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    if (r < 2) throw std::invalid_argument("r must be >= 2");
    if (depth < 1) throw std::invalid_argument("D must be >= 1");
    if (layers() < 1) throw std::invalid_argument("L must be >= 1");
    (void)N();
  }

  friend bool operator==(const NoraParams&, const NoraParams&) = default;
};

struct LayerSizes {
  std::vector<std::size_t> sizes;       ///< n_0 ... n_L
  std::vector<std::size_t> increments;  ///< dn_1 ... dn_L
};

/// n_0 = k, n_l = k + r^l; dn_1 = r, dn_l = r^l − r^{l−1}.
inline LayerSizes layer_sizes(const NoraParams& p) {
  LayerSizes out;
  const std::size_t k = p.k();
  out.sizes.push_back(k);
  for (std::size_t l = 1; l <= p.layers(); ++l) {
    out.sizes.push_back(k + checked_pow(p.r, l));
    out.increments.push_back(out.sizes[l] - out.sizes[l - 1]);
  }
  return out;
}

struct Gate {
  std::vector<std::size_t> sites;
  SymplecticClifford clifford;
  friend bool operator==(const Gate&, const Gate&) = default;
};

struct SubLayer {
  std::vector<std::size_t> permutation;
  std::vector<Gate> gates;
  friend bool operator==(const SubLayer&, const SubLayer&) = default;
};

struct LayerCircuit {
  std::size_t num_sites = 0;
  std::vector<SubLayer> sublayers;

  std::size_t gate_count() const noexcept {
    std::size_t total = 0;
    for (const auto& s : sublayers) total += s.gates.size();
    return total;
  }
  friend bool operator==(const LayerCircuit&, const LayerCircuit&) = default;
};

inline SubLayer random_sublayer(std::size_t n_sites, std::size_t q, unsigned d, Rng& rng) {
  SubLayer s;
  s.permutation.resize(n_sites);
  std::iota(s.permutation.begin(), s.permutation.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(s.permutation));
  const std::size_t gates = n_sites / q;
  s.gates.reserve(gates);
  for (std::size_t g = 0; g < gates; ++g) {
    std::vector<std::size_t> sites(s.permutation.begin() + static_cast<std::ptrdiff_t>(g * q),
                                   s.permutation.begin() + static_cast<std::ptrdiff_t>((g + 1) * q));
    s.gates.push_back({std::move(sites), random_symplectic(q, d, rng)});
  }
  return s;
}

inline LayerCircuit build_layer(std::size_t n_sites, const NoraParams& p, Rng& rng) {
  if (n_sites < p.q) throw std::invalid_argument("layer has fewer sites than the gate arity");
  LayerCircuit c{n_sites, {}};
  c.sublayers.reserve(p.depth);
  for (std::size_t m = 0; m < p.depth; ++m) c.sublayers.push_back(random_sublayer(n_sites, p.q, p.d, rng));
  return c;
}

/// One circuit per layer l = 1..L, acting on n_l sites.
inline std::vector<LayerCircuit> build_encoder(const NoraParams& p, Rng& rng) {
  p.validate();
  const auto sizes = layer_sizes(p);
  std::vector<LayerCircuit> layers;
  layers.reserve(p.layers());
  for (std::size_t l = 1; l <= p.layers(); ++l) layers.push_back(build_layer(sizes.sizes[l], p, rng));
  return layers;
}

inline std::vector<LayerCircuit> build_encoder(const NoraParams& p) {
  Rng rng(p.seed);
  return build_encoder(p, rng);
}

inline void apply_sublayer(StabilizerTableau& t, const SubLayer& s, std::size_t offset = 0) {
  std::vector<std::size_t> sites;
  for (const auto& g : s.gates) {
    sites.assign(g.sites.begin(), g.sites.end());
    for (auto& x : sites) x += offset;
    t.apply_local(g.clifford, sites);
  }
}

/// Applies a layer circuit to sites [offset, offset + num_sites) of the tableau.
inline void apply_layer(StabilizerTableau& t, const LayerCircuit& c, std::size_t offset = 0) {
  if (offset + c.num_sites > t.n()) throw std::invalid_argument("layer circuit exceeds tableau size");
  for (const auto& s : c.sublayers) apply_sublayer(t, s, offset);
}

/// The full encoder as a single Clifford on N sites (for small-instance checks).
inline SymplecticClifford encoder_clifford(const NoraParams& p, const std::vector<LayerCircuit>& layers) {
  const std::size_t n = p.N();
  SymplecticClifford total = SymplecticClifford::identity(n, p.d);
  for (const auto& layer : layers)
    for (const auto& s : layer.sublayers)
      for (const auto& g : s.gates) total = compose(embed(g.clifford, g.sites, n), total);
  return total;
}

struct EncodedState {
  StabilizerTableau tableau;  ///< k reference sites, then N physical sites
  RegionMask reference;
  RegionMask physical;
  NoraParams params;
};

/// Reference site i and logical site i share the Bell pair stabilized by
/// X_R X_L and Z_R Z_L^{-1}; physical sites beyond the logical ones start in
/// |0>. The encoder then acts on the physical sites only.
inline EncodedState encode_with_reference(const NoraParams& p, Rng& rng) {
  p.validate();
  const std::size_t k = p.k();
  if (k < 1) throw std::invalid_argument("encoding with a reference needs k >= 1");
  const auto circuits = build_encoder(p, rng);
  const auto sizes = layer_sizes(p);

  FieldMatrix g(2 * k, 4 * k, p.d);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t ref = i, logical = k + i;
    g(2 * i, 2 * ref + 1) = 1;
    g(2 * i, 2 * logical + 1) = 1;
    g(2 * i + 1, 2 * ref) = 1;
    g(2 * i + 1, 2 * logical) = static_cast<elem_t>(p.d - 1);
  }
  StabilizerTableau t(std::move(g), std::vector<elem_t>(2 * k, 0));
  for (std::size_t l = 1; l <= p.layers(); ++l) {
    t = append_ancillas(t, sizes.increments[l - 1]);
    apply_layer(t, circuits[l - 1], k);
  }
  const std::size_t total = k + p.N();
  return {std::move(t), RegionMask::range(0, k, total), RegionMask::range(k, total, total), p};
}

/// Same site layout as encode_with_reference (Bell pairs plus N − k ancillas)
/// with no gates applied.
inline EncodedState unencoded_reference_state(const NoraParams& p) {
  p.validate();
  const std::size_t k = p.k();
  if (k < 1) throw std::invalid_argument("encoding with a reference needs k >= 1");
  FieldMatrix g(2 * k, 4 * k, p.d);
  for (std::size_t i = 0; i < k; ++i) {
    g(2 * i, 2 * i + 1) = 1;
    g(2 * i, 2 * (k + i) + 1) = 1;
    g(2 * i + 1, 2 * i) = 1;
    g(2 * i + 1, 2 * (k + i)) = static_cast<elem_t>(p.d - 1);
  }
  StabilizerTableau t(std::move(g), std::vector<elem_t>(2 * k, 0));
  t = append_ancillas(t, p.N() - k);
  const std::size_t total = k + p.N();
  return {std::move(t), RegionMask::range(0, k, total), RegionMask::range(k, total, total), p};
}

inline EncodedState encode_with_reference(const NoraParams& p) {
  Rng rng(p.seed);
  return encode_with_reference(p, rng);
}

/// Without a reference: logical sites start in |0> as well. Calls
/// `on_layer(l, tableau)` after layer l has been applied (and once for l = 0).
inline StabilizerTableau encode_code_state(
    const NoraParams& p, Rng& rng,
    const std::function<void(std::size_t, const StabilizerTableau&)>& on_layer = {}) {
  p.validate();
  const auto circuits = build_encoder(p, rng);
  const auto sizes = layer_sizes(p);
  StabilizerTableau t(FieldMatrix(0, 0, p.d), {});
  t = append_ancillas(t, p.k());
  if (on_layer) on_layer(0, t);
  for (std::size_t l = 1; l <= p.layers(); ++l) {
    t = append_ancillas(t, sizes.increments[l - 1]);
    apply_layer(t, circuits[l - 1]);
    if (on_layer) on_layer(l, t);
  }
  return t;
}

/// Gates actually placed: Σ_l D ⌊n_l / q⌋.
inline std::uint64_t gate_count(const NoraParams& p) {
  const auto sizes = layer_sizes(p);
  std::uint64_t total = 0;
  for (std::size_t l = 1; l < sizes.sizes.size(); ++l) total += p.depth * (sizes.sizes[l] / p.q);
  return total;
}

/// (D/q)(L·k + (r^{L+1} − r)/(r − 1)); defined when q divides every n_l.
inline std::optional<std::uint64_t> gate_count_closed_form(const NoraParams& p) {
  const auto sizes = layer_sizes(p);
  for (std::size_t l = 1; l < sizes.sizes.size(); ++l)
    if (sizes.sizes[l] % p.q != 0) return std::nullopt;
  const std::uint64_t geometric = (checked_pow(p.r, p.layers() + 1) - p.r) / (p.r - 1);
  const std::uint64_t sum = p.layers() * p.k() + geometric;
  return p.depth * sum / p.q;
}

}  // namespace nora
