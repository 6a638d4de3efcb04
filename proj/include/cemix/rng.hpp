#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cemix/math_core.hpp"

namespace cemix {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

enum class Phase : std::uint8_t { pilot = 0, init = 1, final_is = 2, baseline = 3 };

std::string_view phase_name(Phase p);

/// Coordinates of a counter-based random stream. Every variate is a pure
/// function of (seed, phase, iteration, counter + sample index, slot), so a
/// batch can be split across workers in any way and still reproduce bit-for-bit.
struct RngStream {
  std::uint64_t seed = 0;
  Phase phase = Phase::pilot;
  std::uint32_t iteration = 0;
  std::uint64_t counter = 0;

  RngStream at(Phase p, std::uint32_t it) const { return {seed, p, it, 0}; }

  /// Uniform on the open interval (0, 1) for sample `index`, slot `slot`.
  double uniform(std::uint64_t index, std::uint32_t slot) const;
  /// Fills `out` with independent N(0,1) variates belonging to sample `index`.
  void normals(std::uint64_t index, std::span<double> out) const;
  /// Auxiliary uniform for sample `index`, disjoint from the normal slots.
  double aux_uniform(std::uint64_t index) const;

  bool operator==(const RngStream&) const = default;
};

/// Inverse of the standard normal distribution function on (0, 1).
double normal_quantile(double u);

/// n draws of dimension d, one per row, plus the stream that produced them.
struct SampleBatch {
  Matrix x;
  std::vector<std::uint32_t> labels;  // mixture component per draw (diagnostic only)
  RngStream stream;

  std::size_t size() const { return x.rows(); }
  std::size_t dim() const { return x.cols(); }
};

SampleBatch sample_std_normal(std::size_t d, std::size_t n, const RngStream& stream);

}  // namespace cemix
