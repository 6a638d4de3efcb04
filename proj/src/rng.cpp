#include "cemix/rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

namespace cemix {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// Slot reserved for the mixture component draw.
constexpr std::uint32_t kAuxBlock = 0xFFFFFFFFu;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  // 53 random bits, shifted by half an ulp so 0 and 1 are unreachable.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::array<std::uint32_t, 4> block(const RngStream& s, std::uint64_t index, std::uint32_t blk) {
  const std::uint64_t c = s.counter + index;
  const std::array<std::uint32_t, 4> ctr{
      blk, static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
      (static_cast<std::uint32_t>(s.phase) << 28) | (s.iteration & 0x0FFFFFFFu)};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(s.seed),
                                         static_cast<std::uint32_t>(s.seed >> 32)};
  return philox4x32(ctr, key);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::pilot: return "pilot";
    case Phase::init: return "init";
    case Phase::final_is: return "final-IS";
    case Phase::baseline: return "baseline";
  }
  return "unknown";
}

double RngStream::uniform(std::uint64_t index, std::uint32_t slot) const {
  const auto r = block(*this, index, slot / 2);
  return slot % 2 == 0 ? to_open_unit(r[0], r[1]) : to_open_unit(r[2], r[3]);
}

void RngStream::normals(std::uint64_t index, std::span<double> out) const {
  const std::size_t d = out.size();
  for (std::size_t i = 0; i < d; i += 2) {
    const auto r = block(*this, index, static_cast<std::uint32_t>(i / 2));
    out[i] = normal_quantile(to_open_unit(r[0], r[1]));
    if (i + 1 < d) out[i + 1] = normal_quantile(to_open_unit(r[2], r[3]));
  }
}

double RngStream::aux_uniform(std::uint64_t index) const {
  const auto r = block(*this, index, kAuxBlock);
  return to_open_unit(r[0], r[1]);
}

double normal_quantile(double u) {
  using namespace boost::math::policies;
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u, make_policy(promote_double<false>()));
}

SampleBatch sample_std_normal(std::size_t d, std::size_t n, const RngStream& stream) {
  SampleBatch batch{Matrix(n, d), std::vector<std::uint32_t>(n, 0), stream};
  for (std::size_t k = 0; k < n; ++k) stream.normals(k, batch.x.row(k));
  return batch;
}

}  // namespace cemix
