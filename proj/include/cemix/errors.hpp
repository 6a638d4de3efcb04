#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cemix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : Error("matrix is not positive definite (pivot " + std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

class RankOutOfRange : public Error {
 public:
  using Error::Error;
};

class NoBracket : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

// Raised when the likelihood-weighted payoff mass of a pilot batch is zero.
class DegenerateUpdate : public Error {
 public:
  explicit DegenerateUpdate(std::size_t iteration)
      : Error("degenerate cross-entropy update at iteration " + std::to_string(iteration) +
              ": no pilot sample carries positive payoff"),
        iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

class StagnantRarity : public Error {
 public:
  explicit StagnantRarity(std::size_t stages)
      : Error("rarity parameter did not reach 1 within " + std::to_string(stages) + " stages"),
        stages_(stages) {}
  std::size_t stages() const { return stages_; }

 private:
  std::size_t stages_;
};

class ApproxUnavailable : public Error {
 public:
  using Error::Error;
};

class EmbeddingUnavailable : public Error {
 public:
  using Error::Error;
};

class UnequalSampleSize : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cemix
