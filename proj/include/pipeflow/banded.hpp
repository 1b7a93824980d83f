#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace pipeflow {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square matrix with kl sub- and ku super-diagonals, kept in LAPACK general
/// band layout with kl extra rows reserved for fill-in during factorization.
class BandMatrix {
 public:
  BandMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }

  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }
  /// Zero outside the band.
  double at(int i, int j) const { return in_band(i, j) ? data_[index(i, j)] : 0.0; }

  std::vector<double> multiply(std::span<const double> x) const;

 private:
  friend class BandLU;
  int index(int i, int j) const { return kl_ + ku_ + i - j + j * ld_; }

  int n_, kl_, ku_, ld_;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting (LAPACK dgbtrf/dgbtrs).
class BandLU {
 public:
  explicit BandLU(BandMatrix matrix);
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  BandMatrix lu_;
  std::vector<int> pivots_;
};

}  // namespace pipeflow
