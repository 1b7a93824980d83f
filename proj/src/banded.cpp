#include "pipeflow/banded.hpp"

#include <algorithm>
#include <string>

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab,
             const int* ldab, int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku,
             const int* nrhs, const double* ab, const int* ldab, const int* ipiv,
             double* b, const int* ldb, int* info);
}

namespace pipeflow {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1),
      data_(static_cast<std::size_t>(ld_) * n, 0.0) {
  if (n <= 0 || kl < 0 || ku < 0) {
    throw std::invalid_argument("invalid band matrix shape");
  }
}

std::vector<double> BandMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const int j0 = std::max(0, i - kl_);
    const int j1 = std::min(n_ - 1, i + ku_);
    double acc = 0.0;
    for (int j = j0; j <= j1; ++j) acc += data_[index(i, j)] * x[j];
    y[i] = acc;
  }
  return y;
}

BandLU::BandLU(BandMatrix matrix) : lu_(std::move(matrix)), pivots_(lu_.n_) {
  int info = 0;
  dgbtrf_(&lu_.n_, &lu_.n_, &lu_.kl_, &lu_.ku_, lu_.data_.data(), &lu_.ld_,
          pivots_.data(), &info);
  if (info > 0) {
    throw SingularMatrixError("band matrix singular at pivot " +
                              std::to_string(info));
  }
  if (info < 0) {
    throw std::invalid_argument("dgbtrf: bad argument " + std::to_string(-info));
  }
}

std::vector<double> BandLU::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  const char trans = 'N';
  const int nrhs = 1;
  int info = 0;
  dgbtrs_(&trans, &lu_.n_, &lu_.kl_, &lu_.ku_, &nrhs, lu_.data_.data(), &lu_.ld_,
          pivots_.data(), x.data(), &lu_.n_, &info);
  if (info != 0) {
    throw std::invalid_argument("dgbtrs: bad argument " + std::to_string(-info));
  }
  return x;
}

}  // namespace pipeflow
