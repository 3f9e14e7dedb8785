#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "imgplag/vectorspace.hpp"

namespace imgplag {

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SvdOptions {
  double tol = 1e-10;                 // relative change of the Rayleigh quotient
  std::size_t max_iterations = 10000; // per component
  std::uint64_t seed = 42;            // start vectors
  double rank_cutoff = 1e-9;          // drop sigma_i < rank_cutoff * sigma_1
};

// Rank-r truncated SVD of a docs x terms matrix A = P diag(sigma) Q^T.
// term_factors holds Q (terms x r, orthonormal columns); doc_latent holds the
// folded-in documents, i.e. row d is diag(sigma)^-1 Q^T a_d, which equals P
// for an exact decomposition.
struct LatentIndex {
  std::vector<double> singular_values;  // non-increasing, positive
  DenseMatrix term_factors;
  DenseMatrix doc_latent;

  std::size_t rank() const { return singular_values.size(); }
  bool operator==(const LatentIndex&) const = default;
};

// r = min(k, numerical rank). Works on the Gram matrix of the smaller side
// with deflated power iteration, each component polished by Rayleigh quotient
// iteration. Throws ZeroMatrix for an all-zero input.
LatentIndex truncated_svd(std::span<const TermVector> rows, std::size_t n_terms, std::size_t k,
                          const SvdOptions& options = {});
LatentIndex truncated_svd(const DenseMatrix& matrix, std::size_t k, const SvdOptions& options = {});

// diag(sigma)^-1 Q^T q. Zero for a zero query.
std::vector<double> project_query(const TermVector& query, const LatentIndex& index);

}  // namespace imgplag
