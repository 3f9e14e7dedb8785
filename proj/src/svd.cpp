#include "imgplag/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "imgplag/errors.hpp"
#include "imgplag/hash.hpp"

namespace imgplag {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw std::invalid_argument("DenseMatrix: data size mismatch");
}

namespace {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void scale(Vec& v, double f) {
  for (double& x : v) x *= f;
}

// Two passes of classical Gram-Schmidt against `basis`.
void project_out(Vec& v, const std::vector<Vec>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      const double c = dot(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  }
}

Vec multiply(const DenseMatrix& m, const Vec& v) {
  Vec out(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = dot(m.row(r), v);
  return out;
}

// Solves (m) x = b with partial pivoting. Returns false for an exactly
// singular system.
bool solve(DenseMatrix m, Vec& b) {
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    }
    if (m(pivot, col) == 0.0) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(col, c), m(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m(i, c) * b[c];
    b[i] = s / m(i, i);
  }
  return std::all_of(b.begin(), b.end(), [](double x) { return std::isfinite(x); });
}

constexpr double kRoundoff = 1e-15;

bool orthogonal_to(const Vec& v, const std::vector<Vec>& basis) {
  return std::all_of(basis.begin(), basis.end(), [&](const Vec& b) { return std::abs(dot(v, b)) <= 1e-10; });
}

struct EigenPair {
  double sigma;
  Vec vector;
};

// Leading eigenvectors of the positive semi-definite `gram`, each paired with
// sigma = |A v| from `sigma_of`. Taking sigma from A rather than sqrt(lambda)
// keeps roundoff in the null space at eps * sigma_1 instead of sqrt(eps), so
// the rank cutoff sees it. Stops at the first sigma < cutoff * sigma_1.
template <class SigmaOf>
std::vector<EigenPair> top_eigenpairs(const DenseMatrix& gram, std::size_t k,
                                      const SvdOptions& opt, SigmaOf sigma_of) {
  const std::size_t d = gram.rows();
  SplitMix64 rng(opt.seed);
  std::vector<Vec> found;
  std::vector<EigenPair> pairs;
  double lambda_max = 0.0;
  double sigma_max = 0.0;

  for (std::size_t c = 0; c < std::min(k, d); ++c) {
    Vec v(d);
    for (double& x : v) x = 2.0 * rng.next_unit() - 1.0;
    project_out(v, found);
    double nv = norm(v);
    if (nv == 0.0) break;
    scale(v, 1.0 / nv);

    // Power iteration on (I - VV^T) G (I - VV^T).
    double lambda = 0.0;
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
      Vec w = multiply(gram, v);
      project_out(w, found);
      const double next = dot(v, w);
      const double nw = norm(w);
      // At roundoff level w carries no direction worth following; v is
      // already orthogonal to the found vectors, so keep it.
      if (nw <= kRoundoff * lambda_max * static_cast<double>(d)) {
        lambda = std::max(next, 0.0);
        break;
      }
      scale(w, 1.0 / nw);
      v = std::move(w);
      const bool converged = it > 0 && std::abs(next - lambda) <= opt.tol * std::abs(next);
      lambda = next;
      if (converged) break;
    }

    // Rayleigh quotient iteration on the deflated operator.
    if (lambda > 0.0) {
      // (I - VV^T) G (I - VV^T), formed column-wise from G (I - VV^T).
      DenseMatrix deflated = gram;
      for (const auto& b : found) {
        const Vec gb = multiply(deflated, b);
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) deflated(i, j) -= gb[i] * b[j];
        }
      }
      for (const auto& b : found) {
        Vec bt(d, 0.0);  // b^T * deflated
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) bt[j] += b[i] * deflated(i, j);
        }
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) deflated(i, j) -= b[i] * bt[j];
        }
      }
      // Found directions sit at eigenvalue 0 of the deflated operator, which
      // would make the shifted solve singular when the target is also near 0.
      // Move them far above the spectrum instead.
      const double parked = 2.0 * std::max(lambda_max, lambda) + 1.0;
      for (const auto& b : found) {
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) deflated(i, j) += parked * b[i] * b[j];
        }
      }
      const double scale_ref = std::max(lambda_max, lambda);
      for (int it = 0; it < 12; ++it) {
        Vec gv = multiply(deflated, v);
        double residual = 0.0;
        for (std::size_t i = 0; i < d; ++i) residual += (gv[i] - lambda * v[i]) * (gv[i] - lambda * v[i]);
        if (std::sqrt(residual) <= kRoundoff * scale_ref * static_cast<double>(d)) break;
        DenseMatrix shifted = deflated;
        for (std::size_t i = 0; i < d; ++i) shifted(i, i) -= lambda;
        Vec x = v;
        if (!solve(std::move(shifted), x)) break;
        project_out(x, found);
        const double nx = norm(x);
        if (nx == 0.0 || !std::isfinite(nx)) break;
        scale(x, 1.0 / nx);
        if (!orthogonal_to(x, found)) break;
        const double next = dot(x, multiply(deflated, x));
        v = std::move(x);
        lambda = next;
      }
    }

    if (c == 0) lambda_max = lambda;
    if (lambda <= 0.0 || !orthogonal_to(v, found)) break;
    const double sigma = sigma_of(v);
    if (c == 0) sigma_max = sigma;
    if (sigma <= 0.0 || sigma < opt.rank_cutoff * sigma_max) break;
    found.push_back(v);
    pairs.push_back({sigma, std::move(v)});
  }

  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.sigma > b.sigma; });
  return pairs;
}

// Largest-magnitude entry positive.
void fix_sign(Vec& v) {
  const auto it = std::max_element(v.begin(), v.end(),
                                    [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (it != v.end() && *it < 0.0) scale(v, -1.0);
}

}  // namespace

LatentIndex truncated_svd(std::span<const TermVector> rows, std::size_t n_terms, std::size_t k,
                          const SvdOptions& options) {
  if (k < 1) throw std::invalid_argument("truncated_svd: rank must be at least 1");
  const std::size_t m = rows.size();
  if (std::all_of(rows.begin(), rows.end(), [](const TermVector& r) { return r.empty(); })) {
    throw ZeroMatrix("truncated_svd: matrix has no nonzero entries");
  }
  for (const auto& r : rows) {
    if (!r.empty() && r.entries().back().first >= n_terms) {
      throw std::invalid_argument("truncated_svd: term index out of range");
    }
  }

  const bool term_side = n_terms <= m;
  const std::size_t d = term_side ? n_terms : m;
  DenseMatrix gram(d, d);
  if (term_side) {
    for (const auto& r : rows) {
      for (const auto& [i, wi] : r.entries()) {
        for (const auto& [j, wj] : r.entries()) gram(i, j) += wi * wj;
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) gram(i, j) = gram(j, i) = rows[i].dot(rows[j]);
    }
  }

  // A v for a term-side vector, A^T v for a doc-side one.
  const auto apply = [&](const Vec& v) {
    if (term_side) {
      Vec out(m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        for (const auto& [t, w] : rows[i].entries()) out[i] += w * v[t];
      }
      return out;
    }
    Vec out(n_terms, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [t, w] : rows[i].entries()) out[t] += w * v[i];
    }
    return out;
  };
  auto pairs = top_eigenpairs(gram, k, options, [&](const Vec& v) { return norm(apply(v)); });

  LatentIndex index;
  const std::size_t r = pairs.size();
  for (const auto& p : pairs) index.singular_values.push_back(p.sigma);

  std::vector<Vec> q_columns;
  if (term_side) {
    for (auto& p : pairs) q_columns.push_back(std::move(p.vector));
  } else {
    // Q_j = A^T P_j / sigma_j, re-orthonormalised in order.
    for (std::size_t j = 0; j < r; ++j) {
      Vec q = apply(pairs[j].vector);
      project_out(q, q_columns);
      scale(q, 1.0 / norm(q));
      q_columns.push_back(std::move(q));
    }
  }
  for (auto& q : q_columns) fix_sign(q);

  index.term_factors = DenseMatrix(n_terms, r);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t t = 0; t < n_terms; ++t) index.term_factors(t, j) = q_columns[j][t];
  }
  index.doc_latent = DenseMatrix(m, r);
  for (std::size_t i = 0; i < m; ++i) {
    const auto z = project_query(rows[i], index);
    for (std::size_t j = 0; j < r; ++j) index.doc_latent(i, j) = z[j];
  }
  return index;
}

LatentIndex truncated_svd(const DenseMatrix& matrix, std::size_t k, const SvdOptions& options) {
  std::vector<TermVector> rows;
  rows.reserve(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    std::vector<TermVector::Entry> entries;
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      if (matrix(i, j) != 0.0) entries.emplace_back(j, matrix(i, j));
    }
    rows.emplace_back(std::move(entries));
  }
  return truncated_svd(rows, matrix.cols(), k, options);
}

std::vector<double> project_query(const TermVector& query, const LatentIndex& index) {
  const std::size_t r = index.rank();
  std::vector<double> z(r, 0.0);
  for (const auto& [t, w] : query.entries()) {
    if (t >= index.term_factors.rows()) continue;
    for (std::size_t j = 0; j < r; ++j) z[j] += w * index.term_factors(t, j);
  }
  for (std::size_t j = 0; j < r; ++j) z[j] /= index.singular_values[j];
  return z;
}

}  // namespace imgplag
