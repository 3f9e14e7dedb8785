#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "imgplag/svd.hpp"

// Reference implementations used to cross-check the library. Each oracle takes
// the slow, obvious route and shares no code with the path it checks.
namespace imgplag::oracle {

// Intersection by linear scan over two unsorted lists.
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Plain dense cosine; 0 if either vector is zero.
double dense_cosine(const std::vector<double>& u, const std::vector<double>& v);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
std::vector<double> jacobi_eigenvalues(DenseMatrix symmetric, double tol = 1e-15,
                                       std::size_t max_sweeps = 100);

// Undirected all-pairs hop distances by one BFS per node. `parents[i]` lists
// the parents of node i. When there is more than one root an extra node n is
// added and linked to every root.
std::vector<std::vector<std::size_t>> bfs_distances(const std::vector<std::vector<std::size_t>>& parents);

}  // namespace imgplag::oracle

namespace imgplag::selftest {

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
  double seconds = 0.0;

  bool passed() const { return failures == 0 && checks > 0; }
};

struct JaccardSuite {
  std::size_t pairs = 1000;
  std::size_t max_size = 50;
  std::uint64_t seed = 42;
};
SuiteResult run_jaccard(const JaccardSuite& cfg = {});

struct CosineSuite {
  std::size_t pairs = 1000;
  std::size_t dim = 200;
  std::size_t max_nonzeros = 40;
  double tol = 1e-12;
  std::uint64_t seed = 42;
};
SuiteResult run_cosine(const CosineSuite& cfg = {});

struct SvdSuite {
  std::size_t trials = 200;
  std::size_t max_dim = 8;
  double sigma_tol = 1e-8;        // absolute, against the Jacobi oracle
  double orthonormal_tol = 1e-8;
  double energy_tol = 1e-6;       // relative
  std::uint64_t seed = 42;
};
SuiteResult run_svd(const SvdSuite& cfg = {});

struct WordnetSuite {
  std::size_t taxonomies = 50;
  std::size_t max_synsets = 30;
  std::uint64_t seed = 42;
};
// Random DAGs against the BFS oracle, plus the toy taxonomy values.
SuiteResult run_wordnet(const WordnetSuite& cfg = {});

inline const std::vector<std::string> kSuiteNames = {"jaccard", "cosine", "svd", "wordnet"};

struct Options {
  std::set<std::string> only;          // empty runs every suite
  std::optional<double> svd_tolerance; // overrides SvdSuite::sigma_tol
};

// Prints one line per suite and a summary. Returns true iff all passed.
bool run_all(const Options& options, std::ostream& out);

}  // namespace imgplag::selftest
