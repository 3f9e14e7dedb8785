#include "imgplag/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "imgplag/hash.hpp"
#include "imgplag/similarity.hpp"
#include "imgplag/resources.hpp"
#include "imgplag/wordnet.hpp"

namespace imgplag::oracle {

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto has = [](const std::vector<std::string>& list, const std::string& x) {
    for (const auto& y : list) {
      if (y == x) return true;
    }
    return false;
  };
  std::vector<std::string> ua, ub;
  for (const auto& x : a) {
    if (!has(ua, x)) ua.push_back(x);
  }
  for (const auto& x : b) {
    if (!has(ub, x)) ub.push_back(x);
  }
  std::size_t inter = 0;
  for (const auto& x : ua) {
    if (has(ub, x)) ++inter;
  }
  const std::size_t uni = ua.size() + ub.size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double dense_cosine(const std::vector<double>& u, const std::vector<double>& v) {
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

std::vector<double> jacobi_eigenvalues(DenseMatrix a, double tol, std::size_t max_sweeps) {
  const std::size_t n = a.rows();
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        total += a(i, j) * a(i, j);
        if (i != j) off += a(i, j) * a(i, j);
      }
    }
    if (off <= tol * tol * total) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

std::vector<std::vector<std::size_t>> bfs_distances(const std::vector<std::vector<std::size_t>>& parents) {
  const std::size_t n = parents.size();
  std::size_t roots = 0;
  for (const auto& p : parents) roots += p.empty() ? 1 : 0;
  const bool virtual_root = roots > 1;
  const std::size_t total = n + (virtual_root ? 1 : 0);

  std::vector<std::vector<std::size_t>> adj(total);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto p : parents[i]) {
      adj[i].push_back(p);
      adj[p].push_back(i);
    }
    if (virtual_root && parents[i].empty()) {
      adj[i].push_back(n);
      adj[n].push_back(i);
    }
  }

  constexpr auto kFar = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> dist(total, std::vector<std::size_t>(total, kFar));
  for (std::size_t s = 0; s < total; ++s) {
    std::deque<std::size_t> queue{s};
    dist[s][s] = 0;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto v : adj[u]) {
        if (dist[s][v] == kFar) {
          dist[s][v] = dist[s][u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

}  // namespace imgplag::oracle

namespace imgplag::selftest {

namespace {

using Clock = std::chrono::steady_clock;

std::size_t uniform(SplitMix64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next() % (hi - lo + 1));
}

void fail(SuiteResult& r, std::string what) {
  if (r.failures++ == 0) r.first_failure = std::move(what);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Upward hop depth in the convention used for Wu-Palmer: the top node (the
// single root, or the virtual root) has depth 1.
std::vector<std::size_t> upward_depths(const std::vector<std::vector<std::size_t>>& parents) {
  const std::size_t n = parents.size();
  std::size_t roots = 0;
  for (const auto& p : parents) roots += p.empty() ? 1 : 0;
  const std::size_t root_depth = roots > 1 ? 2 : 1;
  std::vector<std::size_t> depth(n, 0);
  // Parents always precede children in the generated taxonomies.
  for (std::size_t i = 0; i < n; ++i) {
    if (parents[i].empty()) {
      depth[i] = root_depth;
      continue;
    }
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (auto p : parents[i]) best = std::min(best, depth[p] + 1);
    depth[i] = best;
  }
  return depth;
}

std::vector<bool> ancestors_of(const std::vector<std::vector<std::size_t>>& parents, std::size_t s) {
  std::vector<bool> seen(parents.size(), false);
  std::vector<std::size_t> stack{s};
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    for (auto p : parents[u]) stack.push_back(p);
  }
  return seen;
}

std::string synset_name(std::size_t i) { return fmt::format("s{:02}", i); }

}  // namespace

SuiteResult run_jaccard(const JaccardSuite& cfg) {
  const auto start = Clock::now();
  SuiteResult r;
  r.name = "jaccard";
  SplitMix64 rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.pairs; ++t) {
    std::vector<std::string> a, b;
    const std::size_t vocab = uniform(rng, 1, 2 * cfg.max_size);
    const std::size_t na = uniform(rng, 0, cfg.max_size);
    const std::size_t nb = uniform(rng, 0, cfg.max_size);
    for (std::size_t i = 0; i < na; ++i) a.push_back(fmt::format("w{}", uniform(rng, 0, vocab - 1)));
    for (std::size_t i = 0; i < nb; ++i) b.push_back(fmt::format("w{}", uniform(rng, 0, vocab - 1)));
    const std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    const double got = imgplag::jaccard(sa, sb).value;
    const double want = oracle::jaccard(a, b);
    ++r.checks;
    if (got != want) fail(r, fmt::format("pair {}: got {} want {}", t, got, want));
  }
  r.seconds = seconds_since(start);
  return r;
}

SuiteResult run_cosine(const CosineSuite& cfg) {
  const auto start = Clock::now();
  SuiteResult r;
  r.name = "cosine";
  SplitMix64 rng(cfg.seed);
  const auto random_vector = [&](std::vector<double>& dense) {
    dense.assign(cfg.dim, 0.0);
    std::vector<TermVector::Entry> entries;
    const std::size_t nnz = uniform(rng, 0, cfg.max_nonzeros);
    for (std::size_t i = 0; i < nnz; ++i) {
      const std::size_t idx = uniform(rng, 0, cfg.dim - 1);
      const double w = rng.next_unit() * 10.0;
      entries.emplace_back(idx, w);
      dense[idx] += w;
    }
    return TermVector(std::move(entries));
  };
  for (std::size_t t = 0; t < cfg.pairs; ++t) {
    std::vector<double> du, dv;
    const TermVector u = random_vector(du);
    const TermVector v = random_vector(dv);
    const double got = imgplag::cosine(u, v).value;
    const double want = oracle::dense_cosine(du, dv);
    ++r.checks;
    if (!(std::abs(got - want) <= cfg.tol)) fail(r, fmt::format("pair {}: got {} want {}", t, got, want));
  }
  r.seconds = seconds_since(start);
  return r;
}

SuiteResult run_svd(const SvdSuite& cfg) {
  const auto start = Clock::now();
  SuiteResult r;
  r.name = "svd";
  SplitMix64 rng(cfg.seed);
  const SvdOptions svd_options;

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const std::size_t m = uniform(rng, 1, cfg.max_dim);
    const std::size_t n = uniform(rng, 1, cfg.max_dim);
    DenseMatrix a(m, n);
    const std::size_t kind = t % 3;
    if (kind == 2 && std::min(m, n) > 1) {
      // Rank deficient: product of m x p and p x n factors.
      const std::size_t p = uniform(rng, 1, std::min(m, n) - 1);
      DenseMatrix left(m, p), right(p, n);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < p; ++j) left(i, j) = 2.0 * rng.next_unit() - 1.0;
      }
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < n; ++j) right(i, j) = 2.0 * rng.next_unit() - 1.0;
      }
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t l = 0; l < p; ++l) a(i, j) += left(i, l) * right(l, j);
        }
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          // Every other trial is sparse and nonnegative, like TF-IDF rows.
          if (kind == 1) a(i, j) = rng.next_unit() < 0.5 ? 0.0 : rng.next_unit();
          else a(i, j) = 2.0 * rng.next_unit() - 1.0;
        }
      }
    }
    bool zero = true;
    for (double x : a.data()) zero = zero && x == 0.0;
    if (zero) a(0, 0) = 1.0;

    DenseMatrix ata(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < m; ++l) ata(i, j) += a(l, i) * a(l, j);
      }
    }
    const auto lambda = oracle::jacobi_eigenvalues(ata);
    double frob2 = 0.0;
    for (double x : a.data()) frob2 += x * x;

    const std::size_t full = std::min(m, n);
    const LatentIndex idx = truncated_svd(a, full, svd_options);
    const std::size_t rank = idx.rank();
    const auto where = [&](std::string_view what) {
      return fmt::format("trial {} ({}x{}): {}", t, m, n, what);
    };

    ++r.checks;
    if (rank < 1 || rank > full) fail(r, where(fmt::format("rank {}", rank)));
    for (std::size_t i = 0; i < rank; ++i) {
      const double want = std::sqrt(std::max(lambda[i], 0.0));
      const double got = idx.singular_values[i];
      ++r.checks;

      if (!(std::abs(got - want) <= cfg.sigma_tol)) {
        fail(r, where(fmt::format("sigma[{}] = {:.17g}, oracle {:.17g}", i, got, want)));
      }
      ++r.checks;
      if (!(got > 0.0) || (i > 0 && got > idx.singular_values[i - 1])) {
        fail(r, where(fmt::format("sigma[{}] not positive and non-increasing", i)));
      }
    }
    // Dropped components must be numerically zero. A Gram-based oracle only
    // resolves eigenvalues down to roundoff of about eps * lambda_1.
    for (std::size_t i = rank; i < full; ++i) {
      ++r.checks;
      if (!(lambda[i] <= 1e-12 * std::max(lambda[0], 1.0))) {
        fail(r, where(fmt::format("dropped component {} has oracle eigenvalue {:.3g}", i, lambda[i])));
      }
    }

    const auto orthonormal = [&](const DenseMatrix& f, std::string_view label) {
      for (std::size_t i = 0; i < f.cols(); ++i) {
        for (std::size_t j = i; j < f.cols(); ++j) {
          double s = 0.0;
          for (std::size_t row = 0; row < f.rows(); ++row) s += f(row, i) * f(row, j);
          ++r.checks;
          if (!(std::abs(s - (i == j ? 1.0 : 0.0)) <= cfg.orthonormal_tol)) {
            fail(r, where(fmt::format("{} columns {},{} inner product {:.3g}", label, i, j, s)));
          }
        }
      }
    };
    orthonormal(idx.term_factors, "term factor");
    orthonormal(idx.doc_latent, "document factor");

    // Discarded energy for a random truncation.
    const std::size_t k = uniform(rng, 1, full);
    const LatentIndex trunc = truncated_svd(a, k, svd_options);
    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double approx = 0.0;
        for (std::size_t c = 0; c < trunc.rank(); ++c) {
          approx += trunc.doc_latent(i, c) * trunc.singular_values[c] * trunc.term_factors(j, c);
        }
        residual += (a(i, j) - approx) * (a(i, j) - approx);
      }
    }
    double discarded = 0.0;
    for (std::size_t i = trunc.rank(); i < n; ++i) discarded += std::max(lambda[i], 0.0);
    ++r.checks;
    // The oracle's zero eigenvalues carry absolute roundoff of order
    // n * eps * |A|_F^2; below that the relative test is meaningless.
    const double floor = 64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * frob2;
    if (!(std::abs(residual - discarded) <= cfg.energy_tol * discarded + floor)) {
      fail(r, where(fmt::format("k={} residual {:.6g} vs discarded {:.6g}", k, residual, discarded)));
    }
  }
  r.seconds = seconds_since(start);
  return r;
}

SuiteResult run_wordnet(const WordnetSuite& cfg) {
  const auto start = Clock::now();
  SuiteResult r;
  r.name = "wordnet";
  SplitMix64 rng(cfg.seed);

  for (std::size_t t = 0; t < cfg.taxonomies; ++t) {
    const std::size_t n = uniform(rng, 1, cfg.max_synsets);
    std::vector<std::vector<std::size_t>> parents(n);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && rng.next_unit() >= 0.15) {
        const std::size_t count = uniform(rng, 1, std::min<std::size_t>(3, i));
        for (std::size_t c = 0; c < count; ++c) {
          const std::size_t p = uniform(rng, 0, i - 1);
          if (std::find(parents[i].begin(), parents[i].end(), p) == parents[i].end()) parents[i].push_back(p);
        }
      }
      std::string plist;
      for (auto p : parents[i]) plist += (plist.empty() ? "" : ",") + synset_name(p);
      text += fmt::format("{}|n|{}|{}\n", synset_name(i), fmt::format("w{}", i), plist);
    }

    Lexicon lex;
    try {
      lex = Lexicon::parse(text);
    } catch (const std::exception& e) {
      ++r.checks;
      fail(r, fmt::format("taxonomy {}: parse failed: {}", t, e.what()));
      continue;
    }
    const auto dist = oracle::bfs_distances(parents);
    const auto depth = upward_depths(parents);
    std::vector<std::vector<bool>> anc(n);
    for (std::size_t i = 0; i < n; ++i) anc[i] = ancestors_of(parents, i);
    std::size_t roots = 0;
    for (const auto& p : parents) roots += p.empty() ? 1 : 0;

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto a = synset_name(i), b = synset_name(j);
        const double want_path = 1.0 / (1.0 + static_cast<double>(dist[i][j]));
        ++r.checks;
        if (lex.path_similarity(a, b) != want_path) {
          fail(r, fmt::format("taxonomy {}: path({}, {}) = {} oracle {}", t, a, b,
                              lex.path_similarity(a, b), want_path));
        }
        // Deepest common ancestor, smallest id on ties; the virtual root has depth 1.
        std::size_t lcs_depth = roots > 1 ? 1 : 0;
        for (std::size_t c = 0; c < n; ++c) {
          if (anc[i][c] && anc[j][c] && depth[c] > lcs_depth) lcs_depth = depth[c];
        }
        const double want_wup = 2.0 * static_cast<double>(lcs_depth) /
                                static_cast<double>(depth[i] + depth[j]);
        ++r.checks;
        if (lex.wu_palmer(a, b) != want_wup) {
          fail(r, fmt::format("taxonomy {}: wu_palmer({}, {}) = {} oracle {}", t, a, b,
                              lex.wu_palmer(a, b), want_wup));
        }
        ++r.checks;
        if (lex.path_similarity(a, b) != lex.path_similarity(b, a) || lex.wu_palmer(a, b) != lex.wu_palmer(b, a)) {
          fail(r, fmt::format("taxonomy {}: asymmetric measure for {}, {}", t, a, b));
        }
      }
    }
  }

  const Lexicon toy = Lexicon::parse(resources::toy_lexicon());
  const auto expect = [&](std::string_view what, double got, double want) {
    ++r.checks;
    if (!(std::abs(got - want) <= 1e-9)) fail(r, fmt::format("toy {}: {} vs {}", what, got, want));
  };
  expect("wu_palmer(dog, cat)", toy.wu_palmer("dog", "cat"), 2.0 / 3.0);
  expect("path(dog, cat)", toy.path_similarity("dog", "cat"), 1.0 / 3.0);
  expect("wu_palmer(dog, animal)", toy.wu_palmer("dog", "animal"), 0.8);
  expect("path(dog, entity)", toy.path_similarity("dog", "entity"), 1.0 / 3.0);

  r.seconds = seconds_since(start);
  return r;
}

bool run_all(const Options& options, std::ostream& out) {
  for (const auto& name : options.only) {
    if (std::find(kSuiteNames.begin(), kSuiteNames.end(), name) == kSuiteNames.end()) {
      throw std::invalid_argument("unknown selftest suite '" + name + "'");
    }
  }
  const auto wanted = [&](const std::string& name) {
    return options.only.empty() || options.only.count(name) > 0;
  };

  std::vector<SuiteResult> results;
  if (wanted("jaccard")) results.push_back(run_jaccard());
  if (wanted("cosine")) results.push_back(run_cosine());
  if (wanted("svd")) {
    SvdSuite cfg;
    if (options.svd_tolerance) cfg.sigma_tol = *options.svd_tolerance;
    results.push_back(run_svd(cfg));
  }
  if (wanted("wordnet")) results.push_back(run_wordnet());

  bool ok = true;
  for (const auto& r : results) {
    out << fmt::format("{} {:<8} {:>6} checks {:>4} failed  {:.3f}s\n", r.passed() ? "PASS" : "FAIL", r.name,
                       r.checks, r.failures, r.seconds);
    if (!r.passed() && !r.first_failure.empty()) out << "     first failure: " << r.first_failure << '\n';
    ok = ok && r.passed();
  }
  out << fmt::format("{} of {} suites passed\n",
                     std::count_if(results.begin(), results.end(), [](const SuiteResult& r) { return r.passed(); }),
                     results.size());
  return ok;
}

}  // namespace imgplag::selftest
