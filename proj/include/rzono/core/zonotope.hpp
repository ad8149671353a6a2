#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rzono/core/combination.hpp"
#include "rzono/core/error.hpp"
#include "rzono/core/linalg.hpp"
#include "rzono/core/numeric.hpp"
#include "rzono/core/parallel.hpp"
#include "rzono/core/vector.hpp"

namespace rzono {

/// The body scale * (g_1bar + ... + g_nbar), a Minkowski sum of segments
/// [o, g_i]. Generator order never affects any computed value.
class Zonotope {
public:
  explicit Zonotope(std::size_t dim, std::vector<Vector> generators = {}, double scale = 1.0)
      : dim_(dim), generators_(std::move(generators)), scale_(scale) {
    detail::require(dim_ >= 1, "zonotope dimension must be >= 1");
    detail::require(std::isfinite(scale_) && scale_ >= 0.0, "zonotope scale must be finite and >= 0");
    for (const auto& g : generators_) detail::require_dim(g, dim_, "zonotope generator");
  }

  /// Dimension taken from the first generator; the list must be nonempty.
  explicit Zonotope(const std::vector<Vector>& generators, double scale = 1.0)
      : Zonotope(leading_dim(generators), generators, scale) {}

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return generators_.size(); }
  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] const std::vector<Vector>& generators() const { return generators_; }

  [[nodiscard]] Zonotope with_scale(double scale) const { return Zonotope(dim_, generators_, scale); }

private:
  static std::size_t leading_dim(const std::vector<Vector>& generators) {
    return generators.empty() ? 0 : generators.front().dim();
  }

  std::size_t dim_;
  std::vector<Vector> generators_;
  double scale_;
};

enum class ValuationKind { intrinsic, mixed };

/// A valuation homogeneous of degree j: either the intrinsic volume V_j or
/// K -> V(K[j], y_{j+1}bar, ..., y_dbar) for fixed segment directions y.
struct ValuationSpec {
  ValuationKind kind = ValuationKind::intrinsic;
  int degree = 1;
  std::vector<Vector> fixed_segments;

  static ValuationSpec intrinsic(int j) { return {ValuationKind::intrinsic, j, {}}; }
  static ValuationSpec mixed(int j, std::vector<Vector> fixed) {
    return {ValuationKind::mixed, j, std::move(fixed)};
  }

  [[nodiscard]] std::size_t j() const { return static_cast<std::size_t>(degree); }

  void validate(std::size_t d) const {
    detail::require(degree >= 1 && static_cast<std::size_t>(degree) <= d,
                    "valuation degree j=" + std::to_string(degree) + " must lie in [1, " +
                        std::to_string(d) + "]");
    if (kind == ValuationKind::intrinsic) {
      detail::require(fixed_segments.empty(), "intrinsic valuation takes no fixed segments");
      return;
    }
    detail::require(fixed_segments.size() == d - j(),
                    "mixed valuation of degree " + std::to_string(degree) + " in R^" +
                        std::to_string(d) + " needs exactly " + std::to_string(d - j()) +
                        " fixed segments");
    for (const auto& y : fixed_segments) detail::require_dim(y, d, "fixed segment");
  }
};

/// phi evaluated on a single sum of exactly j segments. For V_j this is the
/// j-volume of the parallelepiped; for the mixed kind it is
/// (j!/d!) |det(x_1, ..., x_j, y_{j+1}, ..., y_d)|.
class SubsetTerm {
public:
  SubsetTerm(const ValuationSpec& spec, std::size_t d) : spec_(&spec), d_(d) {
    spec.validate(d);
    if (spec.kind == ValuationKind::mixed) {
      coefficient_ = to_double(factorial(spec.j())) / to_double(factorial(d));
      for (const auto& y : spec.fixed_segments) fixed_.push_back(y.data());
    }
  }

  [[nodiscard]] std::size_t degree() const { return spec_->j(); }
  [[nodiscard]] std::size_t dim() const { return d_; }

  struct Workspace {
    LinalgWorkspace linalg;
    std::vector<const double*> columns;
    std::vector<const double*> selection;
  };

  /// `columns` must hold exactly j pointers to d-vectors.
  double operator()(std::span<const double* const> columns, Workspace& ws) const {
    if (spec_->kind == ValuationKind::intrinsic) {
      if (columns.size() == d_) return abs_determinant(columns, d_, ws.linalg);
      return span_volume(columns, d_, ws.linalg);
    }
    ws.columns.assign(columns.begin(), columns.end());
    ws.columns.insert(ws.columns.end(), fixed_.begin(), fixed_.end());
    return coefficient_ * abs_determinant(ws.columns, d_, ws.linalg);
  }

private:
  const ValuationSpec* spec_;
  std::size_t d_;
  double coefficient_ = 1.0;
  std::vector<const double*> fixed_;
};

/// Number of lexicographically consecutive terms summed per chunk. Chunk
/// boundaries, and hence the floating-point result, do not depend on the
/// number of workers.
inline constexpr std::uint64_t kSubsetChunkTerms = 8192;

namespace detail {

inline void check_budget(u128 terms, const ExecutionOptions& options, const char* what) {
  if (terms > options.term_budget)
    throw CapacityError(std::string(what) + ": exact enumeration needs " + to_string(terms) +
                        " terms, above the budget of " + std::to_string(options.term_budget) +
                        "; use the Monte Carlo / subsampled estimators instead");
}

}  // namespace detail

/// Deterministic compensated sum of `term(indices, workspace)` over all
/// k-subsets of {0..n-1}, visited in lexicographic order and reduced in fixed
/// chunks. `term_cost` is the number of budgeted terms one call accounts for.
template <typename Workspace, typename Term>
double sum_over_subsets(std::size_t n, std::size_t k, const ExecutionOptions& options, Term&& term,
                        std::uint64_t term_cost = 1, const char* what = "subset sum") {
  if (k > n) return 0.0;
  const u128 total = binomial(n, k);
  u128 cost;
  if (__builtin_mul_overflow(total, static_cast<u128>(term_cost), &cost))
    throw CapacityError(std::string(what) + ": term count overflows");
  detail::check_budget(cost, options, what);
  const auto total64 = static_cast<std::uint64_t>(total);
  const std::uint64_t chunks = (total64 + kSubsetChunkTerms - 1) / kSubsetChunkTerms;
  std::vector<double> partial(chunks);
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    const std::uint64_t first = c * kSubsetChunkTerms;
    const std::uint64_t count = std::min(kSubsetChunkTerms, total64 - first);
    auto indices = unrank_combination(first, n, k);
    Workspace ws;
    KahanSum<double> acc;
    for (std::uint64_t t = 0; t < count; ++t) {
      acc.add(term(std::span<const std::size_t>(indices), ws));
      next_combination(indices, n);
    }
    partial[c] = acc.value();
  });
  return ordered_sum<double>(partial);
}

namespace detail {

/// Sequential sum of `term` over the j-subsets of the given generators.
inline double subset_valuation_sum(std::span<const double* const> generators, const SubsetTerm& term,
                                   SubsetTerm::Workspace& ws) {
  const std::size_t n = generators.size();
  const std::size_t j = term.degree();
  if (n < j) return 0.0;
  std::vector<std::size_t> idx(j);
  for (std::size_t i = 0; i < j; ++i) idx[i] = i;
  std::vector<const double*> cols(j);
  KahanSum<double> acc;
  do {
    for (std::size_t i = 0; i < j; ++i) cols[i] = generators[idx[i]];
    acc.add(term(cols, ws));
  } while (next_combination(idx, n));
  return acc.value();
}

inline std::vector<const double*> pointers(const std::vector<Vector>& vectors) {
  std::vector<const double*> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) out.push_back(v.data());
  return out;
}

}  // namespace detail

/// j-volume of the parallelepiped spanned by j vectors in R^d, sqrt(det G^T G);
/// |det G| when j == d.
inline double parallelepiped_volume(std::span<const Vector> vectors) {
  detail::require(!vectors.empty(), "parallelepiped_volume: need at least one vector");
  const std::size_t d = vectors.front().dim();
  for (const auto& v : vectors) detail::require_dim(v, d, "parallelepiped_volume");
  detail::require(vectors.size() <= d, "parallelepiped_volume: more vectors than dimensions");
  std::vector<const double*> cols;
  for (const auto& v : vectors) cols.push_back(v.data());
  LinalgWorkspace ws;
  if (vectors.size() == d) return abs_determinant(cols, d, ws);
  return span_volume(cols, d, ws);
}

/// phi(scale * (g_1bar + ... + g_nbar)) = scale^j * sum over j-subsets of the
/// subset term.
inline double valuation(const Zonotope& z, const ValuationSpec& spec, const ExecutionOptions& options = {}) {
  const SubsetTerm term(spec, z.dim());
  const std::size_t j = spec.j();
  if (z.size() < j || z.scale() == 0.0) return 0.0;
  const auto gens = detail::pointers(z.generators());
  const double sum = sum_over_subsets<SubsetTerm::Workspace>(
      z.size(), j, options,
      [&](std::span<const std::size_t> idx, SubsetTerm::Workspace& ws) {
        ws.selection.resize(j);
        for (std::size_t i = 0; i < j; ++i) ws.selection[i] = gens[idx[i]];
        return term(ws.selection, ws);
      },
      1, "valuation");
  return std::pow(z.scale(), static_cast<double>(j)) * sum;
}

/// phi(xbar + Z) - phi(Z): the sum of the subset terms that contain the extra
/// segment x, where x enters unscaled and Z's generators carry Z's scale.
inline double segment_increment(const Zonotope& z, const ValuationSpec& spec, const Vector& x,
                                const ExecutionOptions& options = {}) {
  detail::require_dim(x, z.dim(), "segment_increment");
  const SubsetTerm term(spec, z.dim());
  const std::size_t j = spec.j();
  if (j == 1) {
    SubsetTerm::Workspace ws;
    const double* column = x.data();
    return term(std::span<const double* const>(&column, 1), ws);
  }
  if (z.size() < j - 1 || z.scale() == 0.0) return 0.0;
  const auto gens = detail::pointers(z.generators());
  const double sum = sum_over_subsets<SubsetTerm::Workspace>(
      z.size(), j - 1, options,
      [&](std::span<const std::size_t> idx, SubsetTerm::Workspace& ws) {
        ws.selection.resize(j);
        ws.selection[0] = x.data();
        for (std::size_t i = 0; i + 1 < j; ++i) ws.selection[i + 1] = gens[idx[i]];
        return term(ws.selection, ws);
      },
      1, "segment increment");
  return std::pow(z.scale(), static_cast<double>(j - 1)) * sum;
}

/// h(Z, u) = scale * sum_i max(<g_i, u>, 0).
inline double support_function(const Zonotope& z, const Vector& u) {
  detail::require_dim(u, z.dim(), "support_function");
  if (z.scale() == 0.0) return 0.0;
  KahanSum<double> acc;
  for (const auto& g : z.generators()) acc.add(std::max(dot(g, u), 0.0));
  return z.scale() * acc.value();
}

/// Largest |h_a(u) - h_b(u)| over the supplied directions: a lower estimate of
/// the Hausdorff distance that tightens as the direction set refines.
template <typename SupportA, typename SupportB>
double hausdorff_estimate(SupportA&& support_a, SupportB&& support_b, std::span<const Vector> directions) {
  detail::require(!directions.empty(), "hausdorff estimate: direction list is empty");
  double worst = 0.0;
  for (const auto& u : directions) worst = std::max(worst, std::abs(support_a(u) - support_b(u)));
  return worst;
}

inline double hausdorff_upper_bound(const Zonotope& a, const Zonotope& b, std::span<const Vector> directions) {
  detail::require(a.dim() == b.dim(), "hausdorff_upper_bound: dimension mismatch");
  for (const auto& u : directions) detail::require_dim(u, a.dim(), "direction");
  return hausdorff_estimate([&](const Vector& u) { return support_function(a, u); },
                            [&](const Vector& u) { return support_function(b, u); }, directions);
}

/// |LHS - RHS| of phi(x_1bar+...+x_nbar) = C(n-j,p-j)^{-1} sum over p-subsets
/// of phi(subset sum), both sides by exact enumeration.
inline double subset_identity_residual(const std::vector<Vector>& generators, const ValuationSpec& spec,
                                       std::size_t p, const ExecutionOptions& options = {}) {
  detail::require(!generators.empty(), "subset_identity_residual: no generators");
  const std::size_t n = generators.size();
  const std::size_t j = static_cast<std::size_t>(std::max(spec.degree, 0));
  detail::require(p >= j && p <= n, "subset_identity_residual: need j <= p <= n");
  const Zonotope z(generators);
  const SubsetTerm term(spec, z.dim());
  const double lhs = valuation(z, spec, options);
  const auto gens = detail::pointers(generators);
  const double rhs_sum = sum_over_subsets<SubsetTerm::Workspace>(
      n, p, options,
      [&](std::span<const std::size_t> idx, SubsetTerm::Workspace& ws) {
        std::vector<const double*> chosen(p);
        for (std::size_t i = 0; i < p; ++i) chosen[i] = gens[idx[i]];
        return detail::subset_valuation_sum(chosen, term, ws);
      },
      static_cast<std::uint64_t>(binomial(p, j)), "subset identity");
  const double rhs = rhs_sum / to_double(binomial(n - j, p - j));
  return std::abs(lhs - rhs);
}

}  // namespace rzono
