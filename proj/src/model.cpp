#include "freshcache/model.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <type_traits>

#include <fmt/format.h>

#include "freshcache/error.hpp"

namespace freshcache {

namespace {

// Neumaier's variant of Kahan summation; robust when terms are not sorted
// by magnitude.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

void require_finite(const char* field, double v) {
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

}  // namespace

void validate(const ItemParams& item) {
  require_finite("p", item.p);
  require_finite("lambda", item.lambda);
  if (item.p < 0.0 || item.p > 1.0) {
    throw ValidationError("p", fmt::format("must lie in [0, 1], got {}", item.p));
  }
  if (item.lambda < 0.0) {
    throw ValidationError("lambda", fmt::format("must be >= 0, got {}", item.lambda));
  }
}

void validate(const CostParams& costs) {
  require_finite("c_f", costs.c_f);
  require_finite("c_a", costs.c_a);
  if (costs.c_f <= 0.0) throw ValidationError("c_f", fmt::format("must be > 0, got {}", costs.c_f));
  if (costs.c_a < 0.0) throw ValidationError("c_a", fmt::format("must be >= 0, got {}", costs.c_a));
}

void validate(const CatalogRecipe& recipe) {
  if (recipe.n_items == 0) throw ValidationError("n_items", "must be >= 1");
  require_finite("zipf_popularity_z", recipe.zipf_popularity_z);
  std::visit(
      [&](const auto& profile) {
        using T = std::decay_t<decltype(profile)>;
        if constexpr (std::is_same_v<T, ConstantRefresh>) {
          require_finite("refresh_profile.lambda", profile.lambda);
          if (profile.lambda < 0.0) throw ValidationError("refresh_profile.lambda", "must be >= 0");
        } else if constexpr (std::is_same_v<T, ZipfRefresh>) {
          require_finite("refresh_profile.alpha", profile.alpha);
          require_finite("refresh_profile.lambda_avg", profile.lambda_avg);
          if (profile.lambda_avg < 0.0) {
            throw ValidationError("refresh_profile.lambda_avg", "must be >= 0");
          }
        } else {
          if (profile.values.size() != recipe.n_items) {
            throw ValidationError("refresh_profile.values",
                                  fmt::format("expected {} values, got {}", recipe.n_items,
                                              profile.values.size()));
          }
          for (double v : profile.values) {
            require_finite("refresh_profile.values", v);
            if (v < 0.0) throw ValidationError("refresh_profile.values", "rates must be >= 0");
          }
        }
      },
      recipe.refresh);
}

void validate(const Catalog& catalog) {
  if (catalog.items.empty()) throw ValidationError("items", "catalog must hold at least one item");
  require_finite("beta", catalog.beta);
  if (catalog.beta < 0.0) throw ValidationError("beta", "must be >= 0");
  validate(catalog.costs);
  CompensatedSum total;
  for (const auto& item : catalog.items) {
    validate(item);
    total.add(item.p);
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    throw ValidationError("p", fmt::format("popularities sum to {:.12f}, expected 1", total.value()));
  }
}

double generalized_harmonic(std::size_t n, double z) {
  CompensatedSum sum;
  // Smallest terms first for z > 0.
  for (std::size_t k = n; k >= 1; --k) sum.add(std::pow(static_cast<double>(k), -z));
  return sum.value();
}

std::vector<double> zipf_probabilities(std::size_t n, double z) {
  const double h = generalized_harmonic(n, z);
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = std::pow(static_cast<double>(k + 1), -z) / h;
  return p;
}

std::vector<double> refresh_rates(std::size_t n, const RefreshProfile& profile) {
  return std::visit(
      [n](const auto& prof) -> std::vector<double> {
        using T = std::decay_t<decltype(prof)>;
        if constexpr (std::is_same_v<T, ConstantRefresh>) {
          return std::vector<double>(n, prof.lambda);
        } else if constexpr (std::is_same_v<T, ZipfRefresh>) {
          if (prof.alpha == 0.0) return std::vector<double>(n, prof.lambda_avg);
          std::vector<double> w(n);
          CompensatedSum sum;
          for (std::size_t k = 0; k < n; ++k) {
            w[k] = std::pow(static_cast<double>(k + 1), -prof.alpha);
            sum.add(w[k]);
          }
          const double scale = prof.lambda_avg * static_cast<double>(n) / sum.value();
          for (double& v : w) v *= scale;
          return w;
        } else {
          return prof.values;
        }
      },
      profile);
}

Catalog build_catalog(const CatalogRecipe& recipe, double beta, const CostParams& costs) {
  validate(recipe);
  validate(costs);
  if (!std::isfinite(beta) || beta < 0.0) throw ValidationError("beta", "must be finite and >= 0");

  const auto p = zipf_probabilities(recipe.n_items, recipe.zipf_popularity_z);
  const auto lambda = refresh_rates(recipe.n_items, recipe.refresh);

  Catalog catalog;
  catalog.beta = beta;
  catalog.costs = costs;
  catalog.items.reserve(recipe.n_items);
  for (std::size_t k = 0; k < recipe.n_items; ++k) catalog.items.push_back({p[k], lambda[k]});
  return catalog;
}

}  // namespace freshcache
