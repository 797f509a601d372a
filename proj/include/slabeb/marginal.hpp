#pragma once

#include <memory>

#include "slabeb/slab.hpp"

namespace slabeb {

enum class MarginalBackend { ClosedForm, AdaptiveQuadrature };

struct MarginalOptions {
  MarginalBackend backend;
  double rel_tol = 1e-10;
  /// Build a cubic-interpolation table over |x| <= 50 at construction and use
  /// it for g/g'/g'' (quadrature backend only). Interpolation error <= 1e-8.
  bool interpolation_table = false;
};

/// The noise-convolved slab marginal g = phi * gamma with derivatives, plus
/// beta(x) = g/phi(x) - 1. Laplace and quasi-Cauchy slabs evaluate in closed
/// form through the scaled Gaussian tail; the Cauchy slab integrates
/// adaptively (optionally through the table). Immutable after construction.
class MarginalDensity {
 public:
  explicit MarginalDensity(SlabSpec slab);
  MarginalDensity(SlabSpec slab, MarginalOptions opt);

  struct Derivs {
    double g, g1, g2;
  };
  /// Bundle of the ratios every posterior formula needs; one evaluation pass.
  struct Ratios {
    double log_g_over_phi;  // log(g/phi)
    double dlog_g;          // g'/g
    double g2_over_g;       // g''/g
  };

  Derivs eval(double x) const;
  double g(double x) const;
  double log_g(double x) const;
  double log_g_over_phi(double x) const;
  double beta(double x) const;
  double dlog_g(double x) const;
  double g2_over_g(double x) const;
  Ratios ratios(double x) const;

  const SlabSpec& slab() const { return slab_; }
  MarginalBackend backend() const { return opt_.backend; }
  double rel_tol() const { return opt_.rel_tol; }
  bool has_table() const { return table_ != nullptr; }

  static MarginalBackend default_backend(const SlabSpec& slab);

 private:
  struct Table;
  SlabSpec slab_;
  MarginalOptions opt_;
  std::shared_ptr<const Table> table_;

  Derivs eval_quadrature(double x) const;
};

}  // namespace slabeb
