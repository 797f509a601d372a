#pragma once

#include <string>
#include <string_view>

namespace slabeb {

enum class SlabFamily { Laplace, Cauchy, QuasiCauchy };

/// Heavy-tailed slab component of the spike-and-slab mixture. `param` is an
/// inverse scale: Laplace(a) has density (a/2)e^{-a|u|}, Cauchy(1/lambda) has
/// density (lambda/pi)(1 + lambda^2 u^2)^{-1}. The quasi-Cauchy slab is
/// parameter-free; see docs/quasi_cauchy.md for its density and marginal.
struct SlabSpec {
  SlabFamily family = SlabFamily::Laplace;
  double param = 1.0;

  static SlabSpec laplace(double a);
  static SlabSpec cauchy(double lambda);
  static SlabSpec quasi_cauchy();

  /// Grammar: `lap:<a>`, `cauchy:<lambda>`, `quasicauchy`.
  static SlabSpec parse(std::string_view text);
  std::string str() const;

  double density(double u) const;
  double log_density(double u) const;

  /// Tail exponent kappa in gamma(y)^{-1} * integral_y^inf gamma ~ y^{kappa-1}:
  /// 1 for Laplace, 2 for Cauchy and (taken on trust, same tail order) quasi-Cauchy.
  double tail_kappa() const;

  bool has_closed_form_marginal() const { return family != SlabFamily::Cauchy; }
};

}  // namespace slabeb
