#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "depsgld/linalg.hpp"
#include "depsgld/rng.hpp"

namespace depsgld {

struct IntervalBox {
  Vector lower;
  Vector upper;
};

struct L2Ball {
  Vector center;
  double radius = 1.0;
};

/// Origin-centered cross-polytope {x : ||x||_1 <= radius}.
struct L1Ball {
  std::size_t dim = 1;
  double radius = 1.0;
};

/// Closed convex constraint set K with exact Euclidean projection.
class ConvexSet {
 public:
  using Shape = std::variant<IntervalBox, L2Ball, L1Ball>;

  static ConvexSet box(Vector lower, Vector upper);
  /// Same interval [lo, hi] in every coordinate.
  static ConvexSet box(std::size_t dim, double lo, double hi);
  static ConvexSet l2_ball(std::size_t dim, double radius);
  static ConvexSet l2_ball(Vector center, double radius);
  static ConvexSet l1_ball(std::size_t dim, double radius);

  std::size_t dim() const noexcept { return dim_; }
  const Shape& shape() const noexcept { return shape_; }
  std::string describe() const;

  /// r and R with B(0, r) in K in B(0, R). r is 0 when 0 is not interior.
  double inner_radius() const noexcept { return inner_; }
  double outer_radius() const noexcept { return outer_; }
  /// False for sets that violate B(0, r) in K with r > 0 (off-center balls,
  /// boxes not containing the origin in their interior).
  bool origin_interior() const noexcept { return inner_ > 0.0; }

  Vector project(const ConstVectorRef& x) const;
  /// Allocation-free form for hot loops; out may not alias x.
  void project_into(const ConstVectorRef& x, VectorRef out) const;
  double distance(const ConstVectorRef& x) const;
  bool contains(const ConstVectorRef& x, double tol = 1e-10) const;

  /// Uniform draw from K (rejection-free for all three shapes).
  Vector sample_uniform(RngStream& rng) const;

 private:
  ConvexSet(Shape shape, std::size_t dim);
  void check_dim(const ConstVectorRef& x) const;

  Shape shape_;
  std::size_t dim_ = 0;
  double inner_ = 0.0;
  double outer_ = 0.0;
};

/// Moreau-Yosida regularization parameter gamma.
struct ProxParams {
  double gamma = 1.0;

  explicit ProxParams(double g);
  /// The W2 bias bound for pi^gamma only covers gamma < 1/e.
  bool outside_bias_regime() const noexcept;
};

/// ||x - P_K(x)||^2 / (2 gamma).
double moreau_envelope(const ConvexSet& set, const ProxParams& prox, const ConstVectorRef& x);
/// (x - P_K(x)) / gamma.
Vector moreau_gradient(const ConvexSet& set, const ProxParams& prox, const ConstVectorRef& x);

/// Euclidean projection onto {x : ||x||_1 <= radius} by sorting magnitudes
/// and soft-thresholding.
void project_l1_ball(const ConstVectorRef& x, double radius, VectorRef out);

}  // namespace depsgld
