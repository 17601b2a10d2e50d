#include "depsgld/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <vector>

#include "depsgld/error.hpp"

namespace depsgld {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ConvexSet::ConvexSet(Shape shape, std::size_t dim) : shape_(std::move(shape)), dim_(dim) {
  std::visit(Overloaded{
                 [&](const IntervalBox& b) {
                   const bool interior = (b.lower.array() < 0.0).all() && (b.upper.array() > 0.0).all();
                   inner_ = interior ? std::min(b.lower.cwiseAbs().minCoeff(), b.upper.minCoeff()) : 0.0;
                   outer_ = b.lower.cwiseAbs().cwiseMax(b.upper.cwiseAbs()).norm();
                 },
                 [&](const L2Ball& b) {
                   const double c = b.center.norm();
                   inner_ = std::max(0.0, b.radius - c);
                   outer_ = c + b.radius;
                 },
                 [&](const L1Ball& b) {
                   inner_ = b.radius / std::sqrt(static_cast<double>(b.dim));
                   outer_ = b.radius;
                 },
             },
             shape_);
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw InvalidArgument("box bounds must be non-empty and of equal length");
  }
  if (!(lower.array() < upper.array()).all()) {
    throw InvalidArgument("box bounds need lower < upper in every coordinate");
  }
  const auto d = static_cast<std::size_t>(lower.size());
  return ConvexSet(IntervalBox{std::move(lower), std::move(upper)}, d);
}

ConvexSet ConvexSet::box(std::size_t dim, double lo, double hi) {
  const auto d = static_cast<Eigen::Index>(dim);
  return box(Vector::Constant(d, lo), Vector::Constant(d, hi));
}

ConvexSet ConvexSet::l2_ball(std::size_t dim, double radius) {
  return l2_ball(Vector::Zero(static_cast<Eigen::Index>(dim)), radius);
}

ConvexSet ConvexSet::l2_ball(Vector center, double radius) {
  if (center.size() == 0) throw InvalidArgument("l2 ball needs dimension >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("l2 ball radius must be positive and finite");
  }
  const auto d = static_cast<std::size_t>(center.size());
  return ConvexSet(L2Ball{std::move(center), radius}, d);
}

ConvexSet ConvexSet::l1_ball(std::size_t dim, double radius) {
  if (dim == 0) throw InvalidArgument("l1 ball needs dimension >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("l1 ball radius must be positive and finite");
  }
  return ConvexSet(L1Ball{dim, radius}, dim);
}

std::string ConvexSet::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const IntervalBox& b) {
                   os << "box(d=" << dim_ << ", lower=" << b.lower.minCoeff()
                      << ", upper=" << b.upper.maxCoeff() << ")";
                 },
                 [&](const L2Ball& b) {
                   os << "l2_ball(d=" << dim_ << ", radius=" << b.radius
                      << ", |center|=" << b.center.norm() << ")";
                 },
                 [&](const L1Ball& b) { os << "l1_ball(d=" << dim_ << ", radius=" << b.radius << ")"; },
             },
             shape_);
  return os.str();
}

void ConvexSet::check_dim(const ConstVectorRef& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) +
                          ", constraint set has dimension " + std::to_string(dim_));
  }
}

void project_l1_ball(const ConstVectorRef& x, double radius, VectorRef out) {
  const double l1 = x.lpNorm<1>();
  if (l1 <= radius) {
    out = x;
    return;
  }
  std::vector<double> mags(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(x[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cumulative += mags[j];
    const double candidate = (cumulative - radius) / static_cast<double>(j + 1);
    if (mags[j] - candidate > 0.0) theta = candidate;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double shrunk = std::max(std::abs(x[i]) - theta, 0.0);
    out[i] = std::copysign(shrunk, x[i]);
  }
}

void ConvexSet::project_into(const ConstVectorRef& x, VectorRef out) const {
  check_dim(x);
  std::visit(Overloaded{
                 [&](const IntervalBox& b) { out = x.cwiseMax(b.lower).cwiseMin(b.upper); },
                 [&](const L2Ball& b) {
                   const double r = (x - b.center).norm();
                   if (r <= b.radius) {
                     out = x;
                   } else {
                     out = b.center + (b.radius / r) * (x - b.center);
                   }
                 },
                 [&](const L1Ball& b) { project_l1_ball(x, b.radius, out); },
             },
             shape_);
}

Vector ConvexSet::project(const ConstVectorRef& x) const {
  Vector out(x.size());
  project_into(x, out);
  return out;
}

double ConvexSet::distance(const ConstVectorRef& x) const { return (x - project(x)).norm(); }

bool ConvexSet::contains(const ConstVectorRef& x, double tol) const { return distance(x) <= tol; }

Vector ConvexSet::sample_uniform(RngStream& rng) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Vector out(d);
  std::visit(Overloaded{
                 [&](const IntervalBox& b) {
                   for (Eigen::Index i = 0; i < d; ++i) {
                     out[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * rng.uniform();
                   }
                 },
                 [&](const L2Ball& b) {
                   Vector dir(d);
                   double n = 0.0;
                   while (n == 0.0) {
                     rng.fill_normal(dir);
                     n = dir.norm();
                   }
                   const double r = b.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
                   out = b.center + (r / n) * dir;
                 },
                 [&](const L1Ball& b) {
                   // Dirichlet(1, ..., 1) over d + 1 coordinates; the extra one is slack.
                   double total = 0.0;
                   Vector e(d);
                   for (Eigen::Index i = 0; i < d; ++i) {
                     e[i] = -std::log1p(-rng.uniform());
                     total += e[i];
                   }
                   total += -std::log1p(-rng.uniform());
                   for (Eigen::Index i = 0; i < d; ++i) {
                     const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                     out[i] = sign * b.radius * e[i] / total;
                   }
                 },
             },
             shape_);
  return out;
}

ProxParams::ProxParams(double g) : gamma(g) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw InvalidArgument("proximal parameter gamma must be positive and finite");
  }
}

bool ProxParams::outside_bias_regime() const noexcept { return gamma >= std::exp(-1.0); }

double moreau_envelope(const ConvexSet& set, const ProxParams& prox, const ConstVectorRef& x) {
  const double dist = set.distance(x);
  return dist * dist / (2.0 * prox.gamma);
}

Vector moreau_gradient(const ConvexSet& set, const ProxParams& prox, const ConstVectorRef& x) {
  return (x - set.project(x)) / prox.gamma;
}

}  // namespace depsgld
